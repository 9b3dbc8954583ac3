#include "matchbench/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "matchbench/errors.hpp"
#include "matchbench/generators.hpp"
#include "matchbench/harness.hpp"
#include "matchbench/instance_io.hpp"
#include "matchbench/optimal.hpp"
#include "matchbench/oracle.hpp"

namespace matchbench {

namespace {

constexpr std::uint64_t kDefaultSeed = 0;
constexpr std::uint64_t kDefaultTrials = 10000;

// One instance source per command: an instance file or a generator family.
struct SourceOptions {
    std::string instance_path;
    std::string family;
    std::uint64_t k = 0;
    std::uint64_t z = 0;
    std::uint64_t n = 0;
    double eps = 0.0;
    std::string cls = "dichotomous";
    double density = 0.5;
    std::uint64_t gen_seed = 0;

    bool has_eps = false;
};

void add_source_options(CLI::App* cmd, SourceOptions& src,
                        bool allow_positional = false) {
    auto* path = cmd->add_option("--instance", src.instance_path,
                                 "instance JSON file");
    if (allow_positional) {
        cmd->add_option("path", src.instance_path, "instance JSON file")
            ->excludes(path);
    }
    cmd->add_option("--family", src.family,
                    "generator family: fact, hardness or random")
        ->check(CLI::IsMember({"fact", "hardness", "random"}));
    cmd->add_option("--k", src.k, "fact/hardness: k");
    cmd->add_option("--z", src.z, "fact: number of zero-row agents");
    cmd->add_option("--n", src.n, "hardness/random: instance size");
    cmd->add_option("--eps", src.eps,
                    "hardness: total epsilon (also the hardness-ceiling "
                    "bound epsilon)")
        ->each([&src](const std::string&) { src.has_eps = true; });
    cmd->add_option("--class", src.cls,
                    "random: dichotomous, normalized or unit_range")
        ->check(CLI::IsMember({"dichotomous", "normalized", "unit_range"}));
    cmd->add_option("--density", src.density,
                    "random dichotomous: probability of a 1 entry");
    cmd->add_option("--gen-seed", src.gen_seed, "random: generator seed");
}

Instance resolve_instance(const SourceOptions& src, std::string& desc) {
    const bool from_file = !src.instance_path.empty();
    const bool from_family = !src.family.empty();
    if (from_file == from_family) {
        throw std::invalid_argument(
            "exactly one of --instance and --family is required");
    }
    if (from_file) {
        desc = std::filesystem::path(src.instance_path).stem().string();
        return load_instance(src.instance_path);
    }
    if (src.family == "fact") {
        desc = "fact-k" + std::to_string(src.k) + "-z" + std::to_string(src.z);
        return gen_fact_instance(src.k, src.z);
    }
    if (src.family == "hardness") {
        if (!src.has_eps) {
            throw std::invalid_argument("--family hardness requires --eps");
        }
        desc = "hardness-n" + std::to_string(src.n) + "-k" +
               std::to_string(src.k) + "-eps" + format_double(src.eps);
        return gen_hardness_chunked(src.n, src.k, src.eps);
    }
    desc = "random-" + src.cls + "-n" + std::to_string(src.n) + "-d" +
           format_double(src.density) + "-s" + std::to_string(src.gen_seed);
    return gen_random(src.n, preference_class_from_string(src.cls),
                      src.density, src.gen_seed);
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open --out " + out_path);
    out << text;
}

int run_parsed(const CLI::App& app);

} // namespace

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"one-sided matching mechanism workbench"};
    app.require_subcommand(1);

    SourceOptions src;
    std::string mechanism = "rsd";
    std::uint64_t trials = kDefaultTrials;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
    std::string format = "csv";
    std::string out_path;
    std::string bound;
    std::string check;
    std::string suite;
    bool allocation = false;
    std::size_t oracle_cap = 0; // 0: per-operation default
    std::size_t enum_budget = kDefaultEnumerationBudget;

    auto add_run_like = [&](CLI::App* cmd) {
        cmd->add_option("--trials", trials, "Monte Carlo trials");
        cmd->add_option("--seed", seed, "experiment seed (default 0)");
        cmd->add_option("--threads", threads,
                        "worker threads; results do not depend on this");
    };
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "write output to this file");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate an instance file");
    add_source_options(gen, src);
    gen->add_option("--out", out_path, "instance file to write")->required();

    CLI::App* optimal =
        app.add_subcommand("optimal", "print the optimal welfare");
    add_source_options(optimal, src, /*allow_positional=*/true);

    CLI::App* run =
        app.add_subcommand("run", "Monte Carlo estimate of a mechanism");
    add_source_options(run, src);
    run->add_option("--mechanism", mechanism,
                    "rsd, sd-fixed, rsd-star, uniform-max or ranking");
    run->add_option("--enum-budget", enum_budget,
                    "max enumerated maximum matchings (uniform-max)");
    add_run_like(run);
    add_output(run);

    CLI::App* exact =
        app.add_subcommand("exact", "exact RSD expectation by recursion");
    add_source_options(exact, src, /*allow_positional=*/true);
    exact->add_flag("--allocation", allocation,
                    "also emit the expected allocation matrix");
    exact->add_option("--oracle-cap", oracle_cap,
                      "max n for the exact recursion (hard cap 14)");
    add_output(exact);

    CLI::App* verify = app.add_subcommand(
        "verify", "bound, truthfulness or symmetry verification");
    add_source_options(verify, src);
    verify->add_option("--bound", bound,
                       "dich-third, norm-quadratic, norm-exponential, "
                       "unit-range, rsd-star-069 or hardness-ceiling");
    verify->add_option("--check", check, "truthfulness or symmetry")
        ->check(CLI::IsMember({"truthfulness", "symmetry"}));
    verify->add_option("--suite", suite,
                       "dichotomous-exhaustive (size taken from --n)")
        ->check(CLI::IsMember({"dichotomous-exhaustive"}));
    verify->add_option("--mechanism", mechanism, "mechanism under test");
    verify->add_option("--oracle-cap", oracle_cap,
                       "max n for exhaustive checks");
    verify->add_option("--enum-budget", enum_budget,
                       "max enumerated maximum matchings");
    add_run_like(verify);
    add_output(verify);

    CLI::App* fact = app.add_subcommand(
        "fact", "RSD ratio on the k-vs-z worst-case family at scale");
    fact->add_option("--k", src.k, "valued agents (even)")->required();
    fact->add_option("--z", src.z, "zero-row agents");
    add_run_like(fact);
    add_output(fact);

    try {
        std::vector<std::string> mutable_args(args.rbegin(), args.rend());
        app.parse(std::move(mutable_args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::string desc;
        if (gen->parsed()) {
            const Instance inst = resolve_instance(src, desc);
            save_instance(inst, out_path);
            return 0;
        }
        if (optimal->parsed()) {
            const Instance inst = resolve_instance(src, desc);
            std::cout << format_double(max_weight_matching(inst).value)
                      << '\n';
            return 0;
        }
        if (run->parsed()) {
            const Instance inst = resolve_instance(src, desc);
            const MechanismId mech = mechanism_from_string(mechanism);
            McOptions opts;
            opts.threads = threads;
            opts.enumeration_budget = enum_budget;
            const TrialBatch batch =
                run_monte_carlo(inst, mech, trials, seed, opts);
            std::string text;
            if (format == "csv") {
                text = results_csv_header() + "\n" +
                       results_csv_row(desc, batch) + "\n";
            } else {
                nlohmann::json doc = to_json(batch);
                doc["instance"] = desc;
                text = doc.dump() + "\n";
            }
            write_output(text, out_path);
            return 0;
        }
        if (exact->parsed()) {
            const Instance inst = resolve_instance(src, desc);
            OracleLimits limits;
            if (oracle_cap != 0) limits.rsd_recursion_cap = oracle_cap;
            const double welfare = exact_rsd_welfare(inst, limits);
            std::string text;
            if (format == "csv") {
                text = format_double(welfare) + "\n";
                if (allocation) {
                    const ExpectedAllocation alloc =
                        exact_rsd_allocation(inst, limits);
                    for (std::size_t a = 0; a < alloc.n; ++a) {
                        for (std::size_t i = 0; i < alloc.n; ++i) {
                            text += (i == 0 ? "" : ",") +
                                    format_double(alloc.prob(a, i));
                        }
                        text += "\n";
                    }
                    for (std::size_t a = 0; a < alloc.n; ++a) {
                        text += (a == 0 ? "" : ",") +
                                format_double(alloc.expected_values[a]);
                    }
                    text += "\n";
                }
            } else {
                nlohmann::json doc;
                doc["instance"] = desc;
                doc["welfare"] = welfare;
                if (allocation) {
                    const ExpectedAllocation alloc =
                        exact_rsd_allocation(inst, limits);
                    nlohmann::json probs = nlohmann::json::array();
                    for (std::size_t a = 0; a < alloc.n; ++a) {
                        nlohmann::json row = nlohmann::json::array();
                        for (std::size_t i = 0; i < alloc.n; ++i) {
                            row.push_back(alloc.prob(a, i));
                        }
                        probs.push_back(std::move(row));
                    }
                    doc["probs"] = std::move(probs);
                    doc["expected_values"] = alloc.expected_values;
                }
                text = doc.dump() + "\n";
            }
            write_output(text, out_path);
            return 0;
        }
        if (verify->parsed()) {
            const int modes = int(!bound.empty()) + int(!check.empty()) +
                              int(!suite.empty());
            if (modes != 1) {
                throw std::invalid_argument(
                    "verify needs exactly one of --bound, --check, --suite");
            }
            if (!bound.empty()) {
                const Instance inst = resolve_instance(src, desc);
                const MechanismId mech = mechanism_from_string(mechanism);
                McOptions opts;
                opts.threads = threads;
                const TrialBatch batch =
                    run_monte_carlo(inst, mech, trials, seed, opts);
                const std::optional<double> eps =
                    src.has_eps ? std::optional<double>(src.eps)
                                : std::nullopt;
                const BoundReport report = check_bound(
                    inst, batch, bound_from_string(bound), eps, desc);
                std::string text;
                if (format == "csv") {
                    text = results_csv_header() + "\n" +
                           results_csv_row(desc, batch, &report) + "\n";
                } else {
                    text = to_json(report).dump() + "\n";
                }
                write_output(text, out_path);
                return report.pass ? 0 : 1;
            }
            OracleLimits limits;
            if (oracle_cap != 0) limits.exhaustive_cap = oracle_cap;
            limits.enumeration_budget = enum_budget;
            if (!check.empty()) {
                const Instance inst = resolve_instance(src, desc);
                const MechanismId mech = mechanism_from_string(mechanism);
                bool pass;
                nlohmann::json doc;
                doc["instance"] = desc;
                doc["mechanism"] = mechanism;
                doc["check"] = check;
                if (check == "truthfulness") {
                    const TruthfulnessReport rep =
                        check_truthfulness(inst, mech, limits);
                    pass = rep.truthful;
                    doc["max_gain"] = rep.max_gain;
                    doc["worst_agent"] = rep.worst_agent;
                    doc["worst_declaration"] = rep.worst_declaration;
                    doc["partial_basis"] = rep.partial_basis;
                } else {
                    const SymmetryReport rep =
                        check_symmetry(inst, mech, limits);
                    pass = rep.symmetric;
                    doc["max_difference"] = rep.max_difference;
                    doc["expected_values"] = rep.expected_values;
                }
                doc["pass"] = pass;
                write_output(doc.dump() + "\n", out_path);
                return pass ? 0 : 1;
            }
            // --suite dichotomous-exhaustive over all instances of size --n.
            // One representative per agent relabeling; both checks are
            // invariant under it, so orbit coverage is complete.
            const std::size_t suite_n = src.n == 0 ? 3 : src.n;
            const MechanismId mech = mechanism_from_string(mechanism);
            const SweepReport sweep = sweep_dichotomous_exhaustive(
                suite_n, mech, /*canonical_only=*/true, limits);
            nlohmann::json doc;
            doc["suite"] = suite;
            doc["mechanism"] = mechanism;
            doc["n"] = suite_n;
            doc["instances"] = sweep.instances;
            doc["truthfulness_failures"] = sweep.truthfulness_failures;
            doc["symmetry_failures"] = sweep.symmetry_failures;
            doc["worst_gain"] = sweep.worst_gain;
            doc["worst_symmetry_diff"] = sweep.worst_symmetry_diff;
            const bool pass = sweep.truthfulness_failures == 0 &&
                              sweep.symmetry_failures == 0;
            doc["pass"] = pass;
            write_output(doc.dump() + "\n", out_path);
            return pass ? 0 : 1;
        }
        if (fact->parsed()) {
            const FactReport report =
                reproduce_fact(src.k, src.z, trials, seed, threads);
            std::string text;
            if (format == "csv") {
                text =
                    "k,z,trials,seed,mean,stderr,optimal,ratio\n" +
                    std::to_string(report.k) + "," + std::to_string(report.z) +
                    "," + std::to_string(report.batch.trials) + "," +
                    std::to_string(report.batch.seed) + "," +
                    format_double(report.batch.mean) + "," +
                    format_double(report.batch.standard_error()) + "," +
                    format_double(report.optimal) + "," +
                    format_double(report.ratio) + "\n";
            } else {
                text = to_json(report).dump() + "\n";
            }
            write_output(text, out_path);
            return 0;
        }
        throw std::invalid_argument("no subcommand given");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace matchbench

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "matchbench/instance.hpp"
#include "matchbench/limits.hpp"
#include "matchbench/mechanisms.hpp"

namespace matchbench {

/**
 * Monte Carlo welfare estimate. Samples are streamed through Welford
 * accumulators in fixed 1024-trial chunks that are merged in trial-index
 * order, so a (seed, trials) pair gives bitwise-identical results no
 * matter how many worker threads ran the trials.
 */
struct TrialBatch {
    std::string mechanism;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double m2 = 0.0; // sum of squared deviations from the mean

    double variance() const; // sample variance; 0 when trials < 2
    double standard_error() const;
    std::pair<double, double> ci95() const; // mean +- 1.96 * stderr
};

struct McOptions {
    unsigned threads = 1;
    std::size_t enumeration_budget = kDefaultEnumerationBudget;
};

// Trial t draws from the sub-stream derived from (seed, t).
TrialBatch run_monte_carlo(const Instance& inst, MechanismId mech,
                           std::uint64_t trials, std::uint64_t seed,
                           const McOptions& opts = {});

// The quantitative guarantees the suite verifies. All compare a measured
// mechanism mean against a value computed from the optimum welfare.
enum class BoundId {
    DichThird,       // rsd on dichotomous: mean >= opt/3
    NormQuadratic,   // rsd: mean >= opt^2 / (e*n)
    NormExponential, // rsd: mean >= opt - n + n*exp(-opt/n)
    UnitRange,       // rsd on unit-range: mean >= opt / sqrt(e*n)
    RsdStar069,      // rsd-star on dichotomous: mean >= 0.69 * opt
    HardnessCeiling, // rsd on chunked instances: mean <= opt^2/n + eps
};

const char* to_string(BoundId id);
BoundId bound_from_string(const std::string& name);

struct BoundReport {
    std::string bound_id;
    std::string mechanism;
    std::string instance_desc;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double measured = 0.0;
    double bound_value = 0.0;
    double slack = 0.0; // statistical allowance, 3 standard errors
    bool lower_bound = true;
    bool pass = false;
};

// eps is required by (and only by) HardnessCeiling.
BoundReport check_bound(const Instance& inst, const TrialBatch& batch,
                        BoundId id, std::optional<double> eps = std::nullopt,
                        std::string_view instance_desc = "");

/**
 * RSD on the gen_fact_instance(k, z) family at scales where materializing
 * the (k+z) x (k+z) matrix is impossible. Only the k agents with nonzero
 * rows can add welfare, so a trial simulates just their relative order and
 * the depletion of the k valued items; the z zero-row agents collectively
 * consume uniformly random remaining items.
 */
struct FactReport {
    std::uint64_t k = 0;
    std::uint64_t z = 0;
    TrialBatch batch;    // mechanism "rsd"
    double optimal = 0.0; // k
    double ratio = 0.0;   // optimal / mean
};

FactReport reproduce_fact(std::uint64_t k, std::uint64_t z,
                          std::uint64_t trials, std::uint64_t seed,
                          unsigned threads = 1);

// Result emission. One CSV schema covers plain batches and bound reports;
// bound columns stay empty for plain batches. Doubles are printed with
// shortest round-trip formatting, so equal runs emit equal bytes.
std::string results_csv_header();
std::string results_csv_row(std::string_view instance_id,
                            const TrialBatch& batch,
                            const BoundReport* report = nullptr);
std::string format_double(double v);

nlohmann::json to_json(const TrialBatch& batch);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const FactReport& report);

} // namespace matchbench

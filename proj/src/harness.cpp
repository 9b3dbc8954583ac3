#include "matchbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <vector>

#include "matchbench/errors.hpp"
#include "matchbench/optimal.hpp"
#include "matchbench/oracle.hpp"
#include "matchbench/rng.hpp"

namespace matchbench {

double TrialBatch::variance() const {
    return trials < 2 ? 0.0 : m2 / static_cast<double>(trials - 1);
}

double TrialBatch::standard_error() const {
    return trials < 1 ? 0.0
                      : std::sqrt(variance() / static_cast<double>(trials));
}

std::pair<double, double> TrialBatch::ci95() const {
    const double half = 1.96 * standard_error();
    return {mean - half, mean + half};
}

namespace {

constexpr std::uint64_t kChunkTrials = 1024;

struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    // Chan et al. pairwise merge; applied in chunk order only.
    void merge(const Moments& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double delta = o.mean - mean;
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(o.count);
        const double nab = na + nb;
        mean += delta * nb / nab;
        m2 += o.m2 + delta * delta * na * nb / nab;
        count += o.count;
    }
};

// Runs chunk c = 0..nchunks-1 through `work` on the requested number of
// threads; chunk results land in a pre-sized vector so the final in-order
// merge is independent of scheduling.
template <class Work>
void run_chunked(std::uint64_t nchunks, unsigned threads, Work&& work) {
    if (threads <= 1 || nchunks <= 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) work(c);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        try {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                work(c);
            }
        } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<std::uint64_t>(threads, nchunks);
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct PreparedMechanism {
    MechanismId mech;
    std::vector<std::size_t> identity_order;       // sd-fixed
    std::optional<MatchingEnumeration> max_matchings; // uniform-max
    std::optional<BipartiteGraph> graph;           // ranking
    std::optional<DeclarationProfile> truthful;    // uniform-max
};

PreparedMechanism prepare_mechanism(const Instance& inst, MechanismId mech,
                                    const McOptions& opts) {
    PreparedMechanism pre;
    pre.mech = mech;
    switch (mech) {
        case MechanismId::SdFixed: {
            pre.identity_order.resize(inst.size());
            for (std::size_t i = 0; i < inst.size(); ++i) {
                pre.identity_order[i] = i;
            }
            break;
        }
        case MechanismId::UniformMax: {
            pre.truthful = DeclarationProfile::truthful(inst);
            pre.max_matchings = enumerate_max_matchings(
                declaration_graph(*pre.truthful), opts.enumeration_budget);
            break;
        }
        case MechanismId::Ranking: {
            pre.graph = BipartiteGraph::from_instance(inst);
            break;
        }
        default:
            break;
    }
    return pre;
}

double simulate_trial(const Instance& inst, const PreparedMechanism& pre,
                      RngStream rng) {
    switch (pre.mech) {
        case MechanismId::Rsd:
            return social_welfare(inst, rsd(inst, rng));
        case MechanismId::SdFixed:
            return social_welfare(
                inst, sd_fixed_order(inst, pre.identity_order, rng));
        case MechanismId::RsdStar:
            return social_welfare(inst, rsd_star(inst, rng));
        case MechanismId::UniformMax: {
            const auto& all = *pre.max_matchings;
            Matching m = all.matchings[rng.uniform_index(all.matchings.size())];
            complete_lowest_index(m);
            return social_welfare(inst, m);
        }
        case MechanismId::Ranking: {
            const std::size_t n = inst.size();
            RngStream order_rng = rng.derive("agent-order");
            RngStream rank_rng = rng.derive("item-ranks");
            const auto order = random_permutation(n, order_rng);
            const auto item_rank = random_permutation(n, rank_rng);
            std::vector<std::vector<std::size_t>> arrivals(n);
            for (std::size_t t = 0; t < n; ++t) {
                arrivals[t] = pre.graph->adj[order[t]];
            }
            double welfare = 0.0;
            for (const auto& [arrival, item] : ranking(item_rank, arrivals)) {
                welfare += inst.value(order[arrival], item);
            }
            return welfare;
        }
    }
    throw std::logic_error("unhandled mechanism");
}

} // namespace

TrialBatch run_monte_carlo(const Instance& inst, MechanismId mech,
                           std::uint64_t trials, std::uint64_t seed,
                           const McOptions& opts) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    const PreparedMechanism pre = prepare_mechanism(inst, mech, opts);
    const RngStream base(seed);

    const std::uint64_t nchunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<Moments> chunks(nchunks);
    run_chunked(nchunks, opts.threads, [&](std::uint64_t c) {
        Moments mo;
        const std::uint64_t hi = std::min(trials, (c + 1) * kChunkTrials);
        for (std::uint64_t t = c * kChunkTrials; t < hi; ++t) {
            mo.add(simulate_trial(inst, pre, base.derive(t)));
        }
        chunks[c] = mo;
    });

    Moments total;
    for (const Moments& mo : chunks) total.merge(mo);
    return TrialBatch{to_string(mech), trials, seed, total.mean, total.m2};
}

// ---------------------------------------------------------------------------
// Bound catalog
// ---------------------------------------------------------------------------

const char* to_string(BoundId id) {
    switch (id) {
        case BoundId::DichThird: return "dich-third";
        case BoundId::NormQuadratic: return "norm-quadratic";
        case BoundId::NormExponential: return "norm-exponential";
        case BoundId::UnitRange: return "unit-range";
        case BoundId::RsdStar069: return "rsd-star-069";
        case BoundId::HardnessCeiling: return "hardness-ceiling";
    }
    return "?";
}

BoundId bound_from_string(const std::string& name) {
    if (name == "dich-third") return BoundId::DichThird;
    if (name == "norm-quadratic") return BoundId::NormQuadratic;
    if (name == "norm-exponential") return BoundId::NormExponential;
    if (name == "unit-range") return BoundId::UnitRange;
    if (name == "rsd-star-069") return BoundId::RsdStar069;
    if (name == "hardness-ceiling") return BoundId::HardnessCeiling;
    throw std::invalid_argument("unknown bound \"" + name + "\"");
}

BoundReport check_bound(const Instance& inst, const TrialBatch& batch,
                        BoundId id, std::optional<double> eps,
                        std::string_view instance_desc) {
    const auto cls = inst.preference_class();
    const double n = static_cast<double>(inst.size());

    const auto require_class = [&](PreferenceClass want) {
        if (cls != want) {
            throw std::invalid_argument(std::string(to_string(id)) +
                                        " does not apply to class " +
                                        to_string(cls));
        }
    };
    const auto require_mechanism = [&](const char* want) {
        if (batch.mechanism != want) {
            throw std::invalid_argument(std::string(to_string(id)) +
                                        " expects a " + want +
                                        " batch, got " + batch.mechanism);
        }
    };

    const double opt = max_weight_matching(inst).value;
    double bound_value = 0.0;
    bool lower = true;
    switch (id) {
        case BoundId::DichThird:
            require_class(PreferenceClass::Dichotomous);
            require_mechanism("rsd");
            bound_value = opt / 3.0;
            break;
        case BoundId::NormQuadratic:
            require_mechanism("rsd");
            bound_value = opt * opt / (std::numbers::e * n);
            break;
        case BoundId::NormExponential:
            require_mechanism("rsd");
            bound_value = opt - n + n * std::exp(-opt / n);
            break;
        case BoundId::UnitRange:
            require_class(PreferenceClass::UnitRange);
            require_mechanism("rsd");
            bound_value = opt / std::sqrt(std::numbers::e * n);
            break;
        case BoundId::RsdStar069:
            require_class(PreferenceClass::Dichotomous);
            require_mechanism("rsd-star");
            bound_value = 0.69 * opt;
            break;
        case BoundId::HardnessCeiling:
            require_class(PreferenceClass::Normalized);
            require_mechanism("rsd");
            if (!eps) {
                throw std::invalid_argument(
                    "hardness-ceiling requires the instance eps");
            }
            bound_value = opt * opt / n + *eps;
            lower = false;
            break;
    }

    BoundReport report;
    report.bound_id = to_string(id);
    report.mechanism = batch.mechanism;
    report.instance_desc = std::string(instance_desc);
    report.trials = batch.trials;
    report.seed = batch.seed;
    report.measured = batch.mean;
    report.bound_value = bound_value;
    report.slack = 3.0 * batch.standard_error();
    report.lower_bound = lower;
    report.pass = lower ? batch.mean >= bound_value - report.slack
                        : batch.mean <= bound_value + report.slack;
    return report;
}

// ---------------------------------------------------------------------------
// Fact-instance simulation at scale
// ---------------------------------------------------------------------------

namespace {

// k distinct values from [0, bound), sorted ascending.
void sample_sorted_distinct(std::uint64_t count, std::uint64_t bound,
                            RngStream& rng, std::vector<std::uint64_t>& out) {
    out.clear();
    out.reserve(count);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    while (out.size() < count) {
        const std::uint64_t x = rng.uniform_index(bound);
        if (seen.insert(x).second) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
}

/**
 * One RSD trial on the fact instance without the matrix.
 *
 * Every uniform pick (a zero-row agent's turn, or a valued agent whose
 * 1-items are gone) consumes the next surviving entry of a uniformly
 * shuffled consumption queue over all n items; by deferred decisions this
 * is distributed exactly like drawing uniformly from the remaining items.
 * Only the k valued items' queue slots matter, so the queue is stored as
 * their sorted slots plus a junk counter implicit in the pointer.
 */
class FactTrial {
public:
    FactTrial(std::uint64_t k, std::uint64_t z) : k_(k), z_(z), half_(k / 2) {}

    double run(RngStream& rng) {
        const std::uint64_t n = k_ + z_;

        sample_sorted_distinct(k_, n, rng, turn_pos_);
        agent_at_.resize(k_);
        for (std::size_t j = 0; j < k_; ++j) agent_at_[j] = j;
        rng.shuffle(agent_at_);

        sample_sorted_distinct(k_, n, rng, item_slot_);
        item_at_.resize(k_);
        for (std::size_t j = 0; j < k_; ++j) item_at_[j] = j;
        rng.shuffle(item_at_);

        alive_.assign(k_, 1);

        // the "band" items valued by every agent < k/2
        band_.clear();
        pos_in_band_.assign(k_, 0);
        for (std::size_t item = half_ - 1; item < k_; ++item) {
            pos_in_band_[item] = band_.size();
            band_.push_back(item);
        }

        cursor_ = 0;
        next_slot_ = 0;
        std::uint64_t dummies_done = 0;
        double welfare = 0.0;

        for (std::size_t j = 0; j < k_; ++j) {
            const std::uint64_t before = turn_pos_[j] - j;
            advance(before - dummies_done);
            dummies_done = before;

            const std::size_t a = agent_at_[j];
            if (a >= half_) {
                if (alive_[a]) {
                    welfare += 1.0;
                    kill(a);
                } else {
                    advance(1); // all favorites tie at 0: one uniform pick
                }
            } else {
                const bool extra = (a + 1 < half_) && alive_[a];
                const std::size_t count = band_.size() + (extra ? 1 : 0);
                if (count == 0) {
                    advance(1);
                } else {
                    const std::size_t idx = rng.uniform_index(count);
                    const std::size_t item =
                        idx < band_.size() ? band_[idx] : a;
                    welfare += 1.0;
                    kill(item);
                }
            }
        }
        return welfare;
    }

private:
    void kill(std::size_t item) {
        alive_[item] = 0;
        if (item >= half_ - 1) {
            // swap-remove from the band candidate list
            const std::size_t pos = pos_in_band_[item];
            const std::size_t last = band_.back();
            band_[pos] = last;
            pos_in_band_[last] = pos;
            band_.pop_back();
        }
    }

    // Consume `cnt` surviving queue entries (junk or still-alive items);
    // slots of already-killed items are skipped for free.
    void advance(std::uint64_t cnt) {
        while (cnt > 0) {
            const std::uint64_t next_special =
                next_slot_ < k_ ? item_slot_[next_slot_] : UINT64_MAX;
            if (next_special == UINT64_MAX || next_special >= cursor_ + cnt) {
                cursor_ += cnt; // nothing but junk in range
                return;
            }
            cnt -= next_special - cursor_; // junk up to the special slot
            const std::size_t item = item_at_[next_slot_];
            if (alive_[item]) {
                kill(item);
                --cnt;
            }
            cursor_ = next_special + 1;
            ++next_slot_;
        }
    }

    std::uint64_t k_, z_, half_;
    std::vector<std::uint64_t> turn_pos_, item_slot_;
    std::vector<std::size_t> agent_at_, item_at_;
    std::vector<char> alive_;
    std::vector<std::size_t> band_, pos_in_band_;
    std::uint64_t cursor_ = 0;
    std::size_t next_slot_ = 0;
};

} // namespace

FactReport reproduce_fact(std::uint64_t k, std::uint64_t z,
                          std::uint64_t trials, std::uint64_t seed,
                          unsigned threads) {
    if (k < 2 || k % 2 != 0) {
        throw std::invalid_argument("k must be even and >= 2");
    }
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");

    const RngStream base(seed);
    const std::uint64_t nchunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<Moments> chunks(nchunks);
    run_chunked(nchunks, threads, [&](std::uint64_t c) {
        FactTrial sim(k, z);
        Moments mo;
        const std::uint64_t hi = std::min(trials, (c + 1) * kChunkTrials);
        for (std::uint64_t t = c * kChunkTrials; t < hi; ++t) {
            RngStream rng = base.derive(t);
            mo.add(sim.run(rng));
        }
        chunks[c] = mo;
    });

    Moments total;
    for (const Moments& mo : chunks) total.merge(mo);

    FactReport report;
    report.k = k;
    report.z = z;
    report.batch = TrialBatch{"rsd", trials, seed, total.mean, total.m2};
    report.optimal = static_cast<double>(k);
    report.ratio = total.mean > 0.0
                       ? report.optimal / total.mean
                       : std::numeric_limits<double>::infinity();
    return report;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string results_csv_header() {
    return "instance_id,mechanism,trials,seed,mean,stderr,bound_id,"
           "bound_value,pass";
}

std::string results_csv_row(std::string_view instance_id,
                            const TrialBatch& batch,
                            const BoundReport* report) {
    std::string row;
    row += instance_id;
    row += ',';
    row += batch.mechanism;
    row += ',';
    row += std::to_string(batch.trials);
    row += ',';
    row += std::to_string(batch.seed);
    row += ',';
    row += format_double(batch.mean);
    row += ',';
    row += format_double(batch.standard_error());
    row += ',';
    if (report != nullptr) {
        row += report->bound_id;
        row += ',';
        row += format_double(report->bound_value);
        row += ',';
        row += report->pass ? "true" : "false";
    } else {
        row += ",,";
    }
    return row;
}

nlohmann::json to_json(const TrialBatch& batch) {
    const auto [lo, hi] = batch.ci95();
    return nlohmann::json{{"mechanism", batch.mechanism},
                          {"trials", batch.trials},
                          {"seed", batch.seed},
                          {"mean", batch.mean},
                          {"m2", batch.m2},
                          {"stderr", batch.standard_error()},
                          {"ci95", {lo, hi}}};
}

nlohmann::json to_json(const BoundReport& report) {
    return nlohmann::json{{"bound_id", report.bound_id},
                          {"mechanism", report.mechanism},
                          {"instance", report.instance_desc},
                          {"trials", report.trials},
                          {"seed", report.seed},
                          {"measured", report.measured},
                          {"bound_value", report.bound_value},
                          {"slack", report.slack},
                          {"direction", report.lower_bound ? "lower" : "upper"},
                          {"pass", report.pass}};
}

nlohmann::json to_json(const FactReport& report) {
    return nlohmann::json{{"k", report.k},
                          {"z", report.z},
                          {"trials", report.batch.trials},
                          {"seed", report.batch.seed},
                          {"mean", report.batch.mean},
                          {"stderr", report.batch.standard_error()},
                          {"optimal", report.optimal},
                          {"ratio", report.ratio}};
}

} // namespace matchbench

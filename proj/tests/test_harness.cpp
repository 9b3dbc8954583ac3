#include <doctest.h>

#include <cmath>
#include <numbers>

#include "matchbench/generators.hpp"
#include "matchbench/harness.hpp"
#include "matchbench/oracle.hpp"
#include "matchbench/rng.hpp"

using namespace matchbench;

namespace {

Instance identity_instance(std::size_t n) {
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    return Instance(n, std::move(v), PreferenceClass::Dichotomous);
}

} // namespace

TEST_CASE("run_monte_carlo: degenerate distribution has zero stderr") {
    const Instance eye = identity_instance(3);
    for (const std::uint64_t trials : {1ull, 7ull, 5000ull}) {
        const TrialBatch batch =
            run_monte_carlo(eye, MechanismId::Rsd, trials, 42);
        CHECK(batch.mean == 3.0);
        CHECK(batch.standard_error() == 0.0);
        const auto [lo, hi] = batch.ci95();
        CHECK(lo == 3.0);
        CHECK(hi == 3.0);
    }
}

TEST_CASE("run_monte_carlo mean is within 4 stderr of the exact oracle") {
    const Instance inst =
        Instance::from_rows({{1, 1}, {1, 0}}, PreferenceClass::Dichotomous);
    const TrialBatch batch =
        run_monte_carlo(inst, MechanismId::Rsd, 100000, 7);
    CHECK(std::abs(batch.mean - 1.75) < 4.0 * batch.standard_error());
}

TEST_CASE("run_monte_carlo is deterministic and thread-count independent") {
    const Instance inst =
        gen_random(9, PreferenceClass::Normalized, 0.5, 11);
    const TrialBatch a = run_monte_carlo(inst, MechanismId::Rsd, 4321, 99);
    const TrialBatch b = run_monte_carlo(inst, MechanismId::Rsd, 4321, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.m2 == b.m2);

    McOptions threaded;
    threaded.threads = 4;
    const TrialBatch c =
        run_monte_carlo(inst, MechanismId::Rsd, 4321, 99, threaded);
    CHECK(a.mean == c.mean);
    CHECK(a.m2 == c.m2);
}

TEST_CASE("run_monte_carlo covers every mechanism id") {
    const Instance dich =
        gen_random(6, PreferenceClass::Dichotomous, 0.5, 13);
    for (const auto mech :
         {MechanismId::Rsd, MechanismId::SdFixed, MechanismId::RsdStar,
          MechanismId::UniformMax, MechanismId::Ranking}) {
        const TrialBatch batch = run_monte_carlo(dich, mech, 500, 3);
        CHECK(batch.trials == 500);
        CHECK(batch.mean >= 0.0);
        CHECK(batch.mean <= 6.0);
    }
}

TEST_CASE("monte carlo agrees with the oracle across small instances") {
    RngStream rng(123);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(7); // up to 8
        const PreferenceClass cls = trial % 2 == 0
                                        ? PreferenceClass::Dichotomous
                                        : PreferenceClass::Normalized;
        const Instance inst = gen_random(n, cls, 0.4, rng.next_u64());
        const double exact = exact_rsd_welfare(inst);
        const TrialBatch batch =
            run_monte_carlo(inst, MechanismId::Rsd, 100000, rng.next_u64());
        if (batch.standard_error() == 0.0) {
            CHECK(batch.mean == doctest::Approx(exact).epsilon(1e-9));
        } else {
            CHECK(std::abs(batch.mean - exact) <
                  4.0 * batch.standard_error());
        }
    }
}

TEST_CASE("check_bound: quadratic bound arithmetic at full welfare") {
    // all-ones normalized instance: optimum n, bound n/e
    const std::size_t n = 5;
    const Instance inst(n, std::vector<double>(n * n, 1.0),
                        PreferenceClass::Normalized);
    const TrialBatch batch = run_monte_carlo(inst, MechanismId::Rsd, 100, 1);
    const BoundReport rep =
        check_bound(inst, batch, BoundId::NormQuadratic);
    CHECK(rep.bound_value ==
          doctest::Approx(n / std::numbers::e).epsilon(1e-12));
    CHECK(rep.pass);
}

TEST_CASE("check_bound: dichotomous third on a small random suite") {
    RngStream rng(321);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + rng.uniform_index(10);
        const Instance inst =
            gen_random(n, PreferenceClass::Dichotomous, 0.3, rng.next_u64());
        const TrialBatch batch =
            run_monte_carlo(inst, MechanismId::Rsd, 4000, rng.next_u64());
        const BoundReport rep = check_bound(inst, batch, BoundId::DichThird);
        CHECK(rep.pass);
        CHECK(rep.lower_bound);
    }
}

TEST_CASE("check_bound: hardness ceiling on a chunked instance") {
    const Instance inst = gen_hardness_chunked(12, 3, 0.1);
    const TrialBatch batch = run_monte_carlo(inst, MechanismId::Rsd, 20000, 5);
    const BoundReport rep =
        check_bound(inst, batch, BoundId::HardnessCeiling, 0.1,
                    "hardness-n12-k3");
    CHECK(!rep.lower_bound);
    CHECK(rep.bound_value == doctest::Approx(9.0 / 12.0 + 0.1).epsilon(1e-12));
    CHECK(rep.pass);
}

TEST_CASE("check_bound: rsd-star 0.69 on a dichotomous instance") {
    const Instance inst =
        gen_random(12, PreferenceClass::Dichotomous, 0.4, 17);
    const TrialBatch batch =
        run_monte_carlo(inst, MechanismId::RsdStar, 20000, 23);
    const BoundReport rep = check_bound(inst, batch, BoundId::RsdStar069);
    CHECK(rep.pass);
}

TEST_CASE("check_bound rejects inapplicable pairs") {
    const Instance dich =
        gen_random(4, PreferenceClass::Dichotomous, 0.5, 3);
    const Instance norm = gen_random(4, PreferenceClass::Normalized, 0.5, 3);
    const TrialBatch rsd_batch =
        run_monte_carlo(norm, MechanismId::Rsd, 100, 1);
    const TrialBatch dich_batch =
        run_monte_carlo(dich, MechanismId::Rsd, 100, 1);

    CHECK_THROWS_AS(check_bound(norm, rsd_batch, BoundId::DichThird),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_bound(norm, rsd_batch, BoundId::UnitRange),
                    std::invalid_argument);
    // mechanism mismatch
    CHECK_THROWS_AS(check_bound(dich, dich_batch, BoundId::RsdStar069),
                    std::invalid_argument);
    // hardness ceiling needs eps
    CHECK_THROWS_AS(check_bound(norm, rsd_batch, BoundId::HardnessCeiling),
                    std::invalid_argument);
}

TEST_CASE("bound identifiers round-trip") {
    for (const auto id :
         {BoundId::DichThird, BoundId::NormQuadratic, BoundId::NormExponential,
          BoundId::UnitRange, BoundId::RsdStar069, BoundId::HardnessCeiling}) {
        CHECK(bound_from_string(to_string(id)) == id);
    }
    CHECK_THROWS_AS(bound_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("reproduce_fact matches the materialized oracle at small scale") {
    // the sparse simulation must agree with the exact oracle applied to
    // the explicit matrix
    struct Case {
        std::uint64_t k, z;
    };
    for (const Case c : {Case{2, 0}, Case{2, 1}, Case{4, 3}}) {
        const double exact =
            exact_rsd_welfare(gen_fact_instance(c.k, c.z));
        const FactReport rep = reproduce_fact(c.k, c.z, 200000, 31);
        REQUIRE(rep.batch.standard_error() > 0.0);
        CHECK(std::abs(rep.batch.mean - exact) <
              4.0 * rep.batch.standard_error());
        CHECK(rep.optimal == static_cast<double>(c.k));
    }
}

TEST_CASE("reproduce_fact: k=2 z=0 mean near 7/4, ratio near 8/7") {
    const FactReport rep = reproduce_fact(2, 0, 150000, 9);
    CHECK(std::abs(rep.batch.mean - 1.75) <
          4.0 * rep.batch.standard_error());
    CHECK(rep.ratio == doctest::Approx(2.0 / rep.batch.mean));
}

TEST_CASE("reproduce_fact is deterministic and thread-count independent") {
    const FactReport a = reproduce_fact(10, 50, 3000, 77);
    const FactReport b = reproduce_fact(10, 50, 3000, 77);
    CHECK(a.batch.mean == b.batch.mean);
    CHECK(a.batch.m2 == b.batch.m2);
    const FactReport c = reproduce_fact(10, 50, 3000, 77, /*threads=*/4);
    CHECK(a.batch.mean == c.batch.mean);
    CHECK(a.batch.m2 == c.batch.m2);
}

TEST_CASE("reproduce_fact ratio is stable under doubling the trials") {
    const FactReport half = reproduce_fact(100, 10000, 2000, 3);
    const FactReport full = reproduce_fact(100, 10000, 4000, 3);
    // delta-method stderr of ratio = opt * stderr_mean / mean^2
    const auto ratio_stderr = [](const FactReport& r) {
        return r.optimal * r.batch.standard_error() /
               (r.batch.mean * r.batch.mean);
    };
    const double tol = 3.0 * std::hypot(ratio_stderr(half), ratio_stderr(full));
    CHECK(std::abs(half.ratio - full.ratio) < tol);
}

TEST_CASE("reproduce_fact argument errors") {
    CHECK_THROWS_AS(reproduce_fact(3, 1, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(reproduce_fact(2, 1, 0, 0), std::invalid_argument);
}

TEST_CASE("csv rows are stable and carry bound fields when present") {
    const Instance inst = gen_hardness_chunked(6, 2, 0.1);
    const TrialBatch batch = run_monte_carlo(inst, MechanismId::Rsd, 1000, 2);
    CHECK(results_csv_row("x", batch) == results_csv_row("x", batch));
    const BoundReport rep =
        check_bound(inst, batch, BoundId::HardnessCeiling, 0.1, "x");
    const std::string row = results_csv_row("x", batch, &rep);
    CHECK(row.find("hardness-ceiling") != std::string::npos);
    CHECK(row.find(",true") != std::string::npos);
    CHECK(results_csv_header().find("bound_id") != std::string::npos);
}

#include <doctest.h>

#include "matchbench/generators.hpp"
#include "matchbench/optimal.hpp"
#include "matchbench/rng.hpp"
#include "oracle_helpers.hpp"

using namespace matchbench;

TEST_CASE("max_weight_matching on named instances") {
    CHECK(max_weight_matching(gen_fact_instance(4, 2)).value == 4.0);
    CHECK(max_weight_matching(gen_hardness_chunked(4, 2, 0.2)).value == 2.0);
    const Instance zeros = Instance::from_rows(
        {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, PreferenceClass::Dichotomous);
    CHECK(max_weight_matching(zeros).value == 0.0);
}

TEST_CASE("max_weight_matching returns a complete matching achieving value") {
    RngStream rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(8);
        const Instance inst =
            gen_random(n, PreferenceClass::Normalized, 0.5, rng.next_u64());
        const OptimalResult res = max_weight_matching(inst);
        CHECK(res.matching.complete());
        CHECK(res.value == social_welfare(inst, res.matching));
    }
}

TEST_CASE("max_cardinality_matching on named instances") {
    const Instance all_ones =
        Instance::from_rows({{1, 1}, {1, 1}}, PreferenceClass::Dichotomous);
    CHECK(max_cardinality_matching(all_ones).value == 2.0);

    const Instance two =
        Instance::from_rows({{1, 1}, {0, 1}}, PreferenceClass::Dichotomous);
    CHECK(max_cardinality_matching(two).value == 2.0);

    std::vector<double> eye(25, 0.0);
    for (int i = 0; i < 5; ++i) eye[i * 5 + i] = 1.0;
    CHECK(max_cardinality_matching(
              Instance(5, eye, PreferenceClass::Dichotomous))
              .value == 5.0);
}

TEST_CASE("max_cardinality_matching rejects non-dichotomous input") {
    const Instance inst =
        Instance::from_rows({{0.5, 0}, {0, 1}}, PreferenceClass::Normalized);
    CHECK_THROWS_AS(max_cardinality_matching(inst), std::invalid_argument);
}

TEST_CASE("dichotomous agreement: Hopcroft-Karp equals Hungarian") {
    RngStream rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(12);
        const double density = 0.1 + 0.8 * rng.uniform_real();
        const Instance inst = gen_random(n, PreferenceClass::Dichotomous,
                                         density, rng.next_u64());
        const OptimalResult hk = max_cardinality_matching(inst);
        const OptimalResult hung = max_weight_matching(inst);
        CHECK(hk.value == hung.value);
        CHECK(hk.matching.complete());
    }
}

TEST_CASE("oracle equivalence against n! enumeration for n <= 7") {
    RngStream rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(7);
        const PreferenceClass cls =
            trial % 2 == 0 ? PreferenceClass::Dichotomous
                           : PreferenceClass::Normalized;
        const Instance inst = gen_random(n, cls, 0.4, rng.next_u64());
        const double expected = testing::brute_force_optimal(inst);
        CHECK(max_weight_matching(inst).value ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("raising a single entry never decreases the optimum") {
    RngStream rng(91);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(6);
        const Instance inst =
            gen_random(n, PreferenceClass::Normalized, 0.5, rng.next_u64());
        const double before = max_weight_matching(inst).value;

        std::vector<double> bumped = inst.values();
        const std::size_t idx = rng.uniform_index(n * n);
        bumped[idx] = std::min(1.0, bumped[idx] + rng.uniform_real());
        const Instance raised(n, bumped, PreferenceClass::Normalized);
        CHECK(max_weight_matching(raised).value >= before - 1e-12);
    }
}

#include <doctest.h>

#include <stdexcept>

#include "matchbench/errors.hpp"
#include "matchbench/generators.hpp"
#include "matchbench/instance.hpp"
#include "matchbench/rng.hpp"

using namespace matchbench;

namespace {

Instance identity_instance(std::size_t n) {
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    return Instance(n, std::move(v), PreferenceClass::Dichotomous);
}

} // namespace

TEST_CASE("class invariants are enforced on construction") {
    CHECK_THROWS_AS(Instance(0, {}, PreferenceClass::Dichotomous),
                    std::invalid_argument);
    CHECK_THROWS_AS(Instance(2, {1, 0, 1}, PreferenceClass::Dichotomous),
                    std::invalid_argument);
    CHECK_THROWS_AS(Instance(2, {0.5, 0, 1, 0}, PreferenceClass::Dichotomous),
                    ValidationError);
    CHECK_THROWS_AS(Instance(2, {1.5, 0, 1, 0}, PreferenceClass::Normalized),
                    ValidationError);
    CHECK_THROWS_AS(Instance(1, {1}, PreferenceClass::UnitRange),
                    std::invalid_argument);
    // unit-range rows need min 0 and max 1 exactly
    CHECK_THROWS_AS(
        Instance(2, {1, 0.5, 1, 0}, PreferenceClass::UnitRange),
        ValidationError);
    CHECK_NOTHROW(Instance(2, {1, 0, 0, 1}, PreferenceClass::UnitRange));
}

TEST_CASE("matching enforces injectivity and completeness bookkeeping") {
    Matching m(3);
    CHECK(!m.complete());
    m.assign(0, 2);
    CHECK_THROWS_AS(m.assign(1, 2), std::invalid_argument); // item reuse
    CHECK_THROWS_AS(m.assign(0, 1), std::invalid_argument); // agent reuse
    m.assign(1, 0);
    m.assign(2, 1);
    CHECK(m.complete());
}

TEST_CASE("social_welfare: identity instance, identity matching") {
    const Instance inst = identity_instance(3);
    Matching m(3);
    for (std::size_t a = 0; a < 3; ++a) m.assign(a, a);
    CHECK(social_welfare(inst, m) == 3.0);
}

TEST_CASE("social_welfare: fully unassigned matching is 0") {
    const Instance inst = identity_instance(3);
    CHECK(social_welfare(inst, Matching(3)) == 0.0);
}

TEST_CASE("social_welfare: best complete matching of [[1,1],[1,0]] is 2") {
    const Instance inst = Instance::from_rows({{1, 1}, {1, 0}},
                                              PreferenceClass::Dichotomous);
    // the two complete matchings, enumerated by hand
    Matching cross(2);
    cross.assign(0, 1);
    cross.assign(1, 0);
    Matching straight(2);
    straight.assign(0, 0);
    straight.assign(1, 1);
    CHECK(social_welfare(inst, cross) == 2.0);
    CHECK(social_welfare(inst, straight) == 1.0);
}

TEST_CASE("social_welfare rejects size mismatch") {
    const Instance inst = identity_instance(3);
    CHECK_THROWS_AS(social_welfare(inst, Matching(2)), std::invalid_argument);
}

TEST_CASE("social_welfare is additive over disjoint sub-matchings") {
    RngStream rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(6);
        const Instance inst =
            gen_random(n, PreferenceClass::Normalized, 0.5, rng.next_u64());
        const auto perm = random_permutation(n, rng);
        const std::size_t cut = rng.uniform_index(n + 1);
        Matching full(n), head(n), tail(n);
        for (std::size_t a = 0; a < n; ++a) {
            full.assign(a, perm[a]);
            (a < cut ? head : tail).assign(a, perm[a]);
        }
        const double lhs = social_welfare(inst, full);
        const double rhs =
            social_welfare(inst, head) + social_welfare(inst, tail);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("complete_lowest_index pairs leftovers in ascending order") {
    Matching m(4);
    m.assign(1, 2);
    complete_lowest_index(m);
    CHECK(m.item_of(0) == 0);
    CHECK(m.item_of(1) == 2);
    CHECK(m.item_of(2) == 1);
    CHECK(m.item_of(3) == 3);
}

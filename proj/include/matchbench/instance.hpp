#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace matchbench {

// Which valuation domain an instance lives in. Dichotomous entries are
// exact 0.0/1.0 so all dichotomous arithmetic stays exact in doubles.
enum class PreferenceClass {
    Dichotomous, // every entry in {0, 1}
    Normalized,  // every entry in [0, 1]
    UnitRange,   // every row has min exactly 0 and max exactly 1
};

const char* to_string(PreferenceClass cls);
PreferenceClass preference_class_from_string(const std::string& name);

/**
 * A one-sided matching instance: n agents, n items, and an n x n valuation
 * matrix with values[a][i] = value of item i to agent a. Immutable after
 * construction; construction enforces the class invariant.
 */
class Instance {
public:
    Instance(std::size_t n, std::vector<double> values, PreferenceClass cls);
    static Instance from_rows(const std::vector<std::vector<double>>& rows,
                              PreferenceClass cls);

    std::size_t size() const { return n_; }
    PreferenceClass preference_class() const { return class_; }

    double value(std::size_t agent, std::size_t item) const {
        return values_[agent * n_ + item];
    }
    std::span<const double> row(std::size_t agent) const {
        return {values_.data() + agent * n_, n_};
    }
    const std::vector<double>& values() const { return values_; }

    bool operator==(const Instance&) const = default;

private:
    std::size_t n_;
    PreferenceClass class_;
    std::vector<double> values_; // row-major, n_ * n_
};

/**
 * An assignment of items to agents, possibly partial while a mechanism is
 * still running. Injectivity (no item handed out twice) is enforced on
 * every assign().
 */
class Matching {
public:
    static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

    explicit Matching(std::size_t n);

    std::size_t size() const { return assignment_.size(); }
    std::size_t item_of(std::size_t agent) const { return assignment_[agent]; }
    bool assigned(std::size_t agent) const {
        return assignment_[agent] != kUnassigned;
    }
    bool item_used(std::size_t item) const { return item_used_[item]; }
    bool complete() const { return assigned_count_ == assignment_.size(); }
    std::size_t assigned_count() const { return assigned_count_; }
    const std::vector<std::size_t>& assignment() const { return assignment_; }

    void assign(std::size_t agent, std::size_t item);

    bool operator==(const Matching& other) const {
        return assignment_ == other.assignment_;
    }

private:
    std::vector<std::size_t> assignment_;
    std::vector<bool> item_used_;
    std::size_t assigned_count_ = 0;
};

// Pairs every still-unassigned agent with a still-unused item, both taken
// in ascending index order. Completes any partial matching.
void complete_lowest_index(Matching& m);

// Sum of values[a][m(a)] over assigned agents; unassigned agents add 0.
double social_welfare(const Instance& inst, const Matching& m);

} // namespace matchbench

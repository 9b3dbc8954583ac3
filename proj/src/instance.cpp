#include "matchbench/instance.hpp"

#include <cmath>
#include <stdexcept>

#include "matchbench/errors.hpp"

namespace matchbench {

const char* to_string(PreferenceClass cls) {
    switch (cls) {
        case PreferenceClass::Dichotomous: return "dichotomous";
        case PreferenceClass::Normalized: return "normalized";
        case PreferenceClass::UnitRange: return "unit_range";
    }
    return "?";
}

PreferenceClass preference_class_from_string(const std::string& name) {
    if (name == "dichotomous") return PreferenceClass::Dichotomous;
    if (name == "normalized") return PreferenceClass::Normalized;
    if (name == "unit_range") return PreferenceClass::UnitRange;
    throw ValidationError("unknown preference class \"" + name + "\"");
}

namespace {

std::string entry_name(std::size_t a, std::size_t i) {
    return "values[" + std::to_string(a) + "][" + std::to_string(i) + "]";
}

void validate(std::size_t n, const std::vector<double>& values,
              PreferenceClass cls) {
    if (n == 0) throw std::invalid_argument("instance requires n >= 1");
    if (values.size() != n * n) {
        throw std::invalid_argument("instance values must be n*n = " +
                                    std::to_string(n * n) + " entries, got " +
                                    std::to_string(values.size()));
    }
    if (cls == PreferenceClass::UnitRange && n < 2) {
        throw std::invalid_argument("unit_range requires n >= 2");
    }
    for (std::size_t a = 0; a < n; ++a) {
        double row_min = 1.0, row_max = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = values[a * n + i];
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                throw ValidationError(entry_name(a, i) + " = " +
                                      std::to_string(v) +
                                      " outside [0,1]");
            }
            if (cls == PreferenceClass::Dichotomous && v != 0.0 && v != 1.0) {
                throw ValidationError(entry_name(a, i) + " = " +
                                      std::to_string(v) +
                                      " not in {0,1} for class dichotomous");
            }
            row_min = std::min(row_min, v);
            row_max = std::max(row_max, v);
        }
        if (cls == PreferenceClass::UnitRange &&
            (row_min != 0.0 || row_max != 1.0)) {
            throw ValidationError("row " + std::to_string(a) +
                                  " violates unit_range: min=" +
                                  std::to_string(row_min) + " max=" +
                                  std::to_string(row_max));
        }
    }
}

} // namespace

Instance::Instance(std::size_t n, std::vector<double> values,
                   PreferenceClass cls)
    : n_(n), class_(cls), values_(std::move(values)) {
    validate(n_, values_, class_);
}

Instance Instance::from_rows(const std::vector<std::vector<double>>& rows,
                             PreferenceClass cls) {
    const std::size_t n = rows.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        if (rows[a].size() != n) {
            throw std::invalid_argument("row " + std::to_string(a) + " has " +
                                        std::to_string(rows[a].size()) +
                                        " entries, expected " +
                                        std::to_string(n));
        }
        flat.insert(flat.end(), rows[a].begin(), rows[a].end());
    }
    return Instance(n, std::move(flat), cls);
}

Matching::Matching(std::size_t n)
    : assignment_(n, kUnassigned), item_used_(n, false) {}

void Matching::assign(std::size_t agent, std::size_t item) {
    if (agent >= assignment_.size() || item >= item_used_.size()) {
        throw std::invalid_argument("matching assign out of range");
    }
    if (assignment_[agent] != kUnassigned) {
        throw std::invalid_argument("agent " + std::to_string(agent) +
                                    " already assigned");
    }
    if (item_used_[item]) {
        throw std::invalid_argument("item " + std::to_string(item) +
                                    " already assigned");
    }
    assignment_[agent] = item;
    item_used_[item] = true;
    ++assigned_count_;
}

void complete_lowest_index(Matching& m) {
    std::size_t item = 0;
    for (std::size_t a = 0; a < m.size(); ++a) {
        if (m.assigned(a)) continue;
        while (m.item_used(item)) ++item;
        m.assign(a, item);
    }
}

double social_welfare(const Instance& inst, const Matching& m) {
    if (m.size() != inst.size()) {
        throw std::invalid_argument(
            "matching size " + std::to_string(m.size()) +
            " does not match instance size " + std::to_string(inst.size()));
    }
    double total = 0.0;
    for (std::size_t a = 0; a < inst.size(); ++a) {
        if (m.assigned(a)) total += inst.value(a, m.item_of(a));
    }
    return total;
}

} // namespace matchbench

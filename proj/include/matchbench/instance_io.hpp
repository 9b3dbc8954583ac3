#pragma once

#include <filesystem>
#include <string>

#include "matchbench/instance.hpp"

namespace matchbench {

// Instance file format: a JSON object with exactly the keys
//   {"n": int, "class": "dichotomous"|"normalized"|"unit_range",
//    "values": [[...], ...]}
// where values is row-major, n rows of n numbers. Doubles are written with
// shortest round-trip precision, so save/load is exact.

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

} // namespace matchbench

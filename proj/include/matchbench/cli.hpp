#pragma once

#include <string>
#include <vector>

namespace matchbench {

// matchbench <gen|optimal|run|exact|verify|fact> ... — see README.
// Exit codes: 0 success, 1 a bound / truthfulness / symmetry report failed,
// 2 usage or validation error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args); // without argv[0]

} // namespace matchbench

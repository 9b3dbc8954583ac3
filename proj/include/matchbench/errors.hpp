#pragma once

#include <stdexcept>
#include <string>

namespace matchbench {

// Instance or declaration data violates a class invariant (entry out of
// domain, non-square matrix, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An instance file could not be parsed; the message names the offending
// line or field.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A guarded computation (memoized recursion, matching enumeration) would
// exceed its configured budget.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace matchbench

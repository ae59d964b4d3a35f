#pragma once

#include <stdexcept>

namespace rfde {

// Numerical procedure failed (divergent state, fixed-point iteration that
// did not reach its tolerance, ...).
class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rfde

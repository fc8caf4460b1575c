#pragma once

#include <stdexcept>
#include <string>

#include "phasefield/geometry.hpp"

namespace pf {

// Numerical failures (as opposed to input validation, which raises the
// std::invalid_argument / std::domain_error family). The CLI maps validation
// to exit code 1 and NumericalError to exit code 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The "+infinity otherwise" branch of the constrained functionals: the phase
// field left [0,1].
struct BoxConstraintViolation : NumericalError {
    BoxConstraintViolation(const std::string& msg, Point where, double value)
        : NumericalError(msg), where(where), value(value) {}
    Point where{0.0, 0.0};
    double value = 0.0;
};

struct ProfileSearchError : NumericalError {
    ProfileSearchError(const std::string& msg, double best_j) : NumericalError(msg), best_j(best_j) {}
    double best_j = 0.0;
};

struct SolverError : NumericalError {
    SolverError(const std::string& msg, double residual = 0.0) : NumericalError(msg), residual(residual) {}
    double residual = 0.0;
};

struct RepairError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace pf

#pragma once

#include <stdexcept>
#include <string>

namespace wedge {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text input (polynomial grammar, JSON payloads, schemas).
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Numerical solve did not reach the requested tolerance.
struct SolveFailure : Error {
    double best_residual;
    SolveFailure(const std::string& what, double best)
        : Error(what), best_residual(best) {}
};

} // namespace wedge

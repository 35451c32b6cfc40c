#pragma once

#include <stdexcept>
#include <string>

namespace qaffine {

// Raised when an iterative numerical procedure fails: eigensolver past its
// sweep cap, a finite-difference ladder without a consistent Richardson pair,
// a trajectory without recurrences.  Precondition violations throw
// std::invalid_argument instead.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qaffine

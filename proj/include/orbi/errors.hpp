#pragma once

#include <stdexcept>
#include <string>

namespace orbi {

/// Violated input contract (bad argument, malformed file, out-of-range value).
/// The CLI maps this to exit code 2.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric procedure failed to reach its requested tolerance or budget.
/// The CLI maps this to exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace orbi

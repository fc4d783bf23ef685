#pragma once

#include <stdexcept>
#include <string>

namespace pglab {

/// Input failed a structural invariant (bad config, malformed file, invalid MDP).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A theorem-level assumption (absorbing probability, ergodicity, positiveness)
/// does not hold for the given instance.
class AssumptionViolation : public std::runtime_error {
public:
    explicit AssumptionViolation(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative run produced non-finite values.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pglab

#pragma once

#include <stdexcept>
#include <string>

namespace driftplan {

/// Inputs violate a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// A value object no longer satisfies its own invariants (e.g. broken
/// conjugate symmetry detected downstream).
class InconsistentState : public std::runtime_error {
public:
    explicit InconsistentState(const std::string& what) : std::runtime_error(what) {}
};

/// An integration or linear-algebra step produced NaN/Inf or an
/// irrecoverably singular matrix.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// A placement request cannot be satisfied under the distance constraints.
class InfeasiblePlacement : public std::runtime_error {
public:
    InfeasiblePlacement(const std::string& what, int placed)
        : std::runtime_error(what), placed_count(placed) {}
    int placed_count;
};

/// Every candidate evaluation in a search round failed.
class SearchFailure : public std::runtime_error {
public:
    explicit SearchFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace driftplan

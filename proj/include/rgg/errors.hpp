#pragma once

#include <stdexcept>
#include <string>

namespace rgg {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Wishart log-determinant requested with fewer degrees of freedom than rows.
class SingularWishartError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Subgraph order outside the enumeration budget.
class UnsupportedOrderError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative numerical routine ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double residual)
        : std::runtime_error(what), best_estimate_(best_estimate), residual_(residual) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double residual() const noexcept { return residual_; }

private:
    double best_estimate_;
    double residual_;
};

}  // namespace rgg

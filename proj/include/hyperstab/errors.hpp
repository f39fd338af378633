#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hyperstab {

/// Malformed input: dimension mismatch, bad index, invalid parameter, bad config.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An applicability condition of a certificate failed (e.g. unstable linear part,
/// reducible tensor with no usable positive eigenpair, row-sum >= 1).
class ConditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The tensors of a system do not share a Perron eigenvector; the row-sum
/// certificate still applies and the message says so.
class NoCommonEigenvector : public ConditionError {
public:
    using ConditionError::ConditionError;
};

/// An iterative solver exhausted its budget. Carries the best iterate found.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& msg, double lambda, std::vector<double> best_x, double residual)
        : std::runtime_error(msg), lambda(lambda), best_x(std::move(best_x)), residual(residual) {}

    double lambda;
    std::vector<double> best_x;
    double residual;
};

} // namespace hyperstab

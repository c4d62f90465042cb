#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rvkit {

/// Base of every error the toolkit throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violates an operation's domain (non-positive price, short history, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Zero-variance or otherwise degenerate input for which a statistic is undefined.
class DegenerateError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed file or row.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Model estimation failed (collinearity, non-convergence, no usable fit).
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Estimation failure that still carries the best point the optimizer reached.
template <typename Params, typename Diagnostics>
class FitFailure : public EstimationError {
public:
    FitFailure(const std::string& what, Params best, Diagnostics diagnostics)
        : EstimationError(what), best_(std::move(best)), diagnostics_(std::move(diagnostics)) {}

    [[nodiscard]] const Params& best() const noexcept { return best_; }
    [[nodiscard]] const Diagnostics& diagnostics() const noexcept { return diagnostics_; }

private:
    Params best_;
    Diagnostics diagnostics_;
};

}  // namespace rvkit

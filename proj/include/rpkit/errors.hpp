#pragma once

#include <stdexcept>
#include <string>

namespace rpkit {

/// Argument outside the domain of a kernel, process, or function.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Eigensolve / factorization breakdown.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A Gram matrix required to be PSD has a negative eigenvalue beyond tolerance.
class NotPositiveSemidefinite : public std::runtime_error {
public:
    NotPositiveSemidefinite(const std::string& what, double min_eigenvalue)
        : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

/// The reflected Gram matrix fails theta-positivity.
class NotReflectionPositive : public NotPositiveSemidefinite {
public:
    using NotPositiveSemidefinite::NotPositiveSemidefinite;
};

/// Shifted vectors leave the span of the OS quotient coordinates.
class InconsistentQuotient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cholesky failed even at the largest admissible jitter.
class FactorizationError : public std::runtime_error {
public:
    FactorizationError(const std::string& what, double min_eigenvalue)
        : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

} // namespace rpkit

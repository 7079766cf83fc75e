#pragma once

#include <stdexcept>
#include <string>

namespace hypack {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to reach its accuracy target.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// An operation was invoked on a value that does not satisfy its contract,
/// e.g. asking for a density bound from a non-admissible certificate.
class ContractViolation : public Error {
public:
    using Error::Error;
};

class ResourceLimit : public Error {
public:
    using Error::Error;
};

/// The certificate optimizer could not produce a verified certificate.
class OptimizationFailed : public Error {
public:
    OptimizationFailed(const std::string& what, double sign_margin, double spectral_margin)
        : Error(what), sign_margin_(sign_margin), spectral_margin_(spectral_margin) {}

    double sign_margin() const noexcept { return sign_margin_; }
    double spectral_margin() const noexcept { return spectral_margin_; }

private:
    double sign_margin_;
    double spectral_margin_;
};

}  // namespace hypack

#pragma once

#include <stdexcept>
#include <string>

namespace cwlo {

// Input outside an operation's domain (β = 0 for φ, |m| > 1, singular ρ, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Bad call shape: wrong parity of n, oversize enumeration, unsupported order.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_z, double last_residual, int iterations)
        : std::runtime_error(what), last_z_(last_z), last_residual_(last_residual),
          iterations_(iterations) {}

    double last_z() const { return last_z_; }
    double last_residual() const { return last_residual_; }
    int iterations() const { return iterations_; }

private:
    double last_z_;
    double last_residual_;
    int iterations_;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error_estimate)
        : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const { return estimate_; }
    double error_estimate() const { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

}  // namespace cwlo

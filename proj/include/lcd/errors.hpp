#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcd {

// Invalid parameters or configuration, detected before any time stepping.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// eps2 <= -1: the potential equation is no longer elliptic.
class EllipticityError : public ConfigError {
public:
    explicit EllipticityError(double eps2);
    double eps2() const noexcept { return eps2_; }

private:
    double eps2_;
};

// Conjugate gradients hit its iteration limit.
class SolverError : public std::runtime_error {
public:
    SolverError(std::size_t iterations, double residual);
    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

// The per-step fixed-point iteration did not meet its stopping criterion.
class StepFailure : public std::runtime_error {
public:
    StepFailure(std::size_t iterations, double last_norm);
    std::size_t iterations() const noexcept { return iterations_; }
    double last_norm() const noexcept { return last_norm_; }

private:
    std::size_t iterations_;
    double last_norm_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lcd

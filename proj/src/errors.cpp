#include "lcd/errors.hpp"

#include <sstream>

namespace lcd {
namespace {

std::string format_eps2(double eps2) {
    std::ostringstream os;
    os << "eps2 = " << eps2 << " <= -1: loss of ellipticity in the potential equation";
    return os.str();
}

std::string format_solver(std::size_t it, double res) {
    std::ostringstream os;
    os << "conjugate gradients did not converge after " << it << " iterations (relative residual "
       << res << ")";
    return os.str();
}

std::string format_step(std::size_t it, double norm) {
    std::ostringstream os;
    os << "fixed-point iteration did not converge after " << it << " iterations (last stopping norm "
       << norm << "); the time step may violate the CFL bound";
    return os.str();
}

}  // namespace

EllipticityError::EllipticityError(double eps2) : ConfigError(format_eps2(eps2)), eps2_(eps2) {}

SolverError::SolverError(std::size_t iterations, double residual)
    : std::runtime_error(format_solver(iterations, residual)), iterations_(iterations), residual_(residual) {}

StepFailure::StepFailure(std::size_t iterations, double last_norm)
    : std::runtime_error(format_step(iterations, last_norm)), iterations_(iterations), last_norm_(last_norm) {}

}  // namespace lcd

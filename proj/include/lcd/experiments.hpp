#pragma once

// Reference configurations on [-0.5, 0.5]^2: an in-plane alignment test
// (exp1_pos / exp1_neg) and a singular director profile (exp2_lowdamp /
// exp2_highdamp), all driven by the same oscillating boundary potential.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lcd/grid.hpp"
#include "lcd/stepper.hpp"

namespace lcd {

struct ExperimentPreset {
    std::string name;
    Params params;
    VectorSampler d0;
    VectorSampler w0;
    ProblemData data;
    std::vector<double> snapshots;
};

// [-0.5, 0.5]^2 with n cells per side.
GridSpec experiment_grid(std::size_t n);

// alpha = 1/2, k = 1, dt = h sqrt(beta h^2 + alpha) / 10, fp_tol = h^2 / 20;
// eps1, eps2 and final_time stay at their defaults for the caller to set.
Params shared_params(double h, double beta);

// 10 sin(2 pi t + 0.2) (x + 0.5) sin(pi y)
double boundary_potential(double t, double x, double y);

Vec3 exp1_initial(double x, double y);

// (0, 0, -1) for r >= 1/2, else (2 x a, 2 y a, a^2 - r^2) / (a^2 + r^2) with
// a = (1 - 2r)^4.
Vec3 exp2_initial(double x, double y);

const std::vector<std::string>& preset_names();

// Throws ConfigError for an unknown name.
ExperimentPreset make_preset(std::string_view name, std::size_t n = 64);

}  // namespace lcd

#include "lcd/experiments.hpp"

#include <cmath>
#include <numbers>

#include "lcd/errors.hpp"

namespace lcd {

GridSpec experiment_grid(std::size_t n) { return GridSpec(n, 1.0, {-0.5, -0.5}); }

Params shared_params(double h, double beta) {
    Params p;
    p.alpha = 0.5;
    p.k = 1.0;
    p.beta = beta;
    p.dt = h * std::sqrt(beta * h * h + p.alpha) / 10.0;
    p.fp_tol = h * h / 20.0;
    return p;
}

double boundary_potential(double t, double x, double y) {
    using std::numbers::pi;
    return 10.0 * std::sin(2.0 * pi * t + 0.2) * (x + 0.5) * std::sin(pi * y);
}

Vec3 exp1_initial(double, double) {
    const double c = 1.0 / std::sqrt(2.0);
    return {c, c, 0.0};
}

Vec3 exp2_initial(double x, double y) {
    const double r = std::hypot(x, y);
    if (r >= 0.5) return {0.0, 0.0, -1.0};
    const double a = std::pow(1.0 - 2.0 * r, 4);
    const double denom = a * a + r * r;
    return {2.0 * x * a / denom, 2.0 * y * a / denom, (a * a - r * r) / denom};
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"exp1_pos", "exp1_neg", "exp2_lowdamp", "exp2_highdamp"};
    return names;
}

ExperimentPreset make_preset(std::string_view name, std::size_t n) {
    const double h = experiment_grid(n).mesh_width();
    ExperimentPreset e;
    e.name = std::string(name);
    e.data.boundary = boundary_potential;
    e.w0 = [](double, double) { return Vec3{}; };

    if (name == "exp1_pos" || name == "exp1_neg") {
        const double sign = name == "exp1_pos" ? 1.0 : -1.0;
        e.params = shared_params(h, 2.0);
        e.params.eps1 = 5.0 * sign;
        e.params.eps2 = 0.5 * sign;
        e.params.final_time = 2.0;
        e.d0 = exp1_initial;
        e.snapshots = {0.25, 0.5, 2.0};
    } else if (name == "exp2_lowdamp" || name == "exp2_highdamp") {
        e.params = shared_params(h, name == "exp2_lowdamp" ? 0.5 : 3.0);
        e.params.eps1 = -5.0;
        e.params.eps2 = -0.5;
        e.params.final_time = 1.0;
        e.d0 = exp2_initial;
        e.snapshots = {0.25, 0.5, 0.75, 1.0};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    return e;
}

}  // namespace lcd

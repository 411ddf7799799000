#pragma once

// Time stepping of the coupled director / angular-momentum / potential system
// by the implicit midpoint scheme, each step solved by fixed-point iteration
// on the angular momentum.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lcd/fem.hpp"
#include "lcd/grid.hpp"
#include "lcd/vec3.hpp"

namespace lcd {

struct Params {
    double alpha = 0.5;       // inertia
    double beta = 0.0;        // damping
    double k = 1.0;           // elastic constant (one-constant approximation)
    double eps1 = 0.0;        // electromechanical coupling
    double eps2 = 0.0;        // dielectric anisotropy in the potential equation
    double dt = 1e-3;
    double fp_tol = 1e-6;     // fixed-point stopping tolerance
    std::size_t max_fp_iters = 100;
    double cfl_kappa = 0.1;
    double theta = 1.0;       // CFL exponent max(1, n/2); 1 in two dimensions
    double final_time = 1.0;
    double solver_tol = 0.0;  // 0: min(1e-10, fp_tol / 100)
    bool jacobi = false;

    double effective_solver_tol() const noexcept;
};

// Throws ConfigError (EllipticityError for eps2 <= -1) on invalid constants.
void validate(const Params& params);

struct CflReport {
    double dt = 0.0;
    double bound = 0.0;   // kappa h^theta
    double margin = 0.0;  // bound - dt
    bool ok = true;
    std::string message() const;
};

CflReport cfl_check(const Params& params, const GridSpec& grid);

using TimeFunction = std::function<double(double t, double x, double y)>;
using VectorSampler = std::function<Vec3(double x, double y)>;

// Dirichlet data (extended to the whole domain) and the potential source.
// Empty functions mean zero.
struct ProblemData {
    TimeFunction boundary;
    TimeFunction source;

    NodalScalarField boundary_at(const Triangulation& tri, double t) const;
    ScalarFunction source_at(double t) const;
};

struct State {
    std::size_t step = 0;
    double time = 0.0;
    CellVectorField d;
    CellVectorField w;
    NodalScalarField phi;
    NodalScalarField g;  // nodal Dirichlet lifting at `time`
    TriangleGradientField grads;
};

struct StepStats {
    std::size_t iterations = 0;
    double final_norm = 0.0;
    std::vector<double> norms;  // stopping norm after each iteration
    std::size_t solver_iterations = 0;

    // (norms.back() / norms.front())^(1 / (count - 1)); 0 with fewer than two norms.
    double geometric_ratio() const;
    double max_ratio() const;
};

struct StepResult {
    State state;
    StepStats stats;
};

// Samples d0 and w0 at cell centres (d0 normalised) and solves for phi at t = 0.
State initialize(const Triangulation& tri, const Params& params, const VectorSampler& d0,
                 const VectorSampler& w0, const ProblemData& data);

// One step of the scheme from `state` to state.time + params.dt.
// Throws StepFailure when max_fp_iters is exhausted.
StepResult fixed_point_step(const Triangulation& tri, const State& state, const Params& params,
                            const ProblemData& data);

}  // namespace lcd

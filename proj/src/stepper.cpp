#include "lcd/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lcd/coupling.hpp"
#include "lcd/errors.hpp"
#include "lcd/rotation.hpp"
#include "lcd/simd/kernels.hpp"

namespace lcd {

double Params::effective_solver_tol() const noexcept {
    return solver_tol > 0.0 ? solver_tol : std::min(1e-10, fp_tol / 100.0);
}

void validate(const Params& p) {
    if (!(p.eps2 > -1.0)) throw EllipticityError(p.eps2);
    if (!(p.k > 0.0)) throw ConfigError("elastic constant k must be positive");
    const bool inertial = p.alpha > 0.0 && p.beta >= 0.0;
    const bool damped = p.beta > 0.0 && p.alpha >= 0.0;
    if (!(inertial || damped)) throw ConfigError("need alpha > 0, beta >= 0 or beta > 0, alpha >= 0");
    if (!(p.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(p.fp_tol > 0.0)) throw ConfigError("fp_tol must be positive");
    if (p.max_fp_iters == 0) throw ConfigError("max_fp_iters must be at least 1");
    if (!(p.final_time > 0.0)) throw ConfigError("final_time must be positive");
    if (!(p.cfl_kappa > 0.0)) throw ConfigError("cfl_kappa must be positive");
    if (!(p.theta >= 1.0)) throw ConfigError("theta must be at least 1");
    if (p.solver_tol < 0.0) throw ConfigError("solver_tol must be non-negative");
}

std::string CflReport::message() const {
    std::ostringstream os;
    os << "dt = " << dt << (ok ? " <= " : " > ") << "kappa h^theta = " << bound << " (margin " << margin << ")";
    return os.str();
}

CflReport cfl_check(const Params& p, const GridSpec& grid) {
    CflReport r;
    r.dt = p.dt;
    r.bound = p.cfl_kappa * std::pow(grid.mesh_width(), p.theta);
    r.margin = r.bound - r.dt;
    // Relative slack so that dt computed as exactly kappa h passes.
    r.ok = r.dt <= r.bound * (1.0 + 1e-12);
    return r;
}

NodalScalarField ProblemData::boundary_at(const Triangulation& tri, double t) const {
    if (!boundary) return NodalScalarField{std::vector<double>(tri.node_count(), 0.0)};
    return interpolate(tri, [&](double x, double y) { return boundary(t, x, y); });
}

ScalarFunction ProblemData::source_at(double t) const {
    if (!source) return {};
    return [f = source, t](double x, double y) { return f(t, x, y); };
}

double StepStats::geometric_ratio() const {
    if (norms.size() < 2 || norms.front() <= 0.0) return 0.0;
    return std::pow(norms.back() / norms.front(), 1.0 / static_cast<double>(norms.size() - 1));
}

double StepStats::max_ratio() const {
    double r = 0.0;
    for (std::size_t s = 1; s < norms.size(); ++s)
        if (norms[s - 1] > 0.0) r = std::max(r, norms[s] / norms[s - 1]);
    return r;
}

State initialize(const Triangulation& tri, const Params& params, const VectorSampler& d0,
                 const VectorSampler& w0, const ProblemData& data) {
    const GridSpec& grid = tri.grid();
    State s{0, 0.0, CellVectorField(grid), CellVectorField(grid), {}, {}, {}};
    s.d.fill_interior([&](std::size_t i, std::size_t j) {
        const Vec2 c = grid.cell_center(i, j);
        const Vec3 v = d0(c.x, c.y);
        return v / norm(v);
    });
    apply_neumann_ghosts(s.d);
    if (w0) {
        s.w.fill_interior([&](std::size_t i, std::size_t j) {
            const Vec2 c = grid.cell_center(i, j);
            return w0(c.x, c.y);
        });
    }

    s.g = data.boundary_at(tri, 0.0);
    const SparseSPDSystem sys = assemble_system(tri, s.d, params.eps2, s.g, data.source_at(0.0));
    SolverOptions opts;
    opts.tolerance = params.effective_solver_tol();
    opts.jacobi = params.jacobi;
    s.phi = solve_potential(tri, sys, s.g, opts).phi;
    s.grads = triangle_gradients(tri, s.phi);
    return s;
}

StepResult fixed_point_step(const Triangulation& tri, const State& state, const Params& p,
                            const ProblemData& data) {
    const GridSpec& grid = tri.grid();
    const std::size_t n = grid.cells_per_side();
    const double dt = p.dt;
    const double t_next = state.time + dt;
    const auto& kern = simd::active();

    const NodalScalarField g_next = data.boundary_at(tri, t_next);
    const ScalarFunction f_next = data.source_at(t_next);
    SolverOptions opts;
    opts.tolerance = p.effective_solver_tol();
    opts.jacobi = p.jacobi;

    // Iterate s; "prev" holds (d, w, phi) of iterate s, starting from step m.
    CellVectorField w_prev = state.w;
    CellVectorField d_prev = state.d;
    TriangleGradientField grads_prev = state.grads;
    NodalScalarField phi_prev = state.phi;

    CellVectorField w_bar(grid), d_new(grid), lap(grid), source(grid), w_new(grid);
    NodalScalarField phi_new;
    TriangleGradientField grads_new;

    const double keep = p.alpha / dt - 0.5 * p.beta;
    const double inv_denom = 1.0 / (p.alpha / dt + 0.5 * p.beta);

    StepStats stats;
    for (std::size_t s = 0; s < p.max_fp_iters; ++s) {
        w_bar = midpoint(state.w, w_prev);
        advance_director(state.d, w_bar, dt, d_new);

        const SparseSPDSystem sys = assemble_system(tri, d_new, p.eps2, g_next, f_next);
        const std::vector<double> warm = interior_values(tri, phi_prev, g_next);
        PotentialSolution sol = solve_potential(tri, sys, g_next, opts, &warm);
        stats.solver_iterations += sol.iterations;
        phi_new = std::move(sol.phi);
        grads_new = triangle_gradients(tri, phi_new);

        const CellVectorField d_half = midpoint(state.d, d_new);
        source_term(tri, state.grads, grads_new, d_half, p.eps1, source);
        discrete_laplacian(d_half, lap);
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t row = grid.index(1, j);
            simd::AngularUpdateArgs args{state.w.planes_at(row),
                                         d_half.planes_at(row),
                                         lap.planes_at(row),
                                         source.plane(0).data() + row,
                                         source.plane(1).data() + row,
                                         keep,
                                         p.k,
                                         inv_denom,
                                         w_new.planes_at(row)};
            kern.angular_update(n, args);
        }

        const double dw = std::sqrt(l2_norm_squared(combine(w_new, -1.0, w_prev)));
        const double dd = std::sqrt(gradient_energy(combine(d_new, -1.0, d_prev)));
        const double dphi = std::sqrt(gradient_difference_l2_squared(tri, grads_new, grads_prev));
        const double stop = dw + dd + dphi;
        stats.norms.push_back(stop);
        stats.iterations = s + 1;
        stats.final_norm = stop;

        if (stop < p.fp_tol) {
            State next{state.step + 1, t_next, std::move(d_new), std::move(w_new), std::move(phi_new),
                       g_next, std::move(grads_new)};
            return {std::move(next), std::move(stats)};
        }
        if (!std::isfinite(stop)) break;

        std::swap(w_prev, w_new);
        std::swap(d_prev, d_new);
        grads_prev = grads_new;
        phi_prev = phi_new;
    }
    throw StepFailure(stats.iterations, stats.final_norm);
}

}  // namespace lcd

#include "lcd/diagnostics.hpp"

#include <cmath>

#include "lcd/errors.hpp"

namespace lcd {
namespace {

// int grad_a . grad_b for per-triangle gradients.
double gradient_inner(const Triangulation& tri, const TriangleGradientField& a, const TriangleGradientField& b) {
    double s = 0.0;
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) s += tri.triangle_area(t) * dot(a.values[t], b.values[t]);
    return s;
}

// int (p(d) . grad_a)(p(d) . grad_b)
double directional_inner(const Triangulation& tri, const CellVectorField& d, const TriangleGradientField& a,
                         const TriangleGradientField& b) {
    double s = 0.0;
    for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
        const Vec2 p = in_plane(d.at(tri.cell_of_triangle(t)));
        s += tri.triangle_area(t) * dot(p, a.values[t]) * dot(p, b.values[t]);
    }
    return s;
}

TriangleGradientField difference(const TriangleGradientField& a, const TriangleGradientField& b) {
    TriangleGradientField out;
    out.values.resize(a.values.size());
    for (std::size_t t = 0; t < a.values.size(); ++t)
        out.values[t] = {a.values[t].x - b.values[t].x, a.values[t].y - b.values[t].y};
    return out;
}

TriangleGradientField average(const TriangleGradientField& a, const TriangleGradientField& b) {
    TriangleGradientField out;
    out.values.resize(a.values.size());
    for (std::size_t t = 0; t < a.values.size(); ++t)
        out.values[t] = {0.5 * (a.values[t].x + b.values[t].x), 0.5 * (a.values[t].y + b.values[t].y)};
    return out;
}

NodalScalarField nodal_average(const NodalScalarField& a, const NodalScalarField& b) {
    NodalScalarField out;
    out.values.resize(a.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k) out.values[k] = 0.5 * (a.values[k] + b.values[k]);
    return out;
}

}  // namespace

double reduced_energy(const CellVectorField& d, const CellVectorField& w, const Params& params) {
    return 0.5 * (params.k * gradient_energy(d) + params.alpha * l2_norm_squared(w));
}

double total_energy(const Triangulation& tri, const State& s, const Params& params) {
    return reduced_energy(s.d, s.w, params) + gradient_l2_squared(tri, s.grads) +
           params.eps2 * directional_energy(tri, s.d, s.grads);
}

double damping_increment(const CellVectorField& w_old, const CellVectorField& w_new, double beta, double dt) {
    if (beta == 0.0) return 0.0;
    return beta * dt * l2_norm_squared(midpoint(w_old, w_new));
}

void damping_accumulate(DiagnosticsRecord& record, const CellVectorField& w_old, const CellVectorField& w_new,
                        const Params& params) {
    record.damping_integral += damping_increment(w_old, w_new, params.beta, params.dt);
}

double orthogonality_deviation(const CellVectorField& d, const CellVectorField& w) {
    const GridSpec& g = d.grid();
    const std::size_t n = g.cells_per_side();
    double s = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= n; ++i) {
            const double q = dot(d.at(i, j), w.at(i, j));
            s += q * q;
        }
    }
    return std::sqrt(g.cell_area() * s);
}

double alignment_metric(const Triangulation& tri, const CellVectorField& d, const TriangleGradientField& grads,
                        double threshold) {
    const GridSpec& g = d.grid();
    const std::size_t n = g.cells_per_side();
    const std::vector<Vec2> avg = cell_average_gradients(tri, grads);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= n; ++i) {
            const Vec2 e = avg[(j - 1) * n + (i - 1)];
            const double len = std::sqrt(dot(e, e));
            if (!(len > threshold)) continue;
            const double c = dot(d.at(i, j), embed({e.x / len, e.y / len}));
            sum += c * c;
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

double energy_balance_residual(const Triangulation& tri, const State& old_state, const State& new_state,
                               const Params& params) {
    const double dt = new_state.time - old_state.time;
    const double e_old = total_energy(tri, old_state, params);
    const double e_new = total_energy(tri, new_state, params);
    return std::abs(e_new - e_old + damping_increment(old_state.w, new_state.w, params.beta, dt));
}

double energy_balance_residual_full(const Triangulation& tri, const State& s0, const State& s1,
                                    const Params& p, const ProblemData& data) {
    if (p.eps2 == 0.0 && p.eps1 != 0.0)
        throw ConfigError("full energy balance needs eps2 != 0 when eps1 != 0");
    const double ratio = p.eps1 == 0.0 ? 0.0 : p.eps1 / p.eps2;
    const double dt = s1.time - s0.time;

    const ScalarFunction f0 = data.source_at(s0.time);
    const ScalarFunction f1 = data.source_at(s1.time);
    const TriangleGradientField gg0 = triangle_gradients(tri, s0.g);
    const TriangleGradientField gg1 = triangle_gradients(tri, s1.g);
    const TriangleGradientField dgg = difference(gg1, gg0);

    auto energy = [&](const State& s, const ScalarFunction& f) {
        return total_energy(tri, s, p) - load_integral(tri, f, s.phi);
    };
    auto work = [&](const State& s, const TriangleGradientField& gg) {
        return gradient_inner(tri, s.grads, gg) + p.eps2 * directional_inner(tri, s.d, s.grads, gg);
    };

    double r = energy(s1, f1) - energy(s0, f0);
    r += damping_increment(s0.w, s1.w, p.beta, dt);
    r += ratio * gradient_inner(tri, average(s0.grads, s1.grads), dgg);
    r += 0.5 * p.eps1 * directional_inner(tri, s0.d, s0.grads, dgg);
    r += 0.5 * p.eps1 * directional_inner(tri, s1.d, s1.grads, dgg);
    r -= (1.0 + 0.5 * ratio) * (work(s1, gg1) - work(s0, gg0));
    if (data.source) {
        const ScalarFunction df = [&](double x, double y) { return f1(x, y) - f0(x, y); };
        r -= ratio * load_integral(tri, df, nodal_average(s0.phi, s1.phi));
        r += ratio * load_integral(tri, df, nodal_average(s0.g, s1.g));
        r += load_integral(tri, f1, s1.g) - load_integral(tri, f0, s0.g);
    }
    return std::abs(r);
}

DiagnosticsRecord make_record(const Triangulation& tri, const State& state, const Params& params,
                              double damping_integral, const StepStats* stats) {
    DiagnosticsRecord r;
    r.step = state.step;
    r.time = state.time;
    r.reduced_energy = reduced_energy(state.d, state.w, params);
    r.total_energy = total_energy(tri, state, params);
    r.damping_integral = damping_integral;
    r.constraint_dev = max_unit_deviation(state.d);
    r.ortho_dev = orthogonality_deviation(state.d, state.w);
    r.alignment = alignment_metric(tri, state.d, state.grads);
    if (stats) {
        r.fp_iters = stats->iterations;
        r.fp_final_norm = stats->final_norm;
    }
    return r;
}

}  // namespace lcd

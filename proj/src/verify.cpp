#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lcd/errors.hpp"
#include "lcd/rotation.hpp"
#include "lcd/runner.hpp"
#include "lcd/simd/kernels.hpp"

namespace lcd {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

CheckResult check_rotation(const VerifyOptions& o) {
    Rng rng(o.seed);
    double orth = 0.0, axis = 0.0, mid = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Vec3 w{uniform(rng, -20, 20), uniform(rng, -20, 20), uniform(rng, -20, 20)};
        const double dt = uniform(rng, 1e-4, 1.0);
        const Mat3 v = rotation_matrix(w, dt);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                double s = 0.0;
                for (int c = 0; c < 3; ++c) s += v[c][a] * v[c][b];
                orth = std::max(orth, std::abs(s - (a == b ? 1.0 : 0.0)));
            }
        }
        axis = std::max(axis, norm(v * w - w) / norm(w));
        const Vec3 d{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
        const Vec3 dn = v * d;
        const Vec3 r = (dn - d) / dt - cross((dn + d) * 0.5, w);
        mid = std::max(mid, norm(r) * dt / (1.0 + norm(w) * dt));
    }
    CheckResult c{"rotation", false, std::max({orth, axis, mid}), 1e-12, {}};
    c.pass = c.value <= c.threshold;
    std::ostringstream os;
    os << "orthogonality " << orth << ", axis " << axis << ", midpoint " << mid;
    c.detail = os.str();
    return c;
}

CheckResult check_constraint(const VerifyOptions& o) {
    ExperimentPreset e = make_preset("exp1_pos", o.n);
    e.params.final_time = 0.25;
    e.snapshots.clear();
    const SimulationResult r = simulate(experiment_grid(o.n), e);
    double worst = 0.0;
    for (const auto& rec : r.records) worst = std::max(worst, rec.constraint_dev);
    CheckResult c{"constraint", worst <= 1e-10, worst, 1e-10, {}};
    c.detail = "exp1_pos to t=0.25, max ||d|-1| over all steps";
    return c;
}

// Pure director dynamics from the exp2 profile: no coupling, no potential data.
ExperimentPreset director_only(std::size_t n, double beta, double final_time, double fp_tol) {
    const double h = experiment_grid(n).mesh_width();
    ExperimentPreset e;
    e.name = "director_only";
    e.params.alpha = 0.5;
    e.params.k = 1.0;
    e.params.beta = beta;
    e.params.dt = h / 10.0;
    e.params.fp_tol = fp_tol;
    e.params.final_time = final_time;
    e.d0 = exp2_initial;
    e.w0 = [](double, double) { return Vec3{}; };
    return e;
}

CheckResult check_energy(const VerifyOptions& o, double beta, const std::string& name) {
    const ExperimentPreset e = director_only(o.n, beta, 0.1, 1e-10);
    const SimulationResult r = simulate(experiment_grid(o.n), e);
    const double e0 = r.records.front().total_energy;
    double worst = 0.0;
    for (const auto& rec : r.records)
        worst = std::max(worst, std::abs(rec.total_energy + rec.damping_integral - e0) / e0);
    CheckResult c{name, worst <= 1e-7, worst, 1e-7, {}};
    std::ostringstream os;
    os << "beta=" << beta << ", relative drift of E + damping over " << r.records.size() - 1 << " steps";
    c.detail = os.str();
    return c;
}

CheckResult check_orthogonality(const VerifyOptions& o) {
    // w0 = 0, so d . w stays zero up to the fixed-point tolerance whenever the
    // scheme conserves it.
    ExperimentPreset e = make_preset("exp2_lowdamp", o.n);
    e.params.beta = 0.0;
    e.params.fp_tol = 1e-10;
    e.params.final_time = 0.25;
    e.snapshots.clear();
    const SimulationResult r = simulate(experiment_grid(o.n), e);
    double worst = 0.0;
    for (const auto& rec : r.records) worst = std::max(worst, rec.ortho_dev);
    CheckResult c{"orthogonality", worst <= 1e-7, worst, 1e-7, {}};
    c.detail = "exp2 with beta=0 to t=0.25, max ||d.w||";
    return c;
}

CheckResult check_elliptic() {
    std::ostringstream os;
    bool pass = true;
    double worst = 0.0;
    for (double eps2 : {0.0, 0.5}) {
        os << "eps2=" << eps2 << " ratios";
        double prev = manufactured_elliptic_error(8, eps2);
        for (std::size_t n : {16, 32, 64}) {
            const double err = manufactured_elliptic_error(n, eps2);
            const double ratio = prev / err;
            os << ' ' << ratio;
            pass = pass && ratio >= 3.5 && ratio <= 4.5;
            worst = std::max(worst, std::abs(ratio - 4.0));
            prev = err;
        }
        os << "; ";
    }
    CheckResult c{"elliptic-convergence", pass, worst, 0.5, os.str()};
    return c;
}

CheckResult check_contraction(const VerifyOptions& o) {
    ExperimentPreset e = make_preset("exp1_pos", o.n);
    const GridSpec grid = experiment_grid(o.n);
    e.params.dt = o.kappa * grid.mesh_width();
    e.params.cfl_kappa = o.kappa;
    const Triangulation tri = build_triangulation(grid);
    State s = initialize(tri, e.params, e.d0, e.w0, e.data);
    const std::size_t steps = std::min<std::size_t>(step_count(0.1, e.params.dt), 200);

    double worst = 0.0;
    std::size_t total_iters = 0;
    std::ostringstream os;
    os << "dt=" << e.params.dt << " (kappa=" << o.kappa << "), ";
    for (std::size_t m = 0; m < steps; ++m) {
        try {
            StepResult r = fixed_point_step(tri, s, e.params, e.data);
            worst = std::max(worst, r.stats.geometric_ratio());
            total_iters += r.stats.iterations;
            s = std::move(r.state);
        } catch (const std::runtime_error& err) {
            os << "iteration blow-up at step " << m + 1 << ": " << err.what();
            return {"contraction", false, std::max(worst, 1.0), 1.0, os.str()};
        }
    }
    const double mean_iters = static_cast<double>(total_iters) / static_cast<double>(steps);
    os << steps << " steps, mean iterations " << mean_iters;
    return {"contraction", worst < 1.0 && mean_iters <= 10.0, worst, 1.0, os.str()};
}

CheckResult check_simd(const VerifyOptions& o) {
    if (!simd::isa_supported(simd::Isa::avx2)) return {"simd", true, 0.0, 1e-14, "avx2 unavailable, skipped"};
    const auto& a = simd::kernels(simd::Isa::scalar);
    const auto& b = simd::kernels(simd::Isa::avx2);
    Rng rng(o.seed);
    double worst = 0.0;
    for (std::size_t n : {1, 3, 7, 16, 33, 130}) {
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = uniform(rng, -1, 1);
        for (auto& v : y) v = uniform(rng, -1, 1);
        const double da = a.dot(n, x.data(), y.data());
        const double db = b.dot(n, x.data(), y.data());
        worst = std::max(worst, std::abs(da - db) / (1.0 + std::abs(da)));

        std::vector<double> c(3 * n), w(3 * n), ra(3 * n), rb(3 * n);
        for (auto& v : c) v = uniform(rng, -1, 1);
        for (auto& v : w) v = uniform(rng, -5, 5);
        const simd::ConstPlanes3 cd{c.data(), c.data() + n, c.data() + 2 * n};
        const simd::ConstPlanes3 cw{w.data(), w.data() + n, w.data() + 2 * n};
        a.rotate(n, cd, cw, 0.01, {ra.data(), ra.data() + n, ra.data() + 2 * n});
        b.rotate(n, cd, cw, 0.01, {rb.data(), rb.data() + n, rb.data() + 2 * n});
        for (std::size_t i = 0; i < 3 * n; ++i) worst = std::max(worst, std::abs(ra[i] - rb[i]));
    }
    return {"simd", worst <= 1e-14, worst, 1e-14, "scalar vs avx2 kernels on random data"};
}

}  // namespace

double manufactured_elliptic_error(std::size_t n, double eps2) {
    using std::numbers::pi;
    const GridSpec grid(n, 1.0, {0.0, 0.0});
    const Triangulation tri = build_triangulation(grid);
    const CellVectorField d(grid, {1.0, 0.0, 0.0});
    const NodalScalarField zero{std::vector<double>(tri.node_count(), 0.0)};
    const ScalarFunction f = [eps2](double x, double y) {
        return (2.0 + eps2) * pi * pi * std::sin(pi * x) * std::sin(pi * y);
    };
    const SparseSPDSystem sys = assemble_system(tri, d, eps2, zero, f);
    SolverOptions opts;
    opts.tolerance = 1e-13;
    const PotentialSolution sol = solve_potential(tri, sys, zero, opts);
    double err = 0.0;
    for (std::size_t k = 0; k < tri.node_count(); ++k) {
        const Vec2 x = tri.node(k);
        err = std::max(err, std::abs(sol.phi.values[k] - std::sin(pi * x.x) * std::sin(pi * x.y)));
    }
    return err;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"rotation",      "constraint",   "orthogonality",
                                                "energy-conservation", "energy-balance", "elliptic-convergence",
                                                "contraction",   "simd"};
    return names;
}

std::vector<CheckResult> verify(const VerifyOptions& o) {
    if (o.check && std::find(check_names().begin(), check_names().end(), *o.check) == check_names().end())
        throw ConfigError("unknown check '" + *o.check + "'");
    if (o.n < 2) throw ConfigError("verify needs n >= 2");
    if (!(o.kappa > 0.0)) throw ConfigError("kappa must be positive");

    std::vector<CheckResult> out;
    auto want = [&](const char* name) { return !o.check || *o.check == name; };
    auto guarded = [&](const char* name, auto&& fn) {
        if (!want(name)) return;
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({name, false, 0.0, 0.0, std::string("exception: ") + e.what()});
        }
    };
    guarded("rotation", [&] { return check_rotation(o); });
    guarded("constraint", [&] { return check_constraint(o); });
    guarded("orthogonality", [&] { return check_orthogonality(o); });
    guarded("energy-conservation", [&] { return check_energy(o, 0.0, "energy-conservation"); });
    guarded("energy-balance", [&] { return check_energy(o, 3.0, "energy-balance"); });
    guarded("elliptic-convergence", [&] { return check_elliptic(); });
    guarded("contraction", [&] { return check_contraction(o); });
    guarded("simd", [&] { return check_simd(o); });
    return out;
}

std::string check_to_json(const CheckResult& r) {
    nlohmann::json j;
    j["check"] = r.name;
    j["pass"] = r.pass;
    j["value"] = r.value;
    j["threshold"] = r.threshold;
    j["detail"] = r.detail;
    return j.dump();
}

}  // namespace lcd

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "lcd/errors.hpp"
#include "lcd/runner.hpp"

namespace lcd {
namespace {

struct Advance {
    StepResult result;
    double damping = 0.0;
    bool retried = false;
};

// One step of length p.dt; on failure, two steps of length p.dt / 2.
Advance advance(const Triangulation& tri, const State& state, const Params& p, const ProblemData& data) {
    try {
        StepResult r = fixed_point_step(tri, state, p, data);
        const double damping = damping_increment(state.w, r.state.w, p.beta, p.dt);
        return {std::move(r), damping, false};
    } catch (const StepFailure&) {
    } catch (const SolverError&) {
    }
    Params half = p;
    half.dt = 0.5 * p.dt;
    StepResult a = fixed_point_step(tri, state, half, data);
    StepResult b = fixed_point_step(tri, a.state, half, data);
    const double damping = damping_increment(state.w, a.state.w, p.beta, half.dt) +
                           damping_increment(a.state.w, b.state.w, p.beta, half.dt);
    b.state.step = state.step + 1;
    b.stats.iterations += a.stats.iterations;
    b.stats.solver_iterations += a.stats.solver_iterations;
    b.stats.norms.insert(b.stats.norms.begin(), a.stats.norms.begin(), a.stats.norms.end());
    return {std::move(b), damping, true};
}

}  // namespace

std::size_t step_count(double final_time, double dt) {
    // The small relative slack keeps T / dt that is integral up to rounding
    // from gaining an extra step.
    return static_cast<std::size_t>(std::ceil(final_time / dt * (1.0 - 1e-12)));
}

SimulationResult simulate(const GridSpec& grid, const ExperimentPreset& preset, const SimulationHooks& hooks) {
    const Params& p = preset.params;
    validate(p);
    const Triangulation tri = build_triangulation(grid);

    std::vector<DiagnosticsRecord> records;
    std::size_t retries = 0;
    State state = initialize(tri, p, preset.d0, preset.w0, preset.data);

    std::size_t next_snapshot = 0;
    const double time_slack = 1e-6 * p.dt;
    auto snapshots_due = [&](const State& s) {
        while (next_snapshot < preset.snapshots.size() && s.time >= preset.snapshots[next_snapshot] - time_slack) {
            if (hooks.on_snapshot) hooks.on_snapshot(preset.snapshots[next_snapshot], s);
            ++next_snapshot;
        }
    };

    records.push_back(make_record(tri, state, p, 0.0, nullptr));
    snapshots_due(state);

    const std::size_t steps = step_count(p.final_time, p.dt);
    double damping = 0.0;
    for (std::size_t m = 0; m < steps; ++m) {
        Advance a = advance(tri, state, p, preset.data);
        if (a.retried) ++retries;
        damping += a.damping;
        records.push_back(make_record(tri, a.result.state, p, damping, &a.result.stats));
        if (hooks.on_step) hooks.on_step(state, a.result.state, a.result.stats);
        if (hooks.on_record) hooks.on_record(records.back());
        state = std::move(a.result.state);
        snapshots_due(state);
    }
    return {std::move(state), std::move(records), retries};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_energies_header(std::ostream& os) { os << kEnergiesHeader << '\n'; }

void write_energies_row(std::ostream& os, const DiagnosticsRecord& r) {
    os << r.step << ',' << format_double(r.time) << ',' << format_double(r.reduced_energy) << ','
       << format_double(r.total_energy) << ',' << format_double(r.damping_integral) << ','
       << format_double(r.constraint_dev) << ',' << format_double(r.ortho_dev) << ','
       << format_double(r.alignment) << ',' << r.fp_iters << ',' << format_double(r.fp_final_norm) << '\n';
}

void write_snapshot(std::ostream& os, const Triangulation& tri, const State& state) {
    const GridSpec& grid = tri.grid();
    const std::size_t n = grid.cells_per_side();
    const std::vector<Vec2> e = cell_average_gradients(tri, state.grads);
    os << "x,y,d1,d2,d3,w1,w2,w3,Ex_avg,Ey_avg\n";
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= n; ++i) {
            const Vec2 c = grid.cell_center(i, j);
            const Vec3 d = state.d.at(i, j);
            const Vec3 w = state.w.at(i, j);
            const Vec2 g = e[(j - 1) * n + (i - 1)];
            os << format_double(c.x) << ',' << format_double(c.y) << ',' << format_double(d.x) << ','
               << format_double(d.y) << ',' << format_double(d.z) << ',' << format_double(w.x) << ','
               << format_double(w.y) << ',' << format_double(w.z) << ',' << format_double(g.x) << ','
               << format_double(g.y) << '\n';
        }
    }
    os << "#nodes\n";
    os << "x,y,phi\n";
    for (std::size_t k = 0; k < tri.node_count(); ++k) {
        const Vec2 x = tri.node(k);
        os << format_double(x.x) << ',' << format_double(x.y) << ',' << format_double(state.phi.values[k]) << '\n';
    }
}

std::string snapshot_filename(double time) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%g.csv", time);
    return buf;
}

SimulationResult run(const ResolvedRun& run, std::ostream& log) {
    const Params& p = run.preset.params;
    validate(p);
    const CflReport cfl = cfl_check(p, run.grid);
    if (!cfl.ok) {
        if (run.cfl == CflMode::fail) throw ConfigError("CFL condition violated: " + cfl.message());
        log << "warning: CFL condition violated: " << cfl.message() << '\n';
    }

    std::error_code ec;
    std::filesystem::create_directories(run.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + run.out_dir.string() + ": " + ec.message());

    auto open = [](const std::filesystem::path& path) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + path.string() + " for writing");
        return f;
    };
    auto close = [](std::ofstream& f, const std::filesystem::path& path) {
        f.flush();
        if (!f) throw IoError("write failed: " + path.string());
        f.close();
    };

    const auto manifest_path = run.out_dir / "manifest.txt";
    {
        std::ofstream m = open(manifest_path);
        m << manifest_text(run);
        close(m, manifest_path);
    }

    const auto energies_path = run.out_dir / "energies.csv";
    std::ofstream energies = open(energies_path);
    write_energies_header(energies);

    const Triangulation tri = build_triangulation(run.grid);
    SimulationHooks hooks;
    hooks.on_record = [&](const DiagnosticsRecord& r) {
        write_energies_row(energies, r);
        if (!energies) throw IoError("write failed: " + energies_path.string());
    };
    hooks.on_snapshot = [&](double t, const State& s) {
        const auto path = run.out_dir / snapshot_filename(t);
        std::ofstream f = open(path);
        write_snapshot(f, tri, s);
        close(f, path);
    };

    log << "running " << run.preset.name << " N=" << run.grid.cells_per_side() << " dt=" << p.dt
        << " steps=" << step_count(p.final_time, p.dt) << '\n';
    SimulationResult result = simulate(run.grid, run.preset, hooks);
    close(energies, energies_path);

    const DiagnosticsRecord& last = result.records.back();
    log << "done: t=" << last.time << " reduced_energy=" << last.reduced_energy
        << " alignment=" << last.alignment << " constraint_dev=" << last.constraint_dev;
    if (result.retries) log << " retries=" << result.retries;
    log << '\n';
    return result;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const ResolvedRun resolved = resolve(config);
        run(resolved, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const StepFailure& e) {
        err << "error: step failed after retry: " << e.what() << '\n';
        return kExitStepFailure;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return kExitStepFailure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace lcd

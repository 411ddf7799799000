#pragma once

// Configuration, the simulation loop, on-disk outputs and the verify checks
// behind the `sim` command line tool.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lcd/diagnostics.hpp"
#include "lcd/experiments.hpp"
#include "lcd/stepper.hpp"

namespace lcd {

enum class CflMode { warn, fail };

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitStepFailure = 3,
    kExitIo = 4,
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Flat `key = value` lines; `#` starts a comment. Throws ConfigError naming
// the offending line.
KeyValues parse_key_values(std::string_view text);
KeyValues read_config_file(const std::filesystem::path& path);

// Precedence, lowest first: preset defaults, config file, explicit flags,
// --set overrides. All of them funnel into `entries`, applied in order.
struct RunConfig {
    std::string preset = "exp1_pos";
    std::size_t n = 64;
    std::filesystem::path out_dir = "out";
    CflMode cfl = CflMode::warn;
    KeyValues entries;
};

struct ResolvedRun {
    GridSpec grid;
    ExperimentPreset preset;
    CflMode cfl = CflMode::warn;
    std::filesystem::path out_dir;
};

// Applies `entries` on top of the preset. dt and fp_tol follow h, alpha and
// beta unless set explicitly. Throws ConfigError on unknown keys or invalid
// values, and validates the resulting Params.
ResolvedRun resolve(const RunConfig& config);

// key=value text that resolves back to the same run.
std::string manifest_text(const ResolvedRun& run);

struct SimulationHooks {
    std::function<void(const State& before, const State& after, const StepStats& stats)> on_step;
    std::function<void(const DiagnosticsRecord& record)> on_record;
    // Called with the scheduled time and the first state reaching it.
    std::function<void(double scheduled, const State& state)> on_snapshot;
};

struct SimulationResult {
    State final_state;
    std::vector<DiagnosticsRecord> records;  // initial state first, then one per step
    std::size_t retries = 0;
};

std::size_t step_count(double final_time, double dt);

// Time loop over step_count(T, dt) steps. A failed step is retried once as
// two half steps; a second failure propagates.
SimulationResult simulate(const GridSpec& grid, const ExperimentPreset& preset,
                          const SimulationHooks& hooks = {});

inline constexpr std::string_view kEnergiesHeader =
    "step,time,reduced_energy,total_energy,damping_integral,constraint_dev,ortho_dev,alignment,fp_iters,"
    "fp_final_norm";

std::string format_double(double v);
void write_energies_header(std::ostream& os);
void write_energies_row(std::ostream& os, const DiagnosticsRecord& r);
void write_snapshot(std::ostream& os, const Triangulation& tri, const State& state);
std::string snapshot_filename(double time);

// Runs to completion and writes energies.csv, snapshot_t*.csv and
// manifest.txt into run.out_dir. Throws IoError, StepFailure, ConfigError.
SimulationResult run(const ResolvedRun& run, std::ostream& log);

// CLI entry: maps exceptions to exit codes.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    std::optional<std::string> check;  // run all when empty
    std::size_t n = 16;
    std::uint64_t seed = 1;
    double kappa = 0.02;  // contraction check: dt = kappa h
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

const std::vector<std::string>& check_names();

// Throws ConfigError for an unknown check name.
std::vector<CheckResult> verify(const VerifyOptions& options);

// One JSON object per check.
std::string check_to_json(const CheckResult& r);

// Nodal max error of the P1 solution for phi* = sin(pi x) sin(pi y) on the
// unit square with d = (1, 0, 0) and the given eps2.
double manufactured_elliptic_error(std::size_t n, double eps2);

}  // namespace lcd

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lcd/errors.hpp"
#include "lcd/runner.hpp"

namespace lcd {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("'" + key + "': expected a number, got '" + std::string(v) + "'");
    return out;
}

std::size_t parse_count(const std::string& key, std::string_view v) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("'" + key + "': expected a non-negative integer, got '" + std::string(v) + "'");
    return out;
}

bool parse_bool(const std::string& key, std::string_view v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + std::string(v) + "'");
}

CflMode parse_cfl(std::string_view v) {
    if (v == "warn") return CflMode::warn;
    if (v == "fail") return CflMode::fail;
    throw ConfigError("cfl must be 'warn' or 'fail', got '" + std::string(v) + "'");
}

std::vector<double> parse_times(const std::string& key, std::string_view v) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const std::string_view item = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
        if (!item.empty()) {
            const double t = parse_double(key, item);
            if (t < 0.0) throw ConfigError("snapshot times must be non-negative");
            out.push_back(t);
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string_view key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        out.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_key_values(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

ResolvedRun resolve(const RunConfig& config) {
    // Structural keys first: the preset and grid size decide the defaults
    // that every other key overrides.
    std::string preset_name = config.preset;
    std::size_t n = config.n;
    CflMode cfl = config.cfl;
    std::filesystem::path out_dir = config.out_dir;
    for (const auto& [key, value] : config.entries) {
        if (key == "preset") preset_name = value;
        else if (key == "n") n = parse_count(key, value);
        else if (key == "cfl") cfl = parse_cfl(value);
        else if (key == "out") out_dir = value;
    }

    ResolvedRun run{experiment_grid(n), make_preset(preset_name, n), cfl, out_dir};
    Params& p = run.preset.params;
    bool dt_set = false;
    bool fp_tol_set = false;

    for (const auto& [key, value] : config.entries) {
        if (key == "preset" || key == "n" || key == "cfl" || key == "out" || key == "seed") continue;
        if (key == "alpha") p.alpha = parse_double(key, value);
        else if (key == "beta") p.beta = parse_double(key, value);
        else if (key == "k") p.k = parse_double(key, value);
        else if (key == "eps1") p.eps1 = parse_double(key, value);
        else if (key == "eps2") p.eps2 = parse_double(key, value);
        else if (key == "dt") { p.dt = parse_double(key, value); dt_set = true; }
        else if (key == "fp_tol") { p.fp_tol = parse_double(key, value); fp_tol_set = true; }
        else if (key == "max_fp_iters") p.max_fp_iters = parse_count(key, value);
        else if (key == "cfl_kappa") p.cfl_kappa = parse_double(key, value);
        else if (key == "theta") p.theta = parse_double(key, value);
        else if (key == "final_time") p.final_time = parse_double(key, value);
        else if (key == "solver_tol") p.solver_tol = parse_double(key, value);
        else if (key == "jacobi") p.jacobi = parse_bool(key, value);
        else if (key == "snapshots") run.preset.snapshots = parse_times(key, value);
        else throw ConfigError("unknown key '" + key + "'");
    }

    const double h = run.grid.mesh_width();
    if (!dt_set) p.dt = h * std::sqrt(std::max(p.beta, 0.0) * h * h + p.alpha) / 10.0;
    if (!fp_tol_set) p.fp_tol = h * h / 20.0;
    validate(p);
    return run;
}

std::string manifest_text(const ResolvedRun& run) {
    const Params& p = run.preset.params;
    std::ostringstream os;
    os << "# sim run manifest; rerun with: sim run --config <this file> --out <dir>\n";
    os << "# out = " << run.out_dir.string() << "\n";
    os << "# simd = " << simd::isa_name(simd::active_isa()) << "\n";
    os << "# steps = " << step_count(p.final_time, p.dt) << "\n";
    os << "preset = " << run.preset.name << "\n";
    os << "n = " << run.grid.cells_per_side() << "\n";
    os << "cfl = " << (run.cfl == CflMode::fail ? "fail" : "warn") << "\n";
    os << "alpha = " << format_double(p.alpha) << "\n";
    os << "beta = " << format_double(p.beta) << "\n";
    os << "k = " << format_double(p.k) << "\n";
    os << "eps1 = " << format_double(p.eps1) << "\n";
    os << "eps2 = " << format_double(p.eps2) << "\n";
    os << "dt = " << format_double(p.dt) << "\n";
    os << "fp_tol = " << format_double(p.fp_tol) << "\n";
    os << "max_fp_iters = " << p.max_fp_iters << "\n";
    os << "cfl_kappa = " << format_double(p.cfl_kappa) << "\n";
    os << "theta = " << format_double(p.theta) << "\n";
    os << "final_time = " << format_double(p.final_time) << "\n";
    os << "solver_tol = " << format_double(p.solver_tol) << "\n";
    os << "jacobi = " << (p.jacobi ? "true" : "false") << "\n";
    os << "snapshots = ";
    for (std::size_t i = 0; i < run.preset.snapshots.size(); ++i)
        os << (i ? "," : "") << format_double(run.preset.snapshots[i]);
    os << "\n";
    return os.str();
}

}  // namespace lcd

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "lcd/errors.hpp"
#include "lcd/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Director dynamics coupled to an anisotropic potential"};
    app.require_subcommand(1);

    lcd::RunConfig cfg;
    if (const char* env = std::getenv("SIM_OUT_DIR"); env && *env) cfg.out_dir = env;
    std::string config_file, preset, out, cfl;
    std::size_t n = 0;
    std::vector<std::string> sets;

    auto* run = app.add_subcommand("run", "Run a preset and write energies, snapshots and a manifest");
    run->add_option("--config", config_file, "key=value file, applied before the flags below");
    run->add_option("--preset", preset, "exp1_pos, exp1_neg, exp2_lowdamp or exp2_highdamp");
    run->add_option("--n", n, "cells per side");
    run->add_option("--out", out, "output directory (default $SIM_OUT_DIR or ./out)");
    run->add_option("--cfl", cfl, "warn or fail when dt exceeds kappa h^theta");
    run->add_option("--set", sets, "key=value override, repeatable; applied last");

    lcd::VerifyOptions vopts;
    std::string check;
    auto* verify = app.add_subcommand("verify", "Run the invariant checks and print one JSON line per check");
    verify->add_option("--check", check, "run a single check");
    verify->add_option("--n", vopts.n, "cells per side for the time-stepping checks");
    verify->add_option("--seed", vopts.seed, "seed for the randomised checks");
    verify->add_option("--kappa", vopts.kappa, "dt = kappa h in the contraction check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lcd::kExitConfig;
    }

    if (*run) {
        try {
            if (!config_file.empty()) cfg.entries = lcd::read_config_file(config_file);
            if (!preset.empty()) cfg.entries.emplace_back("preset", preset);
            if (n != 0) cfg.entries.emplace_back("n", std::to_string(n));
            if (!out.empty()) cfg.entries.emplace_back("out", out);
            if (!cfl.empty()) cfg.entries.emplace_back("cfl", cfl);
            for (const auto& s : sets) {
                const auto kv = lcd::parse_key_values(s);
                if (kv.size() != 1) throw lcd::ConfigError("--set expects key=value, got '" + s + "'");
                cfg.entries.push_back(kv.front());
            }
        } catch (const lcd::ConfigError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return lcd::kExitConfig;
        }
        return lcd::run_command(cfg, std::cout, std::cerr);
    }

    if (!check.empty()) vopts.check = check;
    try {
        bool all = true;
        for (const auto& r : lcd::verify(vopts)) {
            std::cout << lcd::check_to_json(r) << std::endl;
            all = all && r.pass;
        }
        return all ? 0 : 1;
    } catch (const lcd::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return lcd::kExitConfig;
    }
}

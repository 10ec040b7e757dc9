#include <CLI11.hpp>
#include <cstdio>

#include "scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ncihf: exact multi-soliton laboratory for the non-chiral intermediate "
                 "Heisenberg ferromagnet equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    unsigned seed = 12345;
    double tol_scale = 1.0;
    app.add_option("--config", config_path, "scenario config (JSON)")->required();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--format", format, "csv|json (overrides config)");
    app.add_option("--seed", seed, "seed for randomized sweeps");
    app.add_option("--tol-scale", tol_scale, "scale factor applied to all tolerances");

    auto* solve = app.add_subcommand("solve", "solve the initial-data constraints");
    auto* simulate = app.add_subcommand("simulate", "integrate the spin-pole dynamics");
    auto* verw = app.add_subcommand("verify", "run the verification gates");
    auto* diagnose = app.add_subcommand("diagnose", "per-soliton diagnostics");
    auto* limits = app.add_subcommand("limits", "multiplier reductions and limits");

    CLI11_PARSE(app, argc, argv);

    try {
        ncihf::ScenarioConfig cfg = ncihf::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!format.empty()) cfg.format = format;
        cfg.seed = seed;
        cfg.tol_scale = tol_scale;

        if (solve->parsed()) return ncihf::cmd_solve(cfg);
        if (simulate->parsed()) return ncihf::cmd_simulate(cfg);
        if (verw->parsed()) return ncihf::cmd_verify(cfg);
        if (diagnose->parsed()) return ncihf::cmd_diagnose(cfg);
        if (limits->parsed()) return ncihf::cmd_limits(cfg);
    } catch (const ncihf::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return ncihf::exit_config;
    } catch (const ncihf::SingularSystem& e) {
        std::fprintf(stderr, "singular system: %s\n", e.what());
        return ncihf::exit_singular;
    } catch (const ncihf::StripExit& e) {
        std::fprintf(stderr, "strip exit: %s\n", e.what());
        return ncihf::exit_strip;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return ncihf::exit_verification;
    }
    return ncihf::exit_config;
}

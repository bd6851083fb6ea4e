// SPDX-License-Identifier: Apache-2.0
//
// kanlab: skew-product basin laboratory.
//   kanlab run <config.json> [--threads N] [--out DIR]
//   kanlab schema
//   kanlab version
//
// Exit codes: 0 success (condition failures are data, not errors),
// 1 config error, 2 runtime error.

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kanlab/config.hpp"
#include "kanlab/experiments.hpp"
#include "kanlab/io.hpp"
#include "kanlab/version.hpp"

namespace {

using namespace kanlab;

struct RunContext {
    RunConfig cfg;
    std::string out_dir;
    int threads = 0;
    std::vector<std::string> artifacts;

    void emit(const std::string& name, std::string_view bytes) {
        write_file_atomic(out_dir + "/" + name, bytes);
        artifacts.push_back(name);
    }
};

nlohmann::json grid_summary(const BasinLabelGrid& grid, const std::vector<int>& scales) {
    nlohmann::json stat = nlohmann::json::object();
    for (int j : scales) {
        stat["j" + std::to_string(j)] = intermingling_statistic(grid, j);
    }
    return {{"nx", grid.nx},
            {"ny", grid.ny},
            {"fractions",
             {{"attractor0", grid.fraction(BasinLabel::Attractor0)},
              {"attractor1", grid.fraction(BasinLabel::Attractor1)},
              {"undecided", grid.fraction(BasinLabel::Undecided)}}},
            {"statistic", stat},
            {"system_hash", grid.provenance.system_hash}};
}

void run_operation(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const SkewProductSystem& sys = *cfg.system;

    if (cfg.operation == "validate") {
        const auto report = validate_conditions(sys, cfg.quadrature);
        ctx.emit("report.json", report.to_json().dump(2) + "\n");
        std::printf("%s: all_pass=%s\n", report.family.c_str(),
                    report.all_pass() ? "true" : "false");
        return;
    }

    if (cfg.operation == "lyapunov") {
        PhasePoint x0 = cfg.lyapunov_start_level
                            ? random_point_on_level(sys, *cfg.lyapunov_start_level, cfg.orbit.seed)
                            : random_phase_point(sys, cfg.orbit.seed);
        const auto est = center_lyapunov(sys, x0, cfg.orbit);
        ctx.emit("lyapunov.json", lyapunov_to_json(est).dump(2) + "\n");
        std::printf("center exponent: %.9g +/- %.3g (n=%lld)\n", est.center, est.standard_error,
                    est.n_used);
        return;
    }

    if (cfg.operation == "basin" || cfg.operation == "intermingle" ||
        cfg.operation == "dimension") {
        const auto grid = basin_map(sys, cfg.grid, cfg.classify, ctx.threads);
        nlohmann::json summary = grid_summary(grid, cfg.scales);
        if (cfg.operation == "basin") {
            ctx.emit("basin.ppm", ppm_bytes(grid));
        }
        ctx.emit("intermingle.csv", intermingle_csv(grid));
        if (cfg.operation == "dimension") {
            const auto dim = boundary_box_dimension(grid);
            summary["dimension"] = dim ? nlohmann::json(*dim) : nlohmann::json();
        }
        ctx.emit(cfg.operation + ".json", summary.dump(2) + "\n");
        std::printf("grid %dx%d: attractor0=%.4f attractor1=%.4f undecided=%.4f\n", grid.nx,
                    grid.ny, grid.fraction(BasinLabel::Attractor0),
                    grid.fraction(BasinLabel::Attractor1), grid.fraction(BasinLabel::Undecided));
        return;
    }

    if (cfg.operation == "toy") {
        const auto* toy = dynamic_cast<const ToySystem*>(&sys);
        if (toy == nullptr) {
            throw std::logic_error("operation toy reached execution with a non-toy system");
        }
        ToyExperimentSettings settings;
        settings.grid = cfg.grid;
        settings.classify = cfg.classify;
        settings.orbit = cfg.orbit;
        settings.quadrature = cfg.quadrature;
        settings.threads = ctx.threads;
        const auto report = run_toy_experiment(*toy, settings);
        ctx.emit("toy.json", report.to_json().dump(2) + "\n");
        ctx.emit("basin.ppm", ppm_bytes(report.grid));
        std::printf("toy: attractor1=%.6f sink_center=%.9g adjacent_attracted=%s\n",
                    report.frac_attractor1, report.sink_center.center,
                    report.repeller_adjacent_attracted ? "true" : "false");
        return;
    }

    if (cfg.operation == "sweep") {
        SweepSettings settings;
        settings.mode = cfg.sweep_mode;
        settings.etas = cfg.sweep_etas;
        settings.phase = cfg.sweep_phase;
        settings.grid = cfg.grid;
        settings.classify = cfg.classify;
        settings.orbit = cfg.orbit;
        settings.quadrature = cfg.quadrature;
        settings.scales = cfg.scales;
        settings.threads = ctx.threads;
        const auto report = run_robustness_sweep(cfg.system, settings);
        ctx.emit("sweep.json", report.to_json().dump(2) + "\n");
        ctx.emit("sweep.csv", report.csv());
        for (const auto& row : report.rows) {
            ctx.emit("basin_eta_" + eta_filename_tag(row.eta) + ".ppm", ppm_bytes(row.grid));
        }
        for (const auto& row : report.rows) {
            std::printf("eta=%.4f conditions=%s majority=%.4f\n", row.eta,
                        row.conditions_pass ? "pass" : "fail", row.majority_fraction);
        }
        return;
    }

    throw std::logic_error("unhandled operation: " + cfg.operation);
}

int run_command(const std::string& config_path, int threads, const std::string& out_override) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
        if (out_override.empty() && !cfg.output_dir) {
            throw ConfigError("config error: missing field 'output_dir' (or pass --out)");
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::string out_dir = out_override.empty() ? *cfg.output_dir : out_override;
    RunContext ctx{std::move(cfg), out_dir, threads, {}};
    try {
        ctx.emit("config.json", ctx.cfg.raw.dump(2) + "\n");
        run_operation(ctx);

        nlohmann::json manifest = {
            {"tool", kToolName},
            {"tool_version", kToolVersion},
            {"operation", ctx.cfg.operation},
            {"config_hash", hex64(fnv1a64(ctx.cfg.raw.dump()))},
            {"seed", ctx.cfg.seed ? nlohmann::json(*ctx.cfg.seed) : nlohmann::json()},
            {"threads", ctx.threads},
            {"artifacts", ctx.artifacts},
            // wall clock is informational; the config hash above is what
            // reruns compare
            {"wall_clock_sec",
             std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
        };
        write_file_atomic(ctx.out_dir + "/manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skew-product basin laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "execute a config file");
    run->add_option("config", config_path, "path to a JSON run config")->required();
    run->add_option("--threads", threads, "worker threads (default: machine parallelism)");
    run->add_option("--out", out_dir, "output directory (overrides config output_dir)");

    auto* schema = app.add_subcommand("schema", "print the config schema");
    auto* version = app.add_subcommand("version", "print the tool version");

    CLI11_PARSE(app, argc, argv);

    if (schema->parsed()) {
        std::fputs(kanlab::config_schema_text().c_str(), stdout);
        return 0;
    }
    if (version->parsed()) {
        std::printf("%s %s\n", kanlab::kToolName, kanlab::kToolVersion);
        return 0;
    }
    return run_command(config_path, threads, out_dir);
}

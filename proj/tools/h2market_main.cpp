#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "h2market/config.hpp"
#include "h2market/reporting.hpp"
#include "h2market/scenario.hpp"

namespace {

// exit codes: 0 ok, 2 validation failure, 3 solver non-convergence,
// 4 infeasible coordination
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInfeasible = 4;

std::vector<h2market::Regime> parse_regimes(const std::string& csv) {
    std::vector<h2market::Regime> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(h2market::regime_from_string(item));
    }
    if (out.empty()) throw h2market::ValidationError("--regimes: none given");
    return out;
}

void parse_grid(const std::string& text, h2market::RunConfig& config) {
    double a = 0, b = 0, c = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &c) != 3 || c <= 0.0)
        throw h2market::ValidationError("--delta-grid: expected start:stop:step with step > 0");
    config.delta_start = a;
    config.delta_stop = b;
    config.delta_step = c;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const h2market::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const h2market::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const h2market::InfeasibleCoordination& e) {
        std::cerr << "infeasible coordination: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hydrogen market equilibrium simulator"};
    app.require_subcommand(1);

    h2market::RunConfig config;
    std::string regimes_csv = "ct,cn,co";
    std::string grid_text;

    auto add_common = [&](CLI::App* cmd, bool needs_calibration = true) {
        auto* opt =
            cmd->add_option("--calibration", config.calibration_path, "calibration file path");
        if (needs_calibration) opt->required()->check(CLI::ExistingFile);
        cmd->add_option("--regimes", regimes_csv, "comma list of regimes (ct,cn,co)");
        cmd->add_option("--out", config.out_dir, "output directory");
        cmd->add_option("--format", config.format, "artifact format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--delta-grid", grid_text, "commission grid start:stop:step");
        cmd->add_flag("--seedless", config.seedless_check,
                      "assert determinism: run twice, require byte-identical artifacts");
    };

    auto* cmd_run = app.add_subcommand("run", "roll out the horizon and write all artifacts");
    add_common(cmd_run);

    auto* cmd_sweep_c =
        app.add_subcommand("sweep-commission", "commission sweep on the coordinated regime");
    add_common(cmd_sweep_c);

    auto* cmd_sweep_b =
        app.add_subcommand("sweep-bargaining", "bargaining-power cases for the final period");
    add_common(cmd_sweep_b);

    auto* cmd_scenario =
        app.add_subcommand("scenario", "baseline plus the three exogenous shocks");
    add_common(cmd_scenario);

    std::string diff_a, diff_b;
    auto* cmd_diff = app.add_subcommand("diff", "compare two artifact directories");
    cmd_diff->add_option("dir_a", diff_a)->required()->check(CLI::ExistingDirectory);
    cmd_diff->add_option("dir_b", diff_b)->required()->check(CLI::ExistingDirectory);

    auto* cmd_validate = app.add_subcommand("validate", "validate a calibration file");
    cmd_validate->add_option("--calibration", config.calibration_path, "calibration file path")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (!grid_text.empty()) {
        int rc = guarded([&] { parse_grid(grid_text, config); });
        if (rc) return rc;
    }
    int rc = guarded([&] { config.regimes = parse_regimes(regimes_csv); });
    if (rc) return rc;

    if (app.got_subcommand(cmd_validate)) {
        return guarded([&] {
            h2market::load_calibration(config.calibration_path);
            std::cout << "calibration ok: " << config.calibration_path << "\n";
        });
    }
    if (app.got_subcommand(cmd_run)) {
        return guarded([&] {
            auto paths = h2market::run(config);
            for (const auto& p : paths) std::cout << p << "\n";
        });
    }
    if (app.got_subcommand(cmd_scenario)) {
        return guarded([&] {
            auto paths = h2market::run_scenarios(config);
            for (const auto& p : paths) std::cout << p << "\n";
        });
    }
    if (app.got_subcommand(cmd_sweep_c)) {
        return guarded([&] {
            h2market::ScenarioSpec spec;
            spec.calibration = h2market::load_calibration(config.calibration_path);
            spec.powers = h2market::load_powers(config.calibration_path);
            std::vector<double> grid;
            for (double d = config.delta_start; d <= config.delta_stop + 1e-12;
                 d += config.delta_step)
                grid.push_back(std::min(d, config.delta_stop));
            auto sweep = h2market::commission_sweep(spec, grid);
            std::cout << "delta,hub_commission_margin,hub_profit,shp_profit,chpe_profit\n";
            for (const auto& r : sweep.rows)
                std::cout << r.delta << "," << r.hub_commission_margin << "," << r.hub_profit_co
                          << "," << r.shp_profit_co << "," << r.chpe_profit_co << "\n";
            std::cout << "# hub-margin argmax at delta = " << sweep.best_delta << "\n";
        });
    }
    if (app.got_subcommand(cmd_sweep_b)) {
        return guarded([&] {
            h2market::ScenarioSpec spec;
            spec.calibration = h2market::load_calibration(config.calibration_path);
            spec.powers = h2market::load_powers(config.calibration_path);
            auto rows = h2market::bargaining_sweep(spec, h2market::default_bargaining_cases());
            std::cout << "case,z_hub,omega_shp,omega_chpe,shp,chpe,hub,feasible\n";
            for (const auto& r : rows)
                std::cout << r.case_id << "," << r.powers.hub << "," << r.omega_shp << ","
                          << r.omega_chpe << "," << r.profits.shp << "," << r.profits.chpe << ","
                          << r.profits.hub << "," << (r.feasible ? 1 : 0) << "\n";
        });
    }
    if (app.got_subcommand(cmd_diff)) {
        return guarded([&] {
            auto report = h2market::diff_runs(diff_a, diff_b);
            std::cout << "file,column,max_abs,max_rel\n";
            for (const auto& d : report.deltas)
                std::cout << d.file << "," << d.column << "," << d.max_abs << "," << d.max_rel
                          << "\n";
            std::cout << (report.identical() ? "# identical\n" : "# differences found\n");
        });
    }
    return 0;
}

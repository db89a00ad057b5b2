// swdiff CLI: run / map / compare / report. Thin shell over the library;
// all numerics live in the headers. Exit code 0 on success, 1 on any error,
// with a diagnostic on stderr.

#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swdiff/experiment.hpp"

namespace {

// "MIN:MAX:COUNT" -> symmetric log-spaced grid {-MAX..-MIN, 0, MIN..MAX}
// with COUNT points per side.
std::vector<double> parse_log_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    char c1 = 0, c2 = 0, extra = 0;
    std::stringstream ss(spec);
    if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || (ss >> extra))
        throw swdiff::ConfigError("--e-log: expected MIN:MAX:COUNT, got '" + spec + "'");
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw swdiff::ConfigError("--e-log: need 0 < MIN < MAX and COUNT >= 2");
    std::vector<double> grid;
    grid.reserve(2 * static_cast<std::size_t>(count) + 1);
    const double l0 = std::log10(lo), l1 = std::log10(hi);
    for (int i = count - 1; i >= 0; --i)
        grid.push_back(-std::pow(10.0, l0 + (l1 - l0) * i / (count - 1)));
    grid.push_back(0.0);
    for (int i = 0; i < count; ++i)
        grid.push_back(std::pow(10.0, l0 + (l1 - l0) * i / (count - 1)));
    return grid;
}

std::filesystem::path default_out_base() {
    if (const char* env = std::getenv(swdiff::kOutputDirEnvVar); env != nullptr && *env != '\0')
        return std::filesystem::path(env);
    return std::filesystem::path("out");
}

int cmd_run(const std::string& config_arg) {
    const swdiff::ExperimentConfig cfg = swdiff::load_experiment_config(config_arg);
    const swdiff::RunOutputs out = swdiff::run_experiment(cfg);
    std::cout << "wrote " << out.trajectory_csv.string() << "\n";
    std::cout << "wrote " << out.metrics_csv.string() << "\n";
    for (const auto& p : out.plots) std::cout << "wrote " << p.string() << "\n";
    std::cout << "\ndifferentiator,order,settling_time,peak_abs,chattering_index,rms_error\n";
    for (const auto& row : out.rows) {
        const auto& r = row.report;
        std::cout << row.differentiator << "," << row.order << ","
                  << (r.settling_time ? swdiff::format_double(*r.settling_time) : "none") << ","
                  << swdiff::format_double(r.peak_abs) << ","
                  << swdiff::format_double(r.chattering_index) << ","
                  << swdiff::format_double(r.rms_error) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"switching-differentiator benchmark: simulations, return-map analysis, comparisons"};
    app.require_subcommand(1);

    std::string run_config;
    CLI::App* run = app.add_subcommand("run", "simulate one experiment (config file or preset name)");
    run->add_option("config", run_config, "config file path, or preset name")->required();

    std::vector<double> rho_grid = {0.01, 1.0, 100.0};
    std::vector<double> k_grid = {1.0};
    std::vector<double> e_grid;
    std::string e_log;
    bool with_oracle = false;
    std::string map_out;
    CLI::App* map = app.add_subcommand("map", "emit the crossing-to-crossing error return map as CSV");
    map->add_option("--rho", rho_grid, "rho = L_delta/k values (comma separated)")->delimiter(',');
    map->add_option("--k", k_grid, "k values (comma separated)")->delimiter(',');
    map->add_option("--e", e_grid, "explicit e_in values (comma separated)")->delimiter(',');
    map->add_option("--e-log", e_log,
                    "symmetric log grid MIN:MAX:COUNT per sign, plus 0 (default 1e-6:1e3:25)");
    map->add_flag("--with-oracle", with_oracle, "append brute-force integration oracle columns");
    map->add_option("--output", map_out, "output CSV path (default <out>/map.csv)");

    std::vector<std::string> compare_args;
    std::string compare_out;
    CLI::App* cmp = app.add_subcommand("compare", "run several presets and align their metrics");
    cmp->add_option("presets", compare_args, "two or more config files / preset names")
        ->required()
        ->expected(-2);
    cmp->add_option("--output", compare_out, "output directory (default <out>/compare)");

    std::string report_csv;
    CLI::App* rep = app.add_subcommand("report", "recompute the metrics table from a trajectory CSV");
    rep->add_option("trajectory", report_csv, "trajectory.csv produced by run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_config);
        if (map->parsed()) {
            if (!e_grid.empty() && !e_log.empty())
                throw swdiff::ConfigError("--e and --e-log are mutually exclusive");
            if (e_grid.empty()) e_grid = parse_log_grid(e_log.empty() ? "1e-6:1e3:25" : e_log);
            swdiff::MapAnalysisRequest req{rho_grid, k_grid, e_grid, with_oracle};
            const std::filesystem::path out =
                map_out.empty() ? default_out_base() / "map.csv" : std::filesystem::path(map_out);
            swdiff::run_map_analysis(req, out);
            std::cout << "wrote " << out.string() << "\n";
            return 0;
        }
        if (cmp->parsed()) {
            const swdiff::CompareOutputs out =
                swdiff::compare_presets(compare_args, std::filesystem::path(compare_out));
            std::cout << "wrote " << out.metrics_csv.string() << "\n";
            for (const auto& p : out.plots) std::cout << "wrote " << p.string() << "\n";
            return 0;
        }
        if (rep->parsed()) {
            std::cout << swdiff::report_from_csv(report_csv);
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}

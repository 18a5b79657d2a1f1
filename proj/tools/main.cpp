#include <iostream>

#include <CLI11.hpp>

#include "tailrisk/app/commands.hpp"

// Exit codes: 0 success, 2 input error, 3 configuration/usage error,
// 4 numeric or domain failure.

namespace {

constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumeric = 4;

void add_run_options(CLI::App* cmd, tailrisk::app::RunConfig& run,
                     bool family_choice_both) {
    if (family_choice_both) {
        cmd->add_option("--family", run.family,
                        "Copula family: clayton, gumbel or both")
            ->capture_default_str();
    } else {
        cmd->add_option("--family", run.family,
                        "Copula family: clayton or gumbel")
            ->required();
    }
    cmd->add_option("--alpha", run.alpha, "Tail level for R_L, R_U, R_C")
        ->capture_default_str();
    cmd->add_option("--level", run.level, "Credible-interval level")
        ->capture_default_str();
    cmd->add_option("--grid-size", run.grid_size,
                    "Number of posterior grid nodes (>= 200)")
        ->capture_default_str();
    cmd->add_option("--theta-min", run.theta_min,
                    "Override the lower truncation bound");
    cmd->add_option("--theta-max", run.theta_max,
                    "Override the upper truncation bound");
    cmd->add_option("--fisher-draws", run.fisher_draws,
                    "Monte-Carlo draws per Fisher node")
        ->capture_default_str();
    cmd->add_option("--fisher-grid", run.fisher_grid,
                    "Number of Fisher table nodes")
        ->capture_default_str();
    cmd->add_option("--threads", run.threads,
                    "Worker threads (0 = hardware concurrency)")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "tailrisk: Bayesian joint tail-risk estimation for paired "
        "measurements under Clayton and Gumbel copulas"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Read options from a key=value file (# comments allowed)");

    tailrisk::app::FitConfig fit_cfg;
    CLI::App* fit = app.add_subcommand(
        "fit", "Fit copulas to a CSV of paired measurements");
    fit->configurable();
    add_run_options(fit, fit_cfg.run, true);
    fit->add_option("--input", fit_cfg.input, "Input CSV path")->required();
    fit->add_option("--output", fit_cfg.output,
                    "JSON report path (omit to print JSON to stdout)");
    fit->add_option("--columns", fit_cfg.columns,
                    "Column names as x,y or x,y,id")
        ->capture_default_str();
    fit->add_flag("--strict-parse", fit_cfg.strict_parse,
                  "Fail on malformed numeric cells instead of dropping rows");
    fit->add_option("--seed", fit_cfg.run.seed,
                    "Seed for the Fisher information streams")
        ->capture_default_str();
    fit->add_option("--fisher-cache", fit_cfg.run.fisher_cache,
                    "Directory holding cached Fisher tables");

    tailrisk::app::SimulateConfig sim_cfg;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run a seeded coverage study from a known copula");
    simulate->configurable();
    add_run_options(simulate, sim_cfg.run, false);
    simulate->add_option("--theta", sim_cfg.theta_true,
                         "True parameter of the data-generating copula")
        ->required();
    simulate->add_option("--n", sim_cfg.n, "Sample size per replicate")
        ->capture_default_str();
    simulate->add_option("--replicates", sim_cfg.replicates,
                         "Number of replicates")
        ->capture_default_str();
    simulate->add_option("--seed", sim_cfg.data_seed,
                         "Base seed for the data-generating streams")
        ->capture_default_str();
    simulate->add_option("--fisher-seed", sim_cfg.run.seed,
                         "Seed for the Fisher information streams")
        ->capture_default_str();
    simulate->add_flag("--rerank", sim_cfg.rerank,
                       "Rerank copula draws into pseudo-observations");
    simulate->add_option("--output", sim_cfg.output,
                         "JSON report path; per-replicate CSV lands next to "
                         "it (omit to print JSON to stdout)");

    tailrisk::app::FitConfig plot_cfg;
    CLI::App* plot = app.add_subcommand(
        "plot-data", "Fit, then emit posterior density curves as CSV");
    plot->configurable();
    add_run_options(plot, plot_cfg.run, true);
    plot->add_option("--input", plot_cfg.input, "Input CSV path")->required();
    plot->add_option("--output", plot_cfg.plot_prefix,
                     "Output path prefix for the curve files")
        ->required();
    plot->add_option("--columns", plot_cfg.columns,
                     "Column names as x,y or x,y,id")
        ->capture_default_str();
    plot->add_flag("--strict-parse", plot_cfg.strict_parse,
                   "Fail on malformed numeric cells instead of dropping rows");
    plot->add_option("--seed", plot_cfg.run.seed,
                     "Seed for the Fisher information streams")
        ->capture_default_str();
    plot->add_option("--fisher-cache", plot_cfg.run.fisher_cache,
                     "Directory holding cached Fisher tables");

    tailrisk::app::FisherConfig fisher_cfg;
    CLI::App* fisher = app.add_subcommand(
        "fisher", "Compute and persist a Fisher information table");
    fisher->configurable();
    add_run_options(fisher, fisher_cfg.run, false);
    fisher->add_option("--output", fisher_cfg.output, "Cache file path")
        ->required();
    fisher->add_option("--seed", fisher_cfg.run.seed,
                       "Seed for the Fisher information streams")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*fit) {
            tailrisk::app::cmd_fit(fit_cfg, std::cout, std::cerr);
        } else if (*simulate) {
            tailrisk::app::cmd_simulate(sim_cfg, std::cout, std::cerr);
        } else if (*plot) {
            tailrisk::app::cmd_plot_data(plot_cfg, std::cout, std::cerr);
        } else if (*fisher) {
            tailrisk::app::cmd_fisher(fisher_cfg, std::cout, std::cerr);
        }
    } catch (const tailrisk::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const tailrisk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}

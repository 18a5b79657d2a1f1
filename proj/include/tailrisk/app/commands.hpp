#pragma once

// The four CLI commands, exposed as library functions so tests can drive
// them without spawning processes.  Commands throw the shared error types;
// main() maps them to exit codes.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tailrisk/app/ingest.hpp"
#include "tailrisk/app/reports.hpp"

namespace tailrisk::app {

// Knobs shared by every command (subset used varies by command).
struct RunConfig {
    std::string family = "both";  // clayton | gumbel | both
    double alpha = 0.05;
    double level = 0.95;
    std::size_t grid_size = 2000;
    std::optional<double> theta_min;  // truncation overrides
    std::optional<double> theta_max;
    std::uint64_t seed = 1;           // Fisher/prior stream seed
    std::size_t fisher_draws = 20000;
    std::size_t fisher_grid = 60;
    std::string fisher_cache;         // directory for cached Fisher tables
    unsigned threads = 0;
};

struct FitConfig {
    RunConfig run;
    std::string input;
    std::string output;         // JSON path; empty prints JSON to stdout
    std::string columns = "x,y";
    bool strict_parse = false;
    std::string plot_prefix;    // plot-data output prefix (cmd_plot_data)
};

struct SimulateConfig {
    RunConfig run;              // family must name a single family
    double theta_true = 2.0;
    std::size_t n = 500;
    std::size_t replicates = 50;
    std::uint64_t data_seed = 1;
    bool rerank = false;
    std::string output;         // JSON path; records CSV lands next to it
};

struct FisherConfig {
    RunConfig run;              // family must name a single family
    std::string output;         // cache file path
};

/** Families selected by config.family, Clayton first for "both". */
std::vector<Family> selected_families(const RunConfig& config);

/** Prior spec for one family after applying overrides and Fisher knobs. */
PriorSpec prior_spec_for(const RunConfig& config, Family family);

struct FitOutcome {
    InputTable table;
    ColumnSpec columns;
    std::vector<FamilyFit> fits;
};

/** Full fit pipeline (ingest, pseudo-observations, per-family posterior). */
FitOutcome run_fit(const FitConfig& config, std::ostream& err);

void cmd_fit(const FitConfig& config, std::ostream& out, std::ostream& err);
void cmd_simulate(const SimulateConfig& config, std::ostream& out,
                  std::ostream& err);
void cmd_plot_data(const FitConfig& config, std::ostream& out,
                   std::ostream& err);
void cmd_fisher(const FisherConfig& config, std::ostream& out,
                std::ostream& err);

}  // namespace tailrisk::app

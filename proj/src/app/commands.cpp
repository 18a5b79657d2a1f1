#include "tailrisk/app/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tailrisk::app {

namespace fs = std::filesystem;

namespace {

void check_run_config(const RunConfig& config) {
    if (!(config.alpha > 0.0) || !(config.alpha < 1.0)) {
        throw ConfigError("--alpha must lie strictly inside (0,1)");
    }
    if (!(config.level > 0.0) || !(config.level < 1.0)) {
        throw ConfigError("--level must lie strictly inside (0,1)");
    }
    if (config.family != "both") family_from_name(config.family);
    if ((config.theta_min || config.theta_max) && config.family == "both") {
        throw ConfigError(
            "truncation overrides need a single --family, not 'both'");
    }
}

Family single_family(const RunConfig& config, const char* what) {
    if (config.family == "both") {
        throw ConfigError(std::string(what) +
                          " needs --family clayton or --family gumbel");
    }
    return family_from_name(config.family);
}

std::string cache_path(const RunConfig& config, Family family) {
    fs::path dir(config.fisher_cache);
    return (dir / (std::string("fisher_") + family_name(family) + ".txt"))
        .string();
}

// Loads the cached table when it matches the requested settings; otherwise
// computes and persists a fresh one.
JeffreysPrior obtain_prior(const RunConfig& config, const PriorSpec& spec,
                           std::ostream& err, bool& cache_hit) {
    cache_hit = false;
    if (config.fisher_cache.empty()) {
        return restricted_jeffreys_prior(spec, config.threads);
    }
    std::string path = cache_path(config, spec.family);
    bool existed = fs::exists(path);
    if (existed) {
        if (std::optional<FisherTable> table = load_fisher_table(path, spec)) {
            cache_hit = true;
            return prior_from_table(std::move(*table), spec.theta_min,
                                    spec.theta_max);
        }
        err << "fisher cache mismatch, recomputing: " << path << "\n";
    }
    FisherTable table = tabulate_fisher(spec, config.threads);
    fs::create_directories(config.fisher_cache);
    save_fisher_table(path, table);
    if (!existed) err << "wrote fisher cache: " << path << "\n";
    return prior_from_table(std::move(table), spec.theta_min, spec.theta_max);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write output file '" + path + "'");
    out << content;
    if (!out) throw InputError("short write to output file '" + path + "'");
}

}  // namespace

std::vector<Family> selected_families(const RunConfig& config) {
    if (config.family == "both") return {Family::Clayton, Family::Gumbel};
    return {family_from_name(config.family)};
}

PriorSpec prior_spec_for(const RunConfig& config, Family family) {
    PriorSpec spec = default_prior_spec(family);
    if (config.theta_min) spec.theta_min = *config.theta_min;
    if (config.theta_max) spec.theta_max = *config.theta_max;
    spec.fisher_grid_size = config.fisher_grid;
    spec.fisher_mc_draws = config.fisher_draws;
    spec.fisher_seed = RngSeed{config.seed};
    validate_prior_spec(spec);
    return spec;
}

FitOutcome run_fit(const FitConfig& config, std::ostream& err) {
    check_run_config(config.run);
    FitOutcome outcome;
    outcome.columns = parse_columns(config.columns);
    outcome.table =
        ingest_csv(config.input, {outcome.columns, config.strict_parse});
    if (outcome.table.x.size() < 10) {
        std::ostringstream msg;
        msg << "input '" << config.input << "' has only "
            << outcome.table.x.size()
            << " usable rows after cleaning; fitting needs at least 10";
        throw InputError(msg.str());
    }

    RawPairs raw{outcome.table.x, outcome.table.y};
    PseudoSample sample = to_pseudo_observations(raw);

    for (Family family : selected_families(config.run)) {
        FamilyFit fit;
        fit.spec = prior_spec_for(config.run, family);
        fit.prior =
            obtain_prior(config.run, fit.spec, err, fit.fisher_cache_hit);
        ThetaGrid grid = make_theta_grid(fit.spec, config.run.grid_size);
        fit.posterior =
            posterior_grid(fit.prior, sample, grid, config.run.threads);
        fit.report = report_from_posterior(fit.spec, sample, fit.posterior,
                                           config.run.alpha, config.run.level);
        double info =
            interpolate_fisher(fit.prior.table, fit.report.mle.theta);
        for (std::size_t f = 0; f < kFunctionalOrder.size(); ++f) {
            fit.delta[f] = delta_method_ci(
                family, fit.report.mle.theta, sample.n(), info,
                TailSpec{config.run.alpha, kFunctionalOrder[f]},
                config.run.level);
        }
        outcome.fits.push_back(std::move(fit));
    }
    return outcome;
}

void cmd_fit(const FitConfig& config, std::ostream& out, std::ostream& err) {
    FitOutcome outcome = run_fit(config, err);
    nlohmann::json report = fit_report_json(outcome.table, outcome.columns,
                                            outcome.fits, utc_timestamp());
    std::string payload = report.dump(2) + "\n";
    if (config.output.empty()) {
        for (const FamilyFit& fit : outcome.fits) print_fit_summary(err, fit);
        out << payload;
        return;
    }
    write_text_file(config.output, payload);
    for (const FamilyFit& fit : outcome.fits) print_fit_summary(out, fit);
    out << "wrote report: " << config.output << "\n";
}

void cmd_simulate(const SimulateConfig& config, std::ostream& out,
                  std::ostream& err) {
    check_run_config(config.run);
    Family family = single_family(config.run, "simulate");

    SimConfig sim;
    try {
        sim.model = make_model(family, config.theta_true);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    sim.prior = prior_spec_for(config.run, family);
    sim.n = config.n;
    sim.replicates = config.replicates;
    sim.alpha = config.run.alpha;
    sim.level = config.run.level;
    sim.base_seed = RngSeed{config.data_seed};
    sim.grid_size = config.run.grid_size;
    sim.rerank = config.rerank;
    sim.threads = config.run.threads;
    validate_sim_config(sim);

    SimReport report = coverage_study(sim);

    std::string records_name;
    if (!config.output.empty()) {
        fs::path json_path(config.output);
        fs::path records_path = json_path.parent_path() /
                                (json_path.stem().string() + "_records.csv");
        records_name = records_path.filename().string();
        std::ostringstream csv;
        write_sim_records_csv(csv, report);
        write_text_file(records_path.string(), csv.str());
        nlohmann::json doc =
            sim_report_json(report, records_name, utc_timestamp());
        write_text_file(config.output, doc.dump(2) + "\n");
        out << "wrote report: " << config.output << " and " << records_name
            << "\n";
    } else {
        nlohmann::json doc = sim_report_json(report, "", utc_timestamp());
        out << doc.dump(2) << "\n";
    }

    err << "truth      RL=" << report.truth[0] << " RU=" << report.truth[1]
        << " RC=" << report.truth[2] << "\n";
    err << "coverage   RL=" << report.coverage[0]
        << " RU=" << report.coverage[1] << " RC=" << report.coverage[2]
        << "\n";
}

void cmd_plot_data(const FitConfig& config, std::ostream& out,
                   std::ostream& err) {
    if (config.plot_prefix.empty()) {
        throw ConfigError("plot-data needs --output as a file prefix");
    }
    FitOutcome outcome = run_fit(config, err);

    nlohmann::json annotations;
    annotations["schema"] = "tailrisk-plot-annotations";
    annotations["schema_version"] = kFitSchemaVersion;
    for (const FamilyFit& fit : outcome.fits) {
        const char* family = family_name(fit.report.family);
        if (fit.posterior.grid.size() == 1) {
            err << "warning: single-node grid for " << family
                << "; plot data degenerates to one point\n";
        }
        {
            std::ostringstream csv;
            write_theta_curve_csv(csv, fit.posterior);
            std::string path = config.plot_prefix + "_" + family +
                               "_theta.csv";
            write_text_file(path, csv.str());
            out << "wrote " << path << "\n";
        }
        const PosteriorSummary* summaries[3] = {&fit.report.risk.lower,
                                                &fit.report.risk.upper,
                                                &fit.report.risk.conditional};
        for (std::size_t f = 0; f < kFunctionalOrder.size(); ++f) {
            TailSpec spec{config.run.alpha, kFunctionalOrder[f]};
            std::ostringstream csv;
            bool exact = write_risk_curve_csv(csv, fit.posterior, spec);
            std::string path = config.plot_prefix + "_" + family + "_" +
                               functional_name(kFunctionalOrder[f]) + ".csv";
            write_text_file(path, csv.str());
            if (!exact) {
                err << "warning: " << family << " "
                    << functional_name(kFunctionalOrder[f])
                    << " is not monotone on the grid; wrote a weighted "
                       "histogram instead of a density curve\n";
            }
            out << "wrote " << path << "\n";
            annotations[family][functional_name(kFunctionalOrder[f])] =
                posterior_summary_json(*summaries[f]);
        }
        annotations[family]["theta"] =
            posterior_summary_json(fit.report.theta);
    }
    std::string path = config.plot_prefix + "_annotations.json";
    write_text_file(path, annotations.dump(2) + "\n");
    out << "wrote " << path << "\n";
}

void cmd_fisher(const FisherConfig& config, std::ostream& out,
                std::ostream& err) {
    check_run_config(config.run);
    Family family = single_family(config.run, "fisher");
    if (config.output.empty()) {
        throw ConfigError("fisher needs --output for the cache file");
    }
    PriorSpec spec = prior_spec_for(config.run, family);
    if (fs::exists(config.output)) {
        if (load_fisher_table(config.output, spec)) {
            out << "fisher cache up to date: " << config.output << "\n";
            return;
        }
        err << "fisher cache mismatch, recomputing: " << config.output << "\n";
    }
    FisherTable table = tabulate_fisher(spec, config.run.threads);
    save_fisher_table(config.output, table);
    out << "wrote fisher table: " << config.output << " ("
        << table.grid.size() << " nodes, " << table.draws << " draws)\n";
}

}  // namespace tailrisk::app

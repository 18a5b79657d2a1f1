#include "tailrisk/sim_harness.hpp"

#include <chrono>
#include <sstream>

#include "tailrisk/parallel.hpp"

namespace tailrisk {

namespace {

ReplicateRecord replicate_impl(const SimConfig& config,
                               const JeffreysPrior& prior,
                               const ThetaGrid& grid, std::size_t index) {
    CopulaSample draws =
        sample_dataset(config.model, config.n,
                       derive_seed(config.base_seed, index));
    PseudoSample sample;
    if (config.rerank) {
        RawPairs raw;
        raw.x.reserve(config.n);
        raw.y.reserve(config.n);
        for (const UnitPair& p : draws.pairs) {
            raw.x.push_back(p.u);
            raw.y.push_back(p.v);
        }
        sample = to_pseudo_observations(raw);
    } else {
        sample = pseudo_sample_from_pairs(std::move(draws.pairs));
    }

    // Replicates share one prior and grid; threads=1 here because the
    // study parallelizes across replicates, not within one.
    PosteriorGrid post = posterior_grid(prior, sample, grid, 1);

    ReplicateRecord record;
    record.index = index;
    record.theta_mean = posterior_summary_theta(post, config.level).mean;
    for (std::size_t f = 0; f < kFunctionalOrder.size(); ++f) {
        TailSpec spec{config.alpha, kFunctionalOrder[f]};
        PosteriorSummary summary =
            induced_risk_posterior(post, spec, config.level);
        double truth = tail_risk(config.model, spec);
        FunctionalOutcome& out = record.risk[f];
        out.mean = summary.mean;
        out.lo = summary.interval.lo;
        out.hi = summary.interval.hi;
        out.covered = out.lo <= truth && truth <= out.hi;
    }
    return record;
}

}  // namespace

SimConfig make_sim_config(Family family, double theta_true) {
    SimConfig config;
    config.model = make_model(family, theta_true);
    config.prior = default_prior_spec(family);
    return config;
}

void validate_sim_config(const SimConfig& config) {
    validate_model(config.model);
    validate_prior_spec(config.prior);
    if (config.prior.family != config.model.family) {
        throw ConfigError("study prior family does not match the model");
    }
    if (config.n < 10) throw ConfigError("study needs n >= 10");
    if (config.replicates < 1) throw ConfigError("study needs replicates >= 1");
    if (!(config.alpha > 0.0) || !(config.alpha < 1.0)) {
        throw ConfigError("study alpha must lie strictly inside (0,1)");
    }
    if (!(config.level > 0.0) || !(config.level < 1.0)) {
        throw ConfigError("study level must lie strictly inside (0,1)");
    }
}

const char* functional_name(TailFunctional functional) {
    switch (functional) {
        case TailFunctional::Lower: return "RL";
        case TailFunctional::Upper: return "RU";
        case TailFunctional::Conditional: return "RC";
    }
    throw ConfigError("unknown tail functional enum value");
}

ReplicateRecord run_replicate(const SimConfig& config,
                              const JeffreysPrior& prior,
                              const ThetaGrid& grid, std::size_t index) {
    validate_sim_config(config);
    try {
        return replicate_impl(config, prior, grid, index);
    } catch (const NumericError& err) {
        std::ostringstream msg;
        msg << "replicate " << index << ": " << err.what();
        throw NumericError(msg.str());
    }
}

ReplicateRecord run_replicate(const SimConfig& config, std::size_t index) {
    validate_sim_config(config);
    JeffreysPrior prior = restricted_jeffreys_prior(config.prior,
                                                    config.threads);
    ThetaGrid grid = make_theta_grid(config.prior, config.grid_size);
    return run_replicate(config, prior, grid, index);
}

SimReport coverage_study(const SimConfig& config) {
    validate_sim_config(config);
    auto start = std::chrono::steady_clock::now();

    SimReport report;
    report.config = config;
    for (std::size_t f = 0; f < kFunctionalOrder.size(); ++f) {
        report.truth[f] =
            tail_risk(config.model, TailSpec{config.alpha, kFunctionalOrder[f]});
    }

    JeffreysPrior prior = restricted_jeffreys_prior(config.prior,
                                                    config.threads);
    ThetaGrid grid = make_theta_grid(config.prior, config.grid_size);

    report.records.assign(config.replicates, ReplicateRecord{});
    parallel_for(config.replicates, config.threads, [&](std::size_t r) {
        try {
            report.records[r] = replicate_impl(config, prior, grid, r);
        } catch (const NumericError& err) {
            std::ostringstream msg;
            msg << "replicate " << r << ": " << err.what();
            throw NumericError(msg.str());
        }
    });

    double scale = 1.0 / static_cast<double>(config.replicates);
    for (const ReplicateRecord& record : report.records) {
        for (std::size_t f = 0; f < kFunctionalOrder.size(); ++f) {
            report.mean_posterior_mean[f] += record.risk[f].mean * scale;
            if (record.risk[f].covered) report.coverage[f] += scale;
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

}  // namespace tailrisk

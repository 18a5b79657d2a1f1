#pragma once

// Coverage studies: repeatedly sample from a known copula, run the full
// posterior pipeline on each replicate and record whether the credible
// intervals cover the true tail risks.  Replicate r draws its data with
// derive_seed(base_seed, r), so studies are reproducible and individual
// replicates can be re-run in isolation.

#include <array>
#include <cstddef>
#include <vector>

#include "tailrisk/inference.hpp"

namespace tailrisk {

struct SimConfig {
    CopulaModel model{Family::Clayton, 2.0};  // data-generating truth
    std::size_t n = 500;
    std::size_t replicates = 50;
    double alpha = 0.05;
    double level = 0.95;
    RngSeed base_seed{1};
    PriorSpec prior;           // defaults to the family's standard spec
    std::size_t grid_size = 2000;
    bool rerank = false;       // rerank copula draws into pseudo-observations
    unsigned threads = 0;      // 0 picks the hardware concurrency
};

SimConfig make_sim_config(Family family, double theta_true);
void validate_sim_config(const SimConfig& config);

// Index order for the per-functional arrays below: R_L, R_U, R_C.
inline constexpr std::array<TailFunctional, 3> kFunctionalOrder{
    TailFunctional::Lower, TailFunctional::Upper, TailFunctional::Conditional};
const char* functional_name(TailFunctional functional);

struct FunctionalOutcome {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool covered = false;
};

struct ReplicateRecord {
    std::size_t index = 0;
    double theta_mean = 0.0;
    std::array<FunctionalOutcome, 3> risk;
};

struct SimReport {
    SimConfig config;
    std::array<double, 3> truth{};
    std::array<double, 3> mean_posterior_mean{};  // averaged over replicates
    std::array<double, 3> coverage{};
    std::vector<ReplicateRecord> records;         // ordered by index
    double wall_seconds = 0.0;
};

/**
 * One replicate against a prior and grid built once by the caller.
 * Inference failures are rethrown with the replicate index attached.
 */
ReplicateRecord run_replicate(const SimConfig& config,
                              const JeffreysPrior& prior,
                              const ThetaGrid& grid, std::size_t index);

/** Convenience wrapper that builds the prior and grid itself. */
ReplicateRecord run_replicate(const SimConfig& config, std::size_t index);

/**
 * Full study: replicates run in parallel, aggregation happens in index
 * order afterwards, so the report is independent of the thread count.
 */
SimReport coverage_study(const SimConfig& config);

}  // namespace tailrisk

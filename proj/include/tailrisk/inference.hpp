#pragma once

// Bayesian machinery: rank likelihood, Monte-Carlo Fisher information,
// restricted Jeffreys prior, grid posterior, induced tail-risk posteriors
// and the frequentist delta-method interval used for comparison.
//
// The posterior lives on a fixed theta grid.  Node weights are trapezoid
// masses, so sums of weight * f(theta) approximate integrals of
// f(theta) * posterior density and the weights themselves sum to one.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tailrisk/copula.hpp"
#include "tailrisk/pseudo_obs.hpp"
#include "tailrisk/sampling.hpp"

namespace tailrisk {

// =======================================================================
// Configuration
// =======================================================================

// Finite-difference step for the score: h = base * max(1, theta) when
// relative, plain base otherwise.
struct FdStepRule {
    double base = 1e-4;
    bool relative = true;

    double step(double theta) const {
        return relative ? base * (theta > 1.0 ? theta : 1.0) : base;
    }
};

struct PriorSpec {
    Family family = Family::Clayton;
    double theta_min = 1e-4;   // truncation bounds of the restricted prior
    double theta_max = 50.0;
    std::size_t fisher_grid_size = 60;
    std::size_t fisher_mc_draws = 20000;
    FdStepRule fisher_fd;
    RngSeed fisher_seed{1};
};

// Truncation bounds used throughout: Clayton [1e-4, 50], Gumbel
// [1 + 1e-6, 50].
PriorSpec default_prior_spec(Family family);
void validate_prior_spec(const PriorSpec& spec);

// =======================================================================
// Theta grids
// =======================================================================

enum class GridSpacing {
    Log,    // used for Clayton, whose plausible range spans four decades
    Linear  // used for Gumbel
};

GridSpacing default_spacing(Family family);
const char* spacing_name(GridSpacing spacing);
GridSpacing spacing_from_name(const std::string& name);

struct ThetaGrid {
    std::vector<double> nodes;  // strictly increasing

    std::size_t size() const { return nodes.size(); }
};

/**
 * Posterior grid factory: size >= 200 nodes spanning [lo, hi] with the
 * first and last node exactly equal to the bounds.
 */
ThetaGrid make_theta_grid(double lo, double hi, std::size_t size,
                          GridSpacing spacing);

/** Grid over the prior's truncation range with its family's spacing. */
ThetaGrid make_theta_grid(const PriorSpec& spec, std::size_t size = 2000);

/**
 * Accepts any strictly increasing node set, including degenerate
 * single-node grids.  The Fisher table and edge-case tests use this; the
 * checked factory is the right entry point for posterior work.
 */
ThetaGrid theta_grid_from_nodes(std::vector<double> nodes);

namespace detail {

// Trapezoid quadrature weights for the given nodes; a single-node grid
// gets weight 1.
std::vector<double> trapezoid_weights(const std::vector<double>& nodes);

}  // namespace detail

// =======================================================================
// Likelihood
// =======================================================================

/** Sum of log_copula_density over the sample at the given model. */
double log_likelihood(const CopulaModel& model, const PseudoSample& sample);

struct MleResult {
    double theta = 0.0;
    double log_lik = 0.0;
    bool at_boundary = false;  // within 1e-4 of a truncation bound
};

/**
 * Maximum-likelihood theta inside [spec.theta_min, spec.theta_max]:
 * coarse grid scan followed by golden-section refinement to 1e-6.
 * Diagnostic only; the Bayesian pipeline does not consume it.
 */
MleResult mle(Family family, const PseudoSample& sample,
              const PriorSpec& spec);

// =======================================================================
// Fisher information and the restricted Jeffreys prior
// =======================================================================

struct FisherEstimate {
    double value = 0.0;      // mean of squared scores
    double std_error = 0.0;  // Monte-Carlo standard error of that mean
    double fd_step = 0.0;
    std::size_t draws = 0;
};

/**
 * I(theta) ~= (1/M) sum s_m^2 with s_m a finite-difference score at a
 * copula draw from theta.  The difference is central except within one
 * step of a truncation bound, where it falls back to one-sided.
 * Requires at least 100 draws.
 */
FisherEstimate fisher_information_mc(Family family, double theta,
                                     const PriorSpec& spec, Rng& rng);
double fisher_information_value(Family family, double theta,
                                const PriorSpec& spec, Rng& rng);

struct FisherTable {
    Family family = Family::Clayton;
    ThetaGrid grid;
    std::vector<double> values;   // I(theta) estimates, >= 0
    std::vector<double> steps;    // fd step used per node
    std::size_t draws = 0;
    GridSpacing spacing = GridSpacing::Log;
    FdStepRule fd;
    RngSeed seed{1};
};

/**
 * Tabulates Fisher information over spec.fisher_grid_size nodes; node i
 * uses the stream seeded with derive_seed(spec.fisher_seed, i), so the
 * table is independent of evaluation order and thread count.
 */
FisherTable tabulate_fisher(const PriorSpec& spec, unsigned threads = 0);

/** Linear interpolation of tabulated I(theta), clamped to the table range. */
double interpolate_fisher(const FisherTable& table, double theta);

// Versioned plain-text cache ("tailrisk-fisher-table v1").  Loading
// returns std::nullopt when the file does not match spec exactly.
void save_fisher_table(const std::string& path, const FisherTable& table);
std::optional<FisherTable> load_fisher_table(const std::string& path,
                                             const PriorSpec& spec);

struct JeffreysPrior {
    Family family = Family::Clayton;
    double theta_min = 0.0;
    double theta_max = 0.0;
    FisherTable table;
    std::vector<double> sqrt_info;  // sqrt(I) at the table nodes
    double normalizer = 1.0;        // integral of interpolated sqrt(I)

    // Normalized density; zero outside [theta_min, theta_max].
    double density(double theta) const;
    double log_density(double theta) const;
};

/** pi(theta) proportional to sqrt(I(theta)) on [theta_min, theta_max]. */
JeffreysPrior restricted_jeffreys_prior(const PriorSpec& spec,
                                        unsigned threads = 0);

/** Builds the prior from an existing (possibly cached) table. */
JeffreysPrior prior_from_table(FisherTable table, double theta_min,
                               double theta_max);

// =======================================================================
// Posterior on a grid
// =======================================================================

struct PosteriorGrid {
    Family family = Family::Clayton;
    ThetaGrid grid;
    std::vector<double> log_lik;    // per node
    std::vector<double> log_prior;  // per node
    std::vector<double> weights;    // trapezoid masses, sum to 1
    std::vector<double> trap;       // trapezoid coefficients

    // Posterior density at node i (weight divided by trapezoid width).
    double density_at(std::size_t i) const { return weights[i] / trap[i]; }
};

/**
 * Combines per-node log likelihood and log prior into normalized weights
 * with a max-shift before exponentiation.  Throws NumericError when every
 * weight underflows to zero.
 */
PosteriorGrid posterior_from_log_terms(Family family, ThetaGrid grid,
                                       std::vector<double> log_lik,
                                       std::vector<double> log_prior);

PosteriorGrid posterior_grid(const JeffreysPrior& prior,
                             const PseudoSample& sample,
                             const ThetaGrid& grid, unsigned threads = 0);

/** Convenience overload that builds the prior from spec first. */
PosteriorGrid posterior_grid(const PseudoSample& sample, const PriorSpec& spec,
                             std::size_t grid_size = 2000,
                             unsigned threads = 0);

// =======================================================================
// Summaries
// =======================================================================

enum class IntervalMethod {
    GridQuantile,  // equal-tailed interval from the discrete posterior CDF
    DeltaMethod    // normal approximation around the MLE
};

struct CredibleInterval {
    double level = 0.95;
    double lo = 0.0;
    double hi = 0.0;
    IntervalMethod method = IntervalMethod::GridQuantile;
};

struct PosteriorSummary {
    double mean = 0.0;
    double variance = 0.0;
    CredibleInterval interval;
};

/** Mean, variance and equal-tailed interval of theta itself. */
PosteriorSummary posterior_summary_theta(const PosteriorGrid& post,
                                         double level = 0.95);

/**
 * Summary of R_T(theta) under the posterior.  The credible interval maps
 * the theta interval endpoints through R_T when R_T is monotone on the
 * grid (it is for both families) and falls back to weighted quantiles of
 * the node values otherwise.
 */
PosteriorSummary induced_risk_posterior(const PosteriorGrid& post,
                                        TailSpec spec, double level = 0.95);

/** Inverse standard normal CDF (Wichura's AS 241, double precision). */
double normal_quantile(double p);

/**
 * R_T(theta_hat) +- z * |R_T'(theta_hat)| / sqrt(n I(theta_hat)),
 * clipped to [0,1].
 */
CredibleInterval delta_method_ci(Family family, double theta_hat,
                                 std::size_t n, double fisher_info,
                                 TailSpec spec, double level = 0.95);

// =======================================================================
// Full per-family report
// =======================================================================

struct RiskSummary {
    PosteriorSummary lower;
    PosteriorSummary upper;
    PosteriorSummary conditional;
};

struct TailRiskReport {
    Family family = Family::Clayton;
    double alpha = 0.05;
    double level = 0.95;
    std::size_t n = 0;
    PosteriorSummary theta;
    RiskSummary risk;
    double independence_ratio_upper = 0.0;  // mean R_U over alpha^2
    MleResult mle;
};

TailRiskReport build_tail_risk_report(const JeffreysPrior& prior,
                                      const PriorSpec& spec,
                                      const PseudoSample& sample,
                                      const ThetaGrid& grid, double alpha,
                                      double level, unsigned threads = 0);

/** Same report from a posterior the caller already holds. */
TailRiskReport report_from_posterior(const PriorSpec& spec,
                                     const PseudoSample& sample,
                                     const PosteriorGrid& post, double alpha,
                                     double level);

namespace detail {

// Negative-log coordinates of a sample, precomputed once so likelihood
// sweeps over a theta grid do not repeat the transform.
struct LogData {
    std::vector<double> x;
    std::vector<double> y;
};

LogData log_data(const PseudoSample& sample);
double loglik_from_logdata(Family family, double theta, const LogData& data);

// Interpolated quantile of the discrete distribution (nodes, weights).
double weighted_quantile(const std::vector<double>& nodes,
                         const std::vector<double>& weights, double p);

}  // namespace detail

}  // namespace tailrisk

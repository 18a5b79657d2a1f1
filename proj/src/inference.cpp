#include "tailrisk/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tailrisk/parallel.hpp"

namespace tailrisk {

namespace {

constexpr double kMleTol = 1e-6;       // golden-section bracket width
constexpr double kBoundarySlack = 1e-4;
constexpr std::size_t kMleScanSize = 200;
constexpr double kInvPhi = 0.6180339887498949;

std::vector<double> build_nodes(double lo, double hi, std::size_t size,
                                GridSpacing spacing) {
    std::vector<double> nodes(size);
    if (size == 1) {
        nodes[0] = lo;
        return nodes;
    }
    double a = spacing == GridSpacing::Log ? std::log(lo) : lo;
    double b = spacing == GridSpacing::Log ? std::log(hi) : hi;
    for (std::size_t i = 0; i < size; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(size - 1);
        double v = a + t * (b - a);
        nodes[i] = spacing == GridSpacing::Log ? std::exp(v) : v;
    }
    // Quadrature ranges and truncation bounds must match exactly.
    nodes.front() = lo;
    nodes.back() = hi;
    return nodes;
}

void check_level(double level) {
    if (!(level > 0.0) || !(level < 1.0)) {
        std::ostringstream msg;
        msg << "interval level must lie strictly inside (0,1), got " << level;
        throw ConfigError(msg.str());
    }
}

}  // namespace

// =======================================================================
// Configuration
// =======================================================================

PriorSpec default_prior_spec(Family family) {
    PriorSpec spec;
    spec.family = family;
    if (family == Family::Clayton) {
        spec.theta_min = 1e-4;
        spec.theta_max = 50.0;
    } else {
        spec.theta_min = 1.0 + 1e-6;
        spec.theta_max = 50.0;
    }
    return spec;
}

void validate_prior_spec(const PriorSpec& spec) {
    if (!std::isfinite(spec.theta_min) || !std::isfinite(spec.theta_max) ||
        !(spec.theta_min < spec.theta_max)) {
        throw ConfigError("prior needs finite theta_min < theta_max");
    }
    double floor = family_theta_floor(spec.family);
    bool ok = spec.family == Family::Clayton ? spec.theta_min > floor
                                             : spec.theta_min >= floor;
    if (!ok) {
        std::ostringstream msg;
        msg << "theta_min " << spec.theta_min << " outside the "
            << family_name(spec.family) << " parameter range";
        throw ConfigError(msg.str());
    }
    if (spec.fisher_grid_size < 2) {
        throw ConfigError("fisher grid needs at least 2 nodes");
    }
    if (spec.fisher_mc_draws < 100) {
        throw ConfigError("fisher information needs at least 100 draws");
    }
    if (!(spec.fisher_fd.base > 0.0)) {
        throw ConfigError("finite-difference base step must be positive");
    }
}

// =======================================================================
// Theta grids
// =======================================================================

GridSpacing default_spacing(Family family) {
    return family == Family::Clayton ? GridSpacing::Log : GridSpacing::Linear;
}

const char* spacing_name(GridSpacing spacing) {
    return spacing == GridSpacing::Log ? "log" : "linear";
}

GridSpacing spacing_from_name(const std::string& name) {
    if (name == "log") return GridSpacing::Log;
    if (name == "linear") return GridSpacing::Linear;
    throw ConfigError("unknown grid spacing '" + name + "'");
}

ThetaGrid make_theta_grid(double lo, double hi, std::size_t size,
                          GridSpacing spacing) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ConfigError("theta grid needs finite lo < hi");
    }
    if (spacing == GridSpacing::Log && !(lo > 0.0)) {
        throw ConfigError("log-spaced theta grid needs lo > 0");
    }
    if (size < 200) {
        std::ostringstream msg;
        msg << "posterior grid needs at least 200 nodes, got " << size;
        throw ConfigError(msg.str());
    }
    return ThetaGrid{build_nodes(lo, hi, size, spacing)};
}

ThetaGrid make_theta_grid(const PriorSpec& spec, std::size_t size) {
    validate_prior_spec(spec);
    return make_theta_grid(spec.theta_min, spec.theta_max, size,
                           default_spacing(spec.family));
}

ThetaGrid theta_grid_from_nodes(std::vector<double> nodes) {
    if (nodes.empty()) throw ConfigError("theta grid needs at least 1 node");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!std::isfinite(nodes[i])) {
            throw ConfigError("theta grid nodes must be finite");
        }
        if (i > 0 && !(nodes[i - 1] < nodes[i])) {
            throw ConfigError("theta grid nodes must be strictly increasing");
        }
    }
    return ThetaGrid{std::move(nodes)};
}

namespace detail {

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
    std::size_t n = nodes.size();
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    w[0] = 0.5 * (nodes[1] - nodes[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        w[i] = 0.5 * (nodes[i + 1] - nodes[i - 1]);
    }
    w[n - 1] = 0.5 * (nodes[n - 1] - nodes[n - 2]);
    return w;
}

LogData log_data(const PseudoSample& sample) {
    LogData data;
    data.x.reserve(sample.n());
    data.y.reserve(sample.n());
    for (const UnitPair& p : sample.pairs) {
        data.x.push_back(-std::log(p.u));
        data.y.push_back(-std::log(p.v));
    }
    return data;
}

double loglik_from_logdata(Family family, double theta, const LogData& data) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        total += log_density_from_logs(family, theta, data.x[i], data.y[i]);
    }
    return total;
}

double weighted_quantile(const std::vector<double>& nodes,
                         const std::vector<double>& weights, double p) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double target = p * total;
    double cum_prev = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double cum = cum_prev + weights[i];
        if (cum >= target) {
            if (i == 0 || weights[i] <= 0.0) return nodes[i];
            double frac = (target - cum_prev) / weights[i];
            return nodes[i - 1] + frac * (nodes[i] - nodes[i - 1]);
        }
        cum_prev = cum;
    }
    return nodes.back();
}

}  // namespace detail

// =======================================================================
// Likelihood
// =======================================================================

double log_likelihood(const CopulaModel& model, const PseudoSample& sample) {
    validate_model(model);
    if (sample.n() < 1) throw ConfigError("likelihood needs at least 1 pair");
    detail::LogData data = detail::log_data(sample);
    return detail::loglik_from_logdata(model.family, model.theta, data);
}

MleResult mle(Family family, const PseudoSample& sample,
              const PriorSpec& spec) {
    validate_prior_spec(spec);
    if (sample.n() < 10) {
        std::ostringstream msg;
        msg << "mle needs at least 10 pairs, got " << sample.n();
        throw ConfigError(msg.str());
    }
    detail::LogData data = detail::log_data(sample);
    auto objective = [&](double theta) {
        return detail::loglik_from_logdata(family, theta, data);
    };

    std::vector<double> nodes = build_nodes(
        spec.theta_min, spec.theta_max, kMleScanSize, default_spacing(family));
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double val = objective(nodes[i]);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }

    double lo = nodes[best > 0 ? best - 1 : best];
    double hi = nodes[best + 1 < nodes.size() ? best + 1 : best];
    if (hi - lo > kMleTol) {
        double c = hi - kInvPhi * (hi - lo);
        double d = lo + kInvPhi * (hi - lo);
        double fc = objective(c);
        double fd = objective(d);
        while (hi - lo > kMleTol) {
            if (fc < fd) {
                lo = c;
                c = d;
                fc = fd;
                d = lo + kInvPhi * (hi - lo);
                fd = objective(d);
            } else {
                hi = d;
                d = c;
                fd = fc;
                c = hi - kInvPhi * (hi - lo);
                fc = objective(c);
            }
        }
    }

    MleResult out;
    out.theta = 0.5 * (lo + hi);
    out.log_lik = objective(out.theta);
    out.at_boundary = out.theta - spec.theta_min < kBoundarySlack ||
                      spec.theta_max - out.theta < kBoundarySlack;
    return out;
}

// =======================================================================
// Fisher information and the restricted Jeffreys prior
// =======================================================================

FisherEstimate fisher_information_mc(Family family, double theta,
                                     const PriorSpec& spec, Rng& rng) {
    validate_prior_spec(spec);
    CopulaModel model = make_model(family, theta);
    double h = spec.fisher_fd.step(theta);
    bool lo_ok = theta - h >= spec.theta_min;
    bool hi_ok = theta + h <= spec.theta_max;
    if (!lo_ok && !hi_ok) {
        throw ConfigError("fd step exceeds the truncation range width");
    }

    std::size_t draws = spec.fisher_mc_draws;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t m = 0; m < draws; ++m) {
        UnitPair p = sample_pair(model, rng);
        double x = -std::log(p.u);
        double y = -std::log(p.v);
        double score;
        if (lo_ok && hi_ok) {
            score = (detail::log_density_from_logs(family, theta + h, x, y) -
                     detail::log_density_from_logs(family, theta - h, x, y)) /
                    (2.0 * h);
        } else if (hi_ok) {
            score = (detail::log_density_from_logs(family, theta + h, x, y) -
                     detail::log_density_from_logs(family, theta, x, y)) /
                    h;
        } else {
            score = (detail::log_density_from_logs(family, theta, x, y) -
                     detail::log_density_from_logs(family, theta - h, x, y)) /
                    h;
        }
        double sq = score * score;
        sum += sq;
        sum_sq += sq * sq;
    }

    FisherEstimate est;
    est.draws = draws;
    est.fd_step = h;
    est.value = sum / static_cast<double>(draws);
    double var =
        (sum_sq - static_cast<double>(draws) * est.value * est.value) /
        static_cast<double>(draws - 1);
    est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(draws));
    if (!std::isfinite(est.value)) {
        std::ostringstream msg;
        msg << "fisher information estimate is not finite at theta=" << theta;
        throw NumericError(msg.str());
    }
    return est;
}

double fisher_information_value(Family family, double theta,
                                const PriorSpec& spec, Rng& rng) {
    return fisher_information_mc(family, theta, spec, rng).value;
}

double interpolate_fisher(const FisherTable& table, double theta) {
    const std::vector<double>& nodes = table.grid.nodes;
    if (nodes.empty() || table.values.size() != nodes.size()) {
        throw ConfigError("fisher table is empty or inconsistent");
    }
    if (theta <= nodes.front()) return table.values.front();
    if (theta >= nodes.back()) return table.values.back();
    auto it = std::upper_bound(nodes.begin(), nodes.end(), theta);
    std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    std::size_t lo = hi - 1;
    double frac = (theta - nodes[lo]) / (nodes[hi] - nodes[lo]);
    return table.values[lo] + frac * (table.values[hi] - table.values[lo]);
}

FisherTable tabulate_fisher(const PriorSpec& spec, unsigned threads) {
    validate_prior_spec(spec);
    FisherTable table;
    table.family = spec.family;
    table.spacing = default_spacing(spec.family);
    table.grid = theta_grid_from_nodes(build_nodes(
        spec.theta_min, spec.theta_max, spec.fisher_grid_size, table.spacing));
    table.values.assign(table.grid.size(), 0.0);
    table.steps.assign(table.grid.size(), 0.0);
    table.draws = spec.fisher_mc_draws;
    table.fd = spec.fisher_fd;
    table.seed = spec.fisher_seed;

    parallel_for(table.grid.size(), threads, [&](std::size_t i) {
        Rng rng(derive_seed(spec.fisher_seed, i));
        FisherEstimate est = fisher_information_mc(
            spec.family, table.grid.nodes[i], spec, rng);
        table.values[i] = est.value;
        table.steps[i] = est.fd_step;
    });
    return table;
}

double JeffreysPrior::density(double theta) const {
    if (!(theta >= theta_min) || !(theta <= theta_max)) return 0.0;
    const std::vector<double>& nodes = table.grid.nodes;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), theta);
    std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    if (hi == 0) return sqrt_info.front() / normalizer;
    if (hi >= nodes.size()) return sqrt_info.back() / normalizer;
    std::size_t lo = hi - 1;
    double frac = (theta - nodes[lo]) / (nodes[hi] - nodes[lo]);
    double s = sqrt_info[lo] + frac * (sqrt_info[hi] - sqrt_info[lo]);
    return s / normalizer;
}

double JeffreysPrior::log_density(double theta) const {
    return std::log(density(theta));
}

JeffreysPrior prior_from_table(FisherTable table, double theta_min,
                               double theta_max) {
    if (table.grid.size() < 2) {
        throw ConfigError("prior table needs at least 2 nodes");
    }
    if (table.values.size() != table.grid.size()) {
        throw ConfigError("prior table values do not match its grid");
    }
    JeffreysPrior prior;
    prior.family = table.family;
    prior.theta_min = theta_min;
    prior.theta_max = theta_max;
    prior.sqrt_info.reserve(table.values.size());
    for (double v : table.values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw NumericError("fisher table contains an invalid entry");
        }
        prior.sqrt_info.push_back(std::sqrt(v));
    }
    std::vector<double> w = detail::trapezoid_weights(table.grid.nodes);
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * prior.sqrt_info[i];
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw NumericError("jeffreys prior normalizer is not positive");
    }
    prior.normalizer = z;
    prior.table = std::move(table);
    return prior;
}

JeffreysPrior restricted_jeffreys_prior(const PriorSpec& spec,
                                        unsigned threads) {
    FisherTable table = tabulate_fisher(spec, threads);
    return prior_from_table(std::move(table), spec.theta_min, spec.theta_max);
}

// =======================================================================
// Posterior on a grid
// =======================================================================

PosteriorGrid posterior_from_log_terms(Family family, ThetaGrid grid,
                                       std::vector<double> log_lik,
                                       std::vector<double> log_prior) {
    std::size_t g = grid.size();
    if (g < 1 || log_lik.size() != g || log_prior.size() != g) {
        throw ConfigError("posterior needs matching grid and log-term sizes");
    }
    PosteriorGrid post;
    post.family = family;
    post.trap = detail::trapezoid_weights(grid.nodes);

    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g; ++i) {
        double t = log_lik[i] + log_prior[i];
        if (std::isnan(t)) throw NumericError("posterior log term is NaN");
        if (t > shift) shift = t;
    }
    if (!std::isfinite(shift)) {
        throw NumericError(
            "posterior mass underflowed to zero on the whole grid");
    }

    post.weights.assign(g, 0.0);
    double z = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        double w = std::exp(log_lik[i] + log_prior[i] - shift) * post.trap[i];
        post.weights[i] = w;
        z += w;
    }
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw NumericError("posterior normalizer is not positive");
    }
    for (double& w : post.weights) w /= z;

    post.grid = std::move(grid);
    post.log_lik = std::move(log_lik);
    post.log_prior = std::move(log_prior);
    return post;
}

PosteriorGrid posterior_grid(const JeffreysPrior& prior,
                             const PseudoSample& sample, const ThetaGrid& grid,
                             unsigned threads) {
    if (sample.n() < 1) throw ConfigError("posterior needs at least 1 pair");
    detail::LogData data = detail::log_data(sample);
    std::size_t g = grid.size();
    std::vector<double> ll(g, 0.0);
    std::vector<double> lp(g, 0.0);
    parallel_for(g, threads, [&](std::size_t i) {
        double theta = grid.nodes[i];
        ll[i] = detail::loglik_from_logdata(prior.family, theta, data);
        lp[i] = prior.log_density(theta);
    });
    return posterior_from_log_terms(prior.family, grid, std::move(ll),
                                    std::move(lp));
}

PosteriorGrid posterior_grid(const PseudoSample& sample, const PriorSpec& spec,
                             std::size_t grid_size, unsigned threads) {
    JeffreysPrior prior = restricted_jeffreys_prior(spec, threads);
    ThetaGrid grid = make_theta_grid(spec, grid_size);
    return posterior_grid(prior, sample, grid, threads);
}

// =======================================================================
// Summaries
// =======================================================================

PosteriorSummary posterior_summary_theta(const PosteriorGrid& post,
                                         double level) {
    check_level(level);
    PosteriorSummary out;
    double mean = 0.0;
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < post.grid.size(); ++i) {
        mean += post.weights[i] * post.grid.nodes[i];
        mean_sq += post.weights[i] * post.grid.nodes[i] * post.grid.nodes[i];
    }
    out.mean = mean;
    out.variance = std::max(mean_sq - mean * mean, 0.0);
    double gamma = 1.0 - level;
    out.interval.level = level;
    out.interval.lo =
        detail::weighted_quantile(post.grid.nodes, post.weights, gamma / 2.0);
    out.interval.hi = detail::weighted_quantile(post.grid.nodes, post.weights,
                                                1.0 - gamma / 2.0);
    out.interval.method = IntervalMethod::GridQuantile;
    return out;
}

PosteriorSummary induced_risk_posterior(const PosteriorGrid& post,
                                        TailSpec spec, double level) {
    check_level(level);
    std::size_t g = post.grid.size();
    std::vector<double> risk(g);
    for (std::size_t i = 0; i < g; ++i) {
        risk[i] = tail_risk(CopulaModel{post.family, post.grid.nodes[i]}, spec);
    }

    PosteriorSummary out;
    double mean = 0.0;
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        mean += post.weights[i] * risk[i];
        mean_sq += post.weights[i] * risk[i] * risk[i];
    }
    out.mean = mean;
    out.variance = std::max(mean_sq - mean * mean, 0.0);
    out.interval.level = level;
    out.interval.method = IntervalMethod::GridQuantile;

    bool nondecreasing = true;
    bool nonincreasing = true;
    for (std::size_t i = 0; i + 1 < g; ++i) {
        if (risk[i + 1] < risk[i] - 1e-14) nondecreasing = false;
        if (risk[i + 1] > risk[i] + 1e-14) nonincreasing = false;
    }

    double gamma = 1.0 - level;
    if (g == 1) {
        out.interval.lo = risk[0];
        out.interval.hi = risk[0];
    } else if (nondecreasing || nonincreasing) {
        // R_T is monotone in theta, so the equal-tailed interval of R_T is
        // the image of the equal-tailed interval of theta.
        double t_lo = detail::weighted_quantile(post.grid.nodes, post.weights,
                                                gamma / 2.0);
        double t_hi = detail::weighted_quantile(post.grid.nodes, post.weights,
                                                1.0 - gamma / 2.0);
        double r_lo = tail_risk(CopulaModel{post.family, t_lo}, spec);
        double r_hi = tail_risk(CopulaModel{post.family, t_hi}, spec);
        out.interval.lo = std::min(r_lo, r_hi);
        out.interval.hi = std::max(r_lo, r_hi);
    } else {
        std::vector<std::size_t> order(g);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&risk](std::size_t a,
                                                      std::size_t b) {
            return risk[a] < risk[b];
        });
        std::vector<double> sorted_risk(g);
        std::vector<double> sorted_w(g);
        for (std::size_t i = 0; i < g; ++i) {
            sorted_risk[i] = risk[order[i]];
            sorted_w[i] = post.weights[order[i]];
        }
        out.interval.lo =
            detail::weighted_quantile(sorted_risk, sorted_w, gamma / 2.0);
        out.interval.hi =
            detail::weighted_quantile(sorted_risk, sorted_w, 1.0 - gamma / 2.0);
    }
    return out;
}

double normal_quantile(double p) {
    // Wichura's algorithm AS 241, PPND16.
    if (!(p > 0.0) || !(p < 1.0)) {
        std::ostringstream msg;
        msg << "normal quantile needs p strictly inside (0,1), got " << p;
        throw DomainError(msg.str());
    }
    double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        double r = 0.180625 - q * q;
        double num = (((((((2.5090809287301226727e3 * r +
                            3.3430575583588128105e4) * r +
                           6.7265770927008700853e4) * r +
                          4.5921953931549871457e4) * r +
                         1.3731693765509461125e4) * r +
                        1.9715909503065514427e3) * r +
                       1.3314166789178437745e2) * r +
                      3.3871328727963666080e0);
        double den = (((((((5.2264952788528545610e3 * r +
                            2.8729085735721942674e4) * r +
                           3.9307895800092710610e4) * r +
                          2.1213794301586595867e4) * r +
                         5.3941960214247511077e3) * r +
                        6.8718700749205790830e2) * r +
                       4.2313330701600911252e1) * r +
                      1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        double num = (((((((7.74545014278341407640e-4 * r +
                            2.27238449892691845833e-2) * r +
                           2.41780725177450611770e-1) * r +
                          1.27045825245236838258e0) * r +
                         3.64784832476320460504e0) * r +
                        5.76949722146069140550e0) * r +
                       4.63033784615654529590e0) * r +
                      1.42343711074968357734e0);
        double den = (((((((1.05075007164441684324e-9 * r +
                            5.47593808499534494600e-4) * r +
                           1.51986665636164571966e-2) * r +
                          1.48103976427480074590e-1) * r +
                         6.89767334985100004550e-1) * r +
                        1.67638483018380384940e0) * r +
                       2.05319162663775882187e0) * r +
                      1.0);
        val = num / den;
    } else {
        r -= 5.0;
        double num = (((((((2.01033439929228813265e-7 * r +
                            2.71155556874348757815e-5) * r +
                           1.24266094738807843860e-3) * r +
                          2.65321895265761230930e-2) * r +
                         2.96560571828504891230e-1) * r +
                        1.78482653991729133580e0) * r +
                       5.46378491116411436990e0) * r +
                      6.65790464350110377720e0);
        double den = (((((((2.04426310338993978564e-15 * r +
                            1.42151175831644588870e-7) * r +
                           1.84631831751005468180e-5) * r +
                          7.86869131145613259100e-4) * r +
                         1.48753612908506148525e-2) * r +
                        1.36929880922735805310e-1) * r +
                       5.99832206555887937690e-1) * r +
                      1.0);
        val = num / den;
    }
    return q < 0.0 ? -val : val;
}

CredibleInterval delta_method_ci(Family family, double theta_hat,
                                 std::size_t n, double fisher_info,
                                 TailSpec spec, double level) {
    check_level(level);
    if (n < 1) throw ConfigError("delta method needs n >= 1");
    if (!(fisher_info > 0.0) || !std::isfinite(fisher_info)) {
        std::ostringstream msg;
        msg << "delta method needs positive Fisher information, got "
            << fisher_info;
        throw NumericError(msg.str());
    }
    CopulaModel model = make_model(family, theta_hat);
    double r = tail_risk(model, spec);
    double slope = tail_risk_derivative(model, spec);
    double z = normal_quantile(0.5 * (1.0 + level));
    double half =
        z * std::fabs(slope) / std::sqrt(static_cast<double>(n) * fisher_info);
    CredibleInterval ci;
    ci.level = level;
    ci.lo = std::clamp(r - half, 0.0, 1.0);
    ci.hi = std::clamp(r + half, 0.0, 1.0);
    ci.method = IntervalMethod::DeltaMethod;
    return ci;
}

// =======================================================================
// Full per-family report
// =======================================================================

TailRiskReport report_from_posterior(const PriorSpec& spec,
                                     const PseudoSample& sample,
                                     const PosteriorGrid& post, double alpha,
                                     double level) {
    TailRiskReport report;
    report.family = post.family;
    report.alpha = alpha;
    report.level = level;
    report.n = sample.n();
    report.theta = posterior_summary_theta(post, level);
    report.risk.lower = induced_risk_posterior(
        post, TailSpec{alpha, TailFunctional::Lower}, level);
    report.risk.upper = induced_risk_posterior(
        post, TailSpec{alpha, TailFunctional::Upper}, level);
    report.risk.conditional = induced_risk_posterior(
        post, TailSpec{alpha, TailFunctional::Conditional}, level);
    report.independence_ratio_upper = report.risk.upper.mean / (alpha * alpha);
    report.mle = mle(post.family, sample, spec);
    return report;
}

TailRiskReport build_tail_risk_report(const JeffreysPrior& prior,
                                      const PriorSpec& spec,
                                      const PseudoSample& sample,
                                      const ThetaGrid& grid, double alpha,
                                      double level, unsigned threads) {
    PosteriorGrid post = posterior_grid(prior, sample, grid, threads);
    return report_from_posterior(spec, sample, post, alpha, level);
}

}  // namespace tailrisk

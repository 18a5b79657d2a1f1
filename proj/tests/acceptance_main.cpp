// Acceptance suite: each criterion prints one [PASS]/[FAIL]/[SKIP] line.
// The process exit code is the number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tailrisk/app/commands.hpp"
#include "tailrisk/sim_harness.hpp"

using namespace tailrisk;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void report(int index, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << index
              << ": " << detail << "\n";
    if (!pass) ++g_failures;
}

void report_skip(int index, const std::string& detail) {
    std::cout << "[SKIP] criterion " << index << ": " << detail << "\n";
}

std::string fmt(double v, int digits = 6) {
    std::ostringstream out;
    out.precision(digits);
    out << v;
    return out.str();
}

// Nodes and weights of the n-point Gauss-Legendre rule on (a, b).
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(
    int n, double a, double b) {
    std::vector<double> x(n);
    std::vector<double> w(n);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    for (int i = 0; i < n; ++i) {
        x[i] = a + 0.5 * (b - a) * (x[i] + 1.0);
        w[i] *= 0.5 * (b - a);
    }
    return {std::move(x), std::move(w)};
}

struct TruthRow {
    Family family;
    double theta;
    double rl;
    double ru;
    double rc;
};

// Closed-form reference values, rounded to six decimals.
const std::vector<TruthRow> kTruthTable{
    {Family::Clayton, 2.0, 0.035377, 0.006821, 0.707549},
    {Family::Clayton, 5.0, 0.043528, 0.012032, 0.870551},
    {Family::Clayton, 10.0, 0.046652, 0.018484, 0.933033},
    {Family::Gumbel, 2.0, 0.014457, 0.030029, 0.289132},
    {Family::Gumbel, 5.0, 0.032026, 0.042782, 0.640529},
    {Family::Gumbel, 10.0, 0.040327, 0.046509, 0.806530},
};

constexpr double kAlpha = 0.05;

// Independent quadrature values of the expected squared score at theta=2,
// used to cross-check the in-process quadrature oracle.
constexpr double kQuadInfoClayton2 = 0.13097012773609143;
constexpr double kQuadInfoGumbel2 = 0.37834210550535590;

// =======================================================================
// Criterion 1: closed-form tail risks against the reference table
// =======================================================================

void criterion_closed_forms() {
    Timer timer;
    double worst = 0.0;
    std::string worst_at;
    for (const TruthRow& row : kTruthTable) {
        CopulaModel model = make_model(row.family, row.theta);
        double got[3] = {
            tail_risk(model, {kAlpha, TailFunctional::Lower}),
            tail_risk(model, {kAlpha, TailFunctional::Upper}),
            tail_risk(model, {kAlpha, TailFunctional::Conditional})};
        double want[3] = {row.rl, row.ru, row.rc};
        const char* names[3] = {"RL", "RU", "RC"};
        for (int f = 0; f < 3; ++f) {
            double dev = std::fabs(got[f] - want[f]);
            if (dev > worst) {
                worst = dev;
                std::ostringstream at;
                at << family_name(row.family) << " theta=" << row.theta << " "
                   << names[f];
                worst_at = at.str();
            }
        }
    }
    report(1, worst <= 5e-6,
           "closed-form tail risks, max |dev|=" + fmt(worst, 3) + " at " +
               worst_at + " (tol 5e-6, " + fmt(timer.seconds(), 3) + "s)");
}

// =======================================================================
// Criterion 2: density vs mixed finite difference of the CDF, plus mass
// =======================================================================

void criterion_density() {
    Timer timer;
    const std::vector<std::pair<Family, double>> sets{
        {Family::Clayton, 0.5}, {Family::Clayton, 2.0}, {Family::Clayton, 5.0},
        {Family::Gumbel, 1.5},  {Family::Gumbel, 2.0},  {Family::Gumbel, 5.0}};

    double worst_rel = 0.0;
    std::string worst_at;
    auto mixed = [](const CopulaModel& m, double u, double v, double h) {
        return (copula_cdf(m, {u + h, v + h}) - copula_cdf(m, {u + h, v - h}) -
                copula_cdf(m, {u - h, v + h}) + copula_cdf(m, {u - h, v - h})) /
               (4.0 * h * h);
    };
    for (const auto& [family, theta] : sets) {
        CopulaModel model = make_model(family, theta);
        for (int i = 1; i <= 20; ++i) {
            for (int j = 1; j <= 20; ++j) {
                double u = i / 21.0;
                double v = j / 21.0;
                double h = 1e-3;
                double fd =
                    (4.0 * mixed(model, u, v, h) - mixed(model, u, v, 2 * h)) /
                    3.0;
                double density = copula_density(model, {u, v});
                double rel = std::fabs(fd - density) / density;
                if (rel > worst_rel) {
                    worst_rel = rel;
                    std::ostringstream at;
                    at << family_name(family) << " theta=" << theta << " u="
                       << u << " v=" << v;
                    worst_at = at.str();
                }
            }
        }
    }

    auto [qx, qw] = gauss_legendre(200, 1e-4, 1.0 - 1e-4);
    double worst_mass = 0.0;
    for (const auto& [family, theta] : sets) {
        CopulaModel model = make_model(family, theta);
        double mass = 0.0;
        for (std::size_t i = 0; i < qx.size(); ++i) {
            for (std::size_t j = 0; j < qx.size(); ++j) {
                mass += qw[i] * qw[j] *
                        std::exp(log_copula_density(model, {qx[i], qx[j]}));
            }
        }
        worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
    }

    double elapsed = timer.seconds();
    bool pass = worst_rel <= 1e-4 && worst_mass <= 5e-3 && elapsed < 10.0;
    report(2, pass,
           "density vs cdf difference, max rel=" + fmt(worst_rel, 3) + " at " +
               worst_at + " (tol 1e-4); max |mass-1|=" + fmt(worst_mass, 3) +
               " (tol 5e-3); " + fmt(elapsed, 3) + "s (limit 10s)");
}

// =======================================================================
// Criterion 3: sampled tail frequencies against the reference table
// =======================================================================

void criterion_sampler() {
    Timer timer;
    constexpr std::size_t kDraws = 200000;
    double worst_sigma = 0.0;
    std::string worst_at;
    std::uint64_t seed = 300;
    for (const TruthRow& row : kTruthTable) {
        CopulaModel model = make_model(row.family, row.theta);
        CopulaSample sample = sample_dataset(model, kDraws, RngSeed{++seed});
        std::size_t lower = 0;
        std::size_t upper = 0;
        std::size_t v_low = 0;
        for (const UnitPair& p : sample.pairs) {
            bool ul = p.u <= kAlpha;
            bool vl = p.v <= kAlpha;
            if (ul && vl) ++lower;
            if (vl) ++v_low;
            if (p.u > 1.0 - kAlpha && p.v > 1.0 - kAlpha) ++upper;
        }
        double n = static_cast<double>(kDraws);
        double p_l = tail_risk(model, {kAlpha, TailFunctional::Lower});
        double p_u = tail_risk(model, {kAlpha, TailFunctional::Upper});
        double p_c = tail_risk(model, {kAlpha, TailFunctional::Conditional});
        double checks[3][3] = {
            {lower / n, p_l, std::sqrt(p_l * (1 - p_l) / n)},
            {upper / n, p_u, std::sqrt(p_u * (1 - p_u) / n)},
            {lower / std::max(1.0, static_cast<double>(v_low)), p_c,
             std::sqrt(p_c * (1 - p_c) /
                       std::max(1.0, static_cast<double>(v_low)))}};
        const char* names[3] = {"RL", "RU", "RC"};
        for (int f = 0; f < 3; ++f) {
            double sigma =
                std::fabs(checks[f][0] - checks[f][1]) / checks[f][2];
            if (sigma > worst_sigma) {
                worst_sigma = sigma;
                std::ostringstream at;
                at << family_name(row.family) << " theta=" << row.theta << " "
                   << names[f];
                worst_at = at.str();
            }
        }
    }
    double elapsed = timer.seconds();
    bool pass = worst_sigma <= 3.0 && elapsed < 30.0;
    report(3, pass,
           "sampled tail frequencies, max |dev|=" + fmt(worst_sigma, 3) +
               " standard errors at " + worst_at + " (tol 3); " +
               fmt(elapsed, 3) + "s (limit 30s)");
}

// =======================================================================
// Criterion 4: Monte-Carlo Fisher information against quadrature
// =======================================================================

double quadrature_fisher(Family family, double theta) {
    CopulaModel center = make_model(family, theta);
    double h = 1e-5 * std::max(1.0, theta);
    CopulaModel hi = make_model(family, theta + h);
    CopulaModel lo = make_model(family, theta - h);
    auto [qx, qw] = gauss_legendre(400, 0.0, 1.0);
    double total = 0.0;
    for (std::size_t i = 0; i < qx.size(); ++i) {
        for (std::size_t j = 0; j < qx.size(); ++j) {
            UnitPair p{qx[i], qx[j]};
            double score = (log_copula_density(hi, p) -
                            log_copula_density(lo, p)) /
                           (2.0 * h);
            total += qw[i] * qw[j] * score * score *
                     std::exp(log_copula_density(center, p));
        }
    }
    return total;
}

void criterion_fisher() {
    Timer timer;
    bool pass = true;
    std::ostringstream detail;
    const std::pair<Family, double> cases[2] = {{Family::Clayton, 2.0},
                                               {Family::Gumbel, 2.0}};
    const double reference[2] = {kQuadInfoClayton2, kQuadInfoGumbel2};
    std::uint64_t seed = 40;
    for (int k = 0; k < 2; ++k) {
        auto [family, theta] = cases[k];
        double quad = quadrature_fisher(family, theta);
        if (std::fabs(quad - reference[k]) > 1e-4) {
            pass = false;
            detail << family_name(family)
                   << " quadrature oracle drifted: " << fmt(quad, 8) << " vs "
                   << fmt(reference[k], 8) << "; ";
            continue;
        }
        PriorSpec spec = default_prior_spec(family);
        spec.fisher_mc_draws = 200000;
        Rng rng(RngSeed{++seed});
        FisherEstimate est = fisher_information_mc(family, theta, spec, rng);
        double sigma = std::fabs(est.value - quad) / est.std_error;
        if (sigma > 3.0) pass = false;
        detail << family_name(family) << " |mc-quad|=" << fmt(sigma, 3)
               << " standard errors (mc=" << fmt(est.value, 6)
               << ", quad=" << fmt(quad, 6) << "); ";
    }
    double elapsed = timer.seconds();
    pass = pass && elapsed < 60.0;
    report(4, pass,
           "fisher mc vs quadrature, " + detail.str() + fmt(elapsed, 3) +
               "s (limit 60s)");
}

// =======================================================================
// Criteria 5 and 6: coverage and posterior-mean recovery studies
// =======================================================================

SimConfig study_config(const TruthRow& row, std::size_t replicates,
                       std::uint64_t base_seed) {
    SimConfig config = make_sim_config(row.family, row.theta);
    config.n = 500;
    config.replicates = replicates;
    config.alpha = kAlpha;
    config.level = 0.95;
    config.base_seed = RngSeed{base_seed};
    config.grid_size = 2000;
    config.threads = 0;
    return config;
}

void criterion_coverage() {
    Timer timer;
    bool pass = true;
    double min_cov = 1.0;
    std::string min_at;
    std::ostringstream bad;
    std::uint64_t seed = 500;
    for (const TruthRow& row : kTruthTable) {
        SimConfig config = study_config(row, 200, ++seed);
        SimReport result = coverage_study(config);
        const char* names[3] = {"RL", "RU", "RC"};
        for (int f = 0; f < 3; ++f) {
            double cov = result.coverage[f];
            if (cov < min_cov) {
                min_cov = cov;
                std::ostringstream at;
                at << family_name(row.family) << " theta=" << row.theta << " "
                   << names[f];
                min_at = at.str();
            }
            if (cov < 0.87 || cov > 1.0) {
                pass = false;
                bad << family_name(row.family) << " theta=" << row.theta << " "
                    << names[f] << "=" << fmt(cov, 3) << "; ";
            }
        }
    }
    report(5, pass,
           "coverage study (n=500, R=200), min coverage=" + fmt(min_cov, 3) +
               " at " + min_at + " (band [0.87,1.00]); " + bad.str() +
               fmt(timer.seconds(), 1) + "s");
}

void criterion_recovery() {
    Timer timer;
    bool pass = true;
    double worst = 0.0;
    std::string worst_at;
    std::ostringstream lines;
    std::uint64_t seed = 630;
    for (const TruthRow& row : kTruthTable) {
        SimConfig config = study_config(row, 50, ++seed);
        SimReport result = coverage_study(config);
        const char* names[3] = {"RL", "RU", "RC"};
        lines << "         " << family_name(row.family) << " theta="
              << row.theta << ":";
        for (int f = 0; f < 3; ++f) {
            double dev = result.mean_posterior_mean[f] - result.truth[f];
            lines << " d" << names[f] << "=" << fmt(dev, 3);
            if (std::fabs(dev) > worst) {
                worst = std::fabs(dev);
                std::ostringstream at;
                at << family_name(row.family) << " theta=" << row.theta << " "
                   << names[f];
                worst_at = at.str();
            }
            if (std::fabs(dev) > 0.002) pass = false;
        }
        lines << "\n";
    }
    report(6, pass,
           "posterior mean recovery (n=500, R=50), max |dev|=" +
               fmt(worst, 3) + " at " + worst_at + " (tol 0.002); " +
               fmt(timer.seconds(), 1) + "s");
    std::cout << lines.str();
}

// =======================================================================
// Criterion 7: paired glucose data replication (conditional on the file)
// =======================================================================

void criterion_glucose() {
    Timer timer;
    std::string path;
    if (const char* env = std::getenv("TAILRISK_NHANES_CSV")) {
        path = env;
    } else {
        path = std::string(TAILRISK_SOURCE_DIR) + "/data/nhanes_glu_ghb.csv";
    }
    if (!fs::exists(path)) {
        report_skip(7, "prepared glucose CSV not found at " + path);
        return;
    }

    app::IngestOptions options;
    options.columns = app::parse_columns("LBXGLU,LBXGH");
    app::InputTable table = app::ingest_csv(path, options);
    PseudoSample sample = to_pseudo_observations({table.x, table.y});

    struct Want {
        Family family;
        double mle;
        double theta_mean;
        double rl;
        double ru;
        double rc;
    };
    const Want wants[2] = {
        {Family::Clayton, 0.6636, 0.6622, 0.019533, 0.004022, 0.390661},
        {Family::Gumbel, 1.8904, 1.8893, 0.013252, 0.028640, 0.265034}};

    bool pass = true;
    std::ostringstream detail;
    detail << "n=" << sample.n() << "; ";
    for (const Want& want : wants) {
        PriorSpec spec = default_prior_spec(want.family);
        JeffreysPrior prior = restricted_jeffreys_prior(spec, 0);
        ThetaGrid grid = make_theta_grid(spec, 2000);
        PosteriorGrid post = posterior_grid(prior, sample, grid, 0);
        TailRiskReport rep =
            report_from_posterior(spec, sample, post, kAlpha, 0.95);

        auto check = [&](const char* name, double got, double expect,
                         double tol) {
            double dev = std::fabs(got - expect);
            if (dev > tol) {
                pass = false;
                detail << family_name(want.family) << " " << name << "="
                       << fmt(got, 6) << " vs " << fmt(expect, 6) << " (tol "
                       << fmt(tol, 2) << "); ";
            }
        };
        check("mle", rep.mle.theta, want.mle, 0.005);
        check("theta_mean", rep.theta.mean, want.theta_mean, 0.01);
        check("RL_mean", rep.risk.lower.mean, want.rl, 5e-4);
        check("RU_mean", rep.risk.upper.mean, want.ru, 5e-4);
        check("RC_mean", rep.risk.conditional.mean, want.rc, 5e-4);
        if (want.family == Family::Gumbel) {
            check("RU_ratio", rep.independence_ratio_upper, 11.46, 0.2);
        }
    }
    report(7, pass,
           "paired glucose replication, " + detail.str() +
               fmt(timer.seconds(), 1) + "s");
}

// =======================================================================
// Criterion 8: delta-method vs grid-quantile intervals
// =======================================================================

void criterion_delta_vs_grid() {
    Timer timer;
    bool pass = true;
    std::ostringstream detail;
    std::uint64_t seed = 80;
    for (Family family : {Family::Clayton, Family::Gumbel}) {
        CopulaModel truth = make_model(family, 2.0);
        CopulaSample data = sample_dataset(truth, 2000, RngSeed{++seed});
        PseudoSample sample = pseudo_sample_from_pairs(data.pairs);

        PriorSpec spec = default_prior_spec(family);
        JeffreysPrior prior = restricted_jeffreys_prior(spec, 0);
        // At n=2000 the posterior spans only a few default grid cells, so
        // the quantile endpoints need a finer grid than the default 2000
        // nodes to keep discretization below the agreement being tested.
        ThetaGrid grid = make_theta_grid(spec, 20000);
        PosteriorGrid post = posterior_grid(prior, sample, grid, 0);
        TailSpec lower{kAlpha, TailFunctional::Lower};
        CredibleInterval grid_ci =
            induced_risk_posterior(post, lower, 0.95).interval;

        MleResult fit = mle(family, sample, spec);
        double info = interpolate_fisher(prior.table, fit.theta);
        CredibleInterval delta =
            delta_method_ci(family, fit.theta, sample.n(), info, lower, 0.95);

        double width = grid_ci.hi - grid_ci.lo;
        double dev_lo = std::fabs(delta.lo - grid_ci.lo) / width;
        double dev_hi = std::fabs(delta.hi - grid_ci.hi) / width;
        if (dev_lo > 0.1 || dev_hi > 0.1) pass = false;
        detail << family_name(family) << " endpoint devs " << fmt(dev_lo, 3)
               << "/" << fmt(dev_hi, 3) << " of width; ";
    }
    report(8, pass,
           "delta vs grid intervals for RL (n=2000, tol 10% of width), " +
               detail.str() + fmt(timer.seconds(), 1) + "s");
}

// =======================================================================
// Criterion 9: byte-identical reports modulo timestamps
// =======================================================================

int run_cli(const std::string& args) {
    std::string cmd = std::string("\"") + TAILRISK_CLI_PATH + "\" " + args +
                      " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

nlohmann::json load_json(const fs::path& path) {
    std::ifstream in(path);
    return nlohmann::json::parse(in);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_determinism() {
    Timer timer;
    fs::path dir = fs::temp_directory_path() / "tailrisk_acceptance";
    fs::create_directories(dir);
    std::string fixture =
        std::string(TAILRISK_SOURCE_DIR) + "/data/fixture_pairs.csv";

    bool pass = true;
    std::ostringstream detail;

    fs::path fit_a = dir / "fit_a.json";
    fs::path fit_b = dir / "fit_b.json";
    std::string fit_args = "fit --input \"" + fixture +
                           "\" --columns LBXGLU,LBXGH,SEQN --family both "
                           "--seed 123 --fisher-draws 2000 --fisher-grid 20 "
                           "--grid-size 500 --output \"";
    if (run_cli(fit_args + fit_a.string() + "\"") != 0 ||
        run_cli(fit_args + fit_b.string() + "\"") != 0) {
        pass = false;
        detail << "fit run failed; ";
    } else {
        nlohmann::json a = load_json(fit_a);
        nlohmann::json b = load_json(fit_b);
        a["provenance"].erase("timestamp");
        b["provenance"].erase("timestamp");
        if (a.dump(2) != b.dump(2)) {
            pass = false;
            detail << "fit reports differ beyond the timestamp; ";
        } else {
            detail << "fit reports identical; ";
        }
    }

    fs::path sim_a = dir / "sim_a.json";
    fs::path sim_b = dir / "sim_b.json";
    std::string sim_args =
        "simulate --family gumbel --theta 2 --n 80 --replicates 3 "
        "--seed 77 --fisher-seed 5 --fisher-draws 500 --fisher-grid 8 "
        "--grid-size 300 --output \"";
    if (run_cli(sim_args + sim_a.string() + "\"") != 0 ||
        run_cli(sim_args + sim_b.string() + "\"") != 0) {
        pass = false;
        detail << "simulate run failed; ";
    } else {
        nlohmann::json a = load_json(sim_a);
        nlohmann::json b = load_json(sim_b);
        for (nlohmann::json* doc : {&a, &b}) {
            (*doc)["provenance"].erase("timestamp");
            (*doc)["provenance"].erase("wall_seconds");
            doc->erase("records_csv");
        }
        std::string rec_a = read_file(dir / "sim_a_records.csv");
        std::string rec_b = read_file(dir / "sim_b_records.csv");
        if (a.dump(2) != b.dump(2) || rec_a.empty() || rec_a != rec_b) {
            pass = false;
            detail << "simulate outputs differ beyond timing fields; ";
        } else {
            detail << "simulate reports and records identical; ";
        }
    }

    report(9, pass,
           "determinism of repeated runs, " + detail.str() +
               fmt(timer.seconds(), 1) + "s");
}

}  // namespace

int main() {
    std::cout.setf(std::ios::fixed);
    std::cout.precision(6);
    std::cout.unsetf(std::ios::fixed);
    Timer total;
    criterion_closed_forms();
    criterion_density();
    criterion_sampler();
    criterion_fisher();
    criterion_coverage();
    criterion_recovery();
    criterion_glucose();
    criterion_delta_vs_grid();
    criterion_determinism();
    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : "criteria failed: " +
                                        std::to_string(g_failures))
              << " (" << fmt(total.seconds(), 1) << "s total)\n";
    return g_failures;
}

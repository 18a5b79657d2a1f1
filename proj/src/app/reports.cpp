#include "tailrisk/app/reports.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <chrono>
#include <iomanip>
#include <ostream>

namespace tailrisk::app {

namespace {

const char* method_name(IntervalMethod method) {
    return method == IntervalMethod::GridQuantile ? "grid_quantile"
                                                  : "delta_method";
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json fisher_settings_json(const PriorSpec& spec) {
    return nlohmann::json{{"draws", spec.fisher_mc_draws},
                          {"grid_size", spec.fisher_grid_size},
                          {"fd_base", spec.fisher_fd.base},
                          {"fd_relative", spec.fisher_fd.relative},
                          {"seed", spec.fisher_seed.value},
                          {"rng", kRngAlgorithm}};
}

}  // namespace

nlohmann::json credible_interval_json(const CredibleInterval& ci) {
    return nlohmann::json{{"level", ci.level},
                          {"lo", ci.lo},
                          {"hi", ci.hi},
                          {"method", method_name(ci.method)}};
}

nlohmann::json posterior_summary_json(const PosteriorSummary& summary) {
    return nlohmann::json{{"mean", summary.mean},
                          {"variance", summary.variance},
                          {"ci", credible_interval_json(summary.interval)}};
}

nlohmann::json family_fit_json(const FamilyFit& fit) {
    const TailRiskReport& rep = fit.report;
    nlohmann::json risk;
    risk["RL"] = posterior_summary_json(rep.risk.lower);
    risk["RU"] = posterior_summary_json(rep.risk.upper);
    risk["RC"] = posterior_summary_json(rep.risk.conditional);
    nlohmann::json delta;
    delta["RL"] = credible_interval_json(fit.delta[0]);
    delta["RU"] = credible_interval_json(fit.delta[1]);
    delta["RC"] = credible_interval_json(fit.delta[2]);
    nlohmann::json fisher = fisher_settings_json(fit.spec);
    fisher["cache_hit"] = fit.fisher_cache_hit;
    return nlohmann::json{
        {"family", family_name(rep.family)},
        {"n", rep.n},
        {"alpha", rep.alpha},
        {"level", rep.level},
        {"truncation",
         {{"theta_min", fit.spec.theta_min}, {"theta_max", fit.spec.theta_max}}},
        {"grid_size", fit.posterior.grid.size()},
        {"theta", posterior_summary_json(rep.theta)},
        {"risk", risk},
        {"independence_ratio_upper", rep.independence_ratio_upper},
        {"mle",
         {{"theta", rep.mle.theta},
          {"log_lik", rep.mle.log_lik},
          {"at_boundary", rep.mle.at_boundary}}},
        {"delta_ci", delta},
        {"fisher", fisher}};
}

nlohmann::json fit_report_json(const InputTable& table,
                               const ColumnSpec& columns,
                               const std::vector<FamilyFit>& fits,
                               const std::string& timestamp) {
    nlohmann::json cols{{"x", columns.x}, {"y", columns.y}};
    if (!columns.id.empty()) cols["id"] = columns.id;
    nlohmann::json families = nlohmann::json::array();
    for (const FamilyFit& fit : fits) families.push_back(family_fit_json(fit));
    nlohmann::json provenance{{"version", kToolVersion},
                              {"rng", kRngAlgorithm}};
    if (!timestamp.empty()) provenance["timestamp"] = timestamp;
    return nlohmann::json{{"schema", "tailrisk-fit-report"},
                          {"schema_version", kFitSchemaVersion},
                          {"input",
                           {{"path", table.path},
                            {"rows_read", table.rows_read},
                            {"rows_used", table.x.size()},
                            {"rows_dropped", table.rows_dropped},
                            {"columns", cols}}},
                          {"families", families},
                          {"provenance", provenance}};
}

nlohmann::json sim_report_json(const SimReport& report,
                               const std::string& records_csv,
                               const std::string& timestamp) {
    const SimConfig& cfg = report.config;
    nlohmann::json config{
        {"family", family_name(cfg.model.family)},
        {"theta_true", cfg.model.theta},
        {"n", cfg.n},
        {"replicates", cfg.replicates},
        {"alpha", cfg.alpha},
        {"level", cfg.level},
        {"base_seed", cfg.base_seed.value},
        {"rng", kRngAlgorithm},
        {"grid_size", cfg.grid_size},
        {"rerank", cfg.rerank},
        {"truncation",
         {{"theta_min", cfg.prior.theta_min},
          {"theta_max", cfg.prior.theta_max}}},
        {"fisher", fisher_settings_json(cfg.prior)}};
    auto by_functional = [](const std::array<double, 3>& a) {
        return nlohmann::json{{"RL", a[0]}, {"RU", a[1]}, {"RC", a[2]}};
    };
    nlohmann::json provenance{{"version", kToolVersion},
                              {"wall_seconds", report.wall_seconds}};
    if (!timestamp.empty()) provenance["timestamp"] = timestamp;
    nlohmann::json out{{"schema", "tailrisk-sim-report"},
                       {"schema_version", kSimSchemaVersion},
                       {"config", config},
                       {"truth", by_functional(report.truth)},
                       {"mean_posterior_mean",
                        by_functional(report.mean_posterior_mean)},
                       {"coverage", by_functional(report.coverage)},
                       {"provenance", provenance}};
    if (!records_csv.empty()) out["records_csv"] = records_csv;
    return out;
}

void write_sim_records_csv(std::ostream& out, const SimReport& report) {
    out << "replicate,theta_mean";
    for (TailFunctional f : kFunctionalOrder) {
        const char* name = functional_name(f);
        out << ',' << name << "_mean," << name << "_lo," << name << "_hi,"
            << name << "_covered";
    }
    out << '\n';
    for (const ReplicateRecord& rec : report.records) {
        out << rec.index << ',' << fmt_double(rec.theta_mean);
        for (const FunctionalOutcome& f : rec.risk) {
            out << ',' << fmt_double(f.mean) << ',' << fmt_double(f.lo) << ','
                << fmt_double(f.hi) << ',' << (f.covered ? 1 : 0);
        }
        out << '\n';
    }
}

bool write_risk_curve_csv(std::ostream& out, const PosteriorGrid& post,
                          TailSpec spec) {
    std::size_t g = post.grid.size();
    std::vector<double> risk(g);
    std::vector<double> slope(g);
    for (std::size_t i = 0; i < g; ++i) {
        CopulaModel model{post.family, post.grid.nodes[i]};
        risk[i] = tail_risk(model, spec);
        slope[i] = tail_risk_derivative(model, spec);
    }

    out << "value,density\n";
    if (g == 1) {
        out << fmt_double(risk[0]) << ',' << fmt_double(post.weights[0])
            << '\n';
        return true;
    }

    bool monotone = true;
    for (std::size_t i = 0; i + 1 < g && monotone; ++i) {
        if (!((risk[i + 1] > risk[i] && slope[i] > 0.0) ||
              (risk[i + 1] < risk[i] && slope[i] < 0.0))) {
            monotone = false;
        }
    }
    if (monotone) {
        for (std::size_t i = 0; i < g; ++i) {
            double density = post.density_at(i) / std::fabs(slope[i]);
            out << fmt_double(risk[i]) << ',' << fmt_double(density) << '\n';
        }
        return true;
    }

    // Histogram fallback for a non-monotone functional.
    constexpr std::size_t kBins = 64;
    double lo = risk[0];
    double hi = risk[0];
    for (double r : risk) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (!(hi > lo)) {
        out << fmt_double(lo) << ",1\n";
        return false;
    }
    double width = (hi - lo) / static_cast<double>(kBins);
    std::vector<double> mass(kBins, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
        auto bin = static_cast<std::size_t>((risk[i] - lo) / width);
        if (bin >= kBins) bin = kBins - 1;
        mass[bin] += post.weights[i];
    }
    for (std::size_t b = 0; b < kBins; ++b) {
        double center = lo + (static_cast<double>(b) + 0.5) * width;
        out << fmt_double(center) << ',' << fmt_double(mass[b] / width) << '\n';
    }
    return false;
}

void write_theta_curve_csv(std::ostream& out, const PosteriorGrid& post) {
    out << "value,density\n";
    for (std::size_t i = 0; i < post.grid.size(); ++i) {
        out << fmt_double(post.grid.nodes[i]) << ','
            << fmt_double(post.density_at(i)) << '\n';
    }
}

void print_fit_summary(std::ostream& out, const FamilyFit& fit) {
    const TailRiskReport& rep = fit.report;
    auto line = [&out](const char* label, const PosteriorSummary& s) {
        out << "  " << label << "  mean " << std::setw(10) << s.mean
            << "   CrI [" << s.interval.lo << ", " << s.interval.hi << "]\n";
    };
    out << "== " << family_name(rep.family) << " (n=" << rep.n
        << ", alpha=" << rep.alpha << ", level=" << rep.level << ") ==\n";
    out << std::setprecision(6);
    line("theta", rep.theta);
    out << "         MLE " << rep.mle.theta
        << (rep.mle.at_boundary ? " (at truncation boundary)" : "") << "\n";
    line("R_L  ", rep.risk.lower);
    line("R_U  ", rep.risk.upper);
    line("R_C  ", rep.risk.conditional);
    out << "  R_U over alpha^2: " << rep.independence_ratio_upper << "\n";
}

std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace tailrisk::app

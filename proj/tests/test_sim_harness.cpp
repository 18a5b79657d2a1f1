#include <doctest.h>

#include <cmath>

#include "tailrisk/sim_harness.hpp"

using namespace tailrisk;

namespace {

SimConfig small_study(Family family, double theta_true) {
    SimConfig config = make_sim_config(family, theta_true);
    config.n = 100;
    config.replicates = 8;
    config.grid_size = 400;
    config.base_seed = RngSeed{31};
    config.prior.fisher_grid_size = 10;
    config.prior.fisher_mc_draws = 400;
    config.prior.fisher_seed = RngSeed{5};
    config.threads = 1;
    return config;
}

}  // namespace

TEST_CASE("functional order and names are fixed") {
    CHECK(kFunctionalOrder[0] == TailFunctional::Lower);
    CHECK(kFunctionalOrder[1] == TailFunctional::Upper);
    CHECK(kFunctionalOrder[2] == TailFunctional::Conditional);
    CHECK(std::string(functional_name(TailFunctional::Lower)) == "RL");
    CHECK(std::string(functional_name(TailFunctional::Upper)) == "RU");
    CHECK(std::string(functional_name(TailFunctional::Conditional)) == "RC");
}

TEST_CASE("replicates are deterministic in their index") {
    SimConfig config = small_study(Family::Clayton, 2.0);
    ReplicateRecord a = run_replicate(config, 3);
    ReplicateRecord b = run_replicate(config, 3);
    CHECK(a.index == 3);
    CHECK(a.theta_mean == b.theta_mean);
    for (std::size_t f = 0; f < 3; ++f) {
        CHECK(a.risk[f].mean == b.risk[f].mean);
        CHECK(a.risk[f].lo == b.risk[f].lo);
        CHECK(a.risk[f].hi == b.risk[f].hi);
        CHECK(a.risk[f].covered == b.risk[f].covered);
    }
    ReplicateRecord c = run_replicate(config, 4);
    CHECK(c.theta_mean != a.theta_mean);
}

TEST_CASE("coverage studies aggregate their records") {
    SimConfig config = small_study(Family::Clayton, 2.0);
    SimReport report = coverage_study(config);
    REQUIRE(report.records.size() == config.replicates);
    for (std::size_t r = 0; r < report.records.size(); ++r) {
        CHECK(report.records[r].index == r);
    }

    for (std::size_t f = 0; f < 3; ++f) {
        TailSpec spec{config.alpha, kFunctionalOrder[f]};
        CHECK(report.truth[f] == tail_risk(config.model, spec));

        double mean = 0.0;
        double hits = 0.0;
        for (const ReplicateRecord& record : report.records) {
            mean += record.risk[f].mean;
            if (record.risk[f].covered) hits += 1.0;
            CHECK(record.risk[f].lo <= record.risk[f].hi);
        }
        mean /= static_cast<double>(config.replicates);
        hits /= static_cast<double>(config.replicates);
        CHECK(report.mean_posterior_mean[f] ==
              doctest::Approx(mean).epsilon(1e-12));
        CHECK(report.coverage[f] == doctest::Approx(hits).epsilon(1e-12));
        double scaled = report.coverage[f] * 8.0;
        CHECK(std::fabs(scaled - std::round(scaled)) < 1e-9);
    }
    CHECK(report.wall_seconds > 0.0);
}

TEST_CASE("studies are invariant to the thread count") {
    SimConfig one = small_study(Family::Gumbel, 2.5);
    one.replicates = 6;
    SimConfig many = one;
    many.threads = 3;
    SimReport ra = coverage_study(one);
    SimReport rb = coverage_study(many);
    for (std::size_t f = 0; f < 3; ++f) {
        CHECK(ra.mean_posterior_mean[f] == rb.mean_posterior_mean[f]);
        CHECK(ra.coverage[f] == rb.coverage[f]);
    }
    for (std::size_t r = 0; r < ra.records.size(); ++r) {
        CHECK(ra.records[r].theta_mean == rb.records[r].theta_mean);
    }
}

TEST_CASE("reranking the draws changes but does not break replicates") {
    SimConfig config = small_study(Family::Clayton, 3.0);
    ReplicateRecord plain = run_replicate(config, 0);
    config.rerank = true;
    ReplicateRecord ranked = run_replicate(config, 0);
    CHECK(ranked.theta_mean != plain.theta_mean);
    CHECK(ranked.risk[0].mean > 0.0);
    CHECK(ranked.risk[0].mean < 1.0);
}

TEST_CASE("study configs are validated") {
    SimConfig config = small_study(Family::Clayton, 2.0);
    config.replicates = 0;
    CHECK_THROWS_AS(coverage_study(config), ConfigError);
    config = small_study(Family::Clayton, 2.0);
    config.n = 5;
    CHECK_THROWS_AS(coverage_study(config), ConfigError);
    config = small_study(Family::Clayton, 2.0);
    config.prior = default_prior_spec(Family::Gumbel);
    CHECK_THROWS_AS(coverage_study(config), ConfigError);
    config = small_study(Family::Clayton, 2.0);
    config.alpha = 1.0;
    CHECK_THROWS_AS(coverage_study(config), ConfigError);
    config = small_study(Family::Clayton, 2.0);
    config.level = 0.0;
    CHECK_THROWS_AS(coverage_study(config), ConfigError);
}

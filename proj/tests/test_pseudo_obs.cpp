#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "tailrisk/pseudo_obs.hpp"

using namespace tailrisk;

TEST_CASE("pseudo-observations use midranks over n+1") {
    RawPairs raw{{3.2, 1.1, 5.0}, {10.0, 30.0, 20.0}};
    PseudoSample ps = to_pseudo_observations(raw);
    REQUIRE(ps.n() == 3);
    CHECK(ps.pairs[0].u == doctest::Approx(2.0 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[1].u == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[2].u == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[0].v == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[1].v == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[2].v == doctest::Approx(2.0 / 4.0).epsilon(1e-15));
}

TEST_CASE("ties receive averaged ranks") {
    RawPairs raw{{2.0, 2.0, 7.0}, {5.0, 5.0, 5.0}};
    PseudoSample ps = to_pseudo_observations(raw);
    CHECK(ps.pairs[0].u == doctest::Approx(1.5 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[1].u == doctest::Approx(1.5 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[2].u == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[0].v == doctest::Approx(2.0 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[1].v == doctest::Approx(2.0 / 4.0).epsilon(1e-15));
    CHECK(ps.pairs[2].v == doctest::Approx(2.0 / 4.0).epsilon(1e-15));
}

TEST_CASE("ranks are invariant under increasing transforms") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    RawPairs raw;
    for (int i = 0; i < 200; ++i) {
        raw.x.push_back(unif(gen));
        raw.y.push_back(unif(gen));
    }
    RawPairs warped;
    for (int i = 0; i < 200; ++i) {
        warped.x.push_back(std::exp(raw.x[i]));
        warped.y.push_back(2.0 * raw.y[i] + 1.0);
    }
    PseudoSample a = to_pseudo_observations(raw);
    PseudoSample b = to_pseudo_observations(warped);
    for (int i = 0; i < 200; ++i) {
        CHECK(a.pairs[i].u == b.pairs[i].u);
        CHECK(a.pairs[i].v == b.pairs[i].v);
    }
    for (const UnitPair& p : a.pairs) {
        CHECK(p.u > 0.0);
        CHECK(p.u < 1.0);
        CHECK(p.v > 0.0);
        CHECK(p.v < 1.0);
    }
}

TEST_CASE("ranks follow the observations under permutation") {
    RawPairs raw{{4.0, 9.0, 1.0, 6.0}, {0.5, 0.1, 0.9, 0.2}};
    PseudoSample ps = to_pseudo_observations(raw);
    RawPairs perm{{1.0, 4.0, 6.0, 9.0}, {0.9, 0.5, 0.2, 0.1}};
    PseudoSample qs = to_pseudo_observations(perm);
    CHECK(qs.pairs[0].u == ps.pairs[2].u);
    CHECK(qs.pairs[0].v == ps.pairs[2].v);
    CHECK(qs.pairs[3].u == ps.pairs[1].u);
    CHECK(qs.pairs[3].v == ps.pairs[1].v);
}

TEST_CASE("invalid raw input is rejected") {
    CHECK_THROWS_AS(to_pseudo_observations(RawPairs{{1.0}, {2.0}}),
                    ConfigError);
    CHECK_THROWS_AS(to_pseudo_observations(RawPairs{{1.0, 2.0}, {2.0}}),
                    ConfigError);
    double nan = std::numeric_limits<double>::quiet_NaN();
    double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(
        to_pseudo_observations(RawPairs{{1.0, nan}, {2.0, 3.0}}), ConfigError);
    CHECK_THROWS_AS(
        to_pseudo_observations(RawPairs{{1.0, 2.0}, {inf, 3.0}}), ConfigError);
}

TEST_CASE("pseudo_sample_from_pairs checks the open square") {
    std::vector<UnitPair> pairs{{0.2, 0.3}, {0.9, 0.4}};
    PseudoSample ps = pseudo_sample_from_pairs(pairs);
    CHECK(ps.n() == 2);
    pairs[1].v = 1.0;
    CHECK_THROWS_AS(pseudo_sample_from_pairs(pairs), ConfigError);
    pairs[1].v = 0.0;
    CHECK_THROWS_AS(pseudo_sample_from_pairs(pairs), ConfigError);
}

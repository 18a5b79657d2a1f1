#include "tailrisk/sampling.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tailrisk {

namespace {

// Bracket and stopping tolerance for the Gumbel conditional inversion.
constexpr double kBracketLo = 1e-12;
constexpr double kBracketHi = 1.0 - 1e-12;
constexpr double kRootTol = 1e-12;
constexpr int kMaxIter = 200;

// Conditional CDF of V given U = u for Gumbel, as a function of
// y = -log v with x = -log u fixed.
double gumbel_conditional_cdf(double theta, double x, double y) {
    double radius = detail::gumbel_radius(theta, x, y);
    return std::exp(-radius + x +
                    (theta - 1.0) * (std::log(x) - std::log(radius)));
}

double clayton_conditional_inverse(double theta, double u, double w) {
    // Closed form: v = ((w^{-theta/(1+theta)} - 1) u^{-theta} + 1)^{-1/theta},
    // evaluated via logs so large theta and small u cannot overflow.
    double q = -theta / (1.0 + theta) * std::log(w);
    double log_g = q < 700.0 ? std::log(std::expm1(q)) : q;
    double a = -theta * std::log(u) + log_g;
    double log_vpow;  // log(v^-theta) = log(1 + e^a)
    if (a > 0.0) {
        log_vpow = a + std::log1p(std::exp(-a));
    } else {
        log_vpow = std::log1p(std::exp(a));
    }
    double v = std::exp(-log_vpow / theta);
    // For w within an ulp of 1 the exponent underflows and v rounds to 1;
    // pull it back inside the open interval.
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    return v;
}

double gumbel_conditional_inverse(double theta, double u, double w) {
    if (theta == 1.0) return w;
    double x = -std::log(u);

    // Brent's method on v in [kBracketLo, kBracketHi]; values of w outside
    // the bracket's range clamp to the nearer endpoint.
    double a = kBracketLo;
    double b = kBracketHi;
    double fa = gumbel_conditional_cdf(theta, x, -std::log(a)) - w;
    double fb = gumbel_conditional_cdf(theta, x, -std::log(b)) - w;
    if (fa >= 0.0) return a;
    if (fb <= 0.0) return b;

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        double tol1 =
            2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
            0.5 * kRootTol;
        double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double s = fb / fa;
            double p;
            double q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc;
                double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
            double min2 = std::fabs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::fabs(d) > tol1) {
            b += d;
        } else {
            b += xm > 0.0 ? tol1 : -tol1;
        }
        fb = gumbel_conditional_cdf(theta, x, -std::log(b)) - w;
    }
    std::ostringstream msg;
    msg << "gumbel conditional inversion failed to converge"
        << " (theta=" << theta << ", u=" << u << ", w=" << w << ")";
    throw NumericError(msg.str());
}

}  // namespace

RngSeed derive_seed(RngSeed base, std::uint64_t index) {
    std::uint64_t z = base.value + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return RngSeed{z ^ (z >> 31)};
}

namespace detail {

double conditional_v_given_u(const CopulaModel& model, double u, double w) {
    validate_model(model);
    if (!(u > 0.0) || !(u < 1.0) || !(w > 0.0) || !(w < 1.0)) {
        std::ostringstream msg;
        msg << "conditional inversion needs u,w strictly inside (0,1), got u="
            << u << " w=" << w;
        throw DomainError(msg.str());
    }
    if (model.family == Family::Clayton) {
        return clayton_conditional_inverse(model.theta, u, w);
    }
    return gumbel_conditional_inverse(model.theta, u, w);
}

}  // namespace detail

UnitPair sample_pair(const CopulaModel& model, Rng& rng) {
    double u = rng.uniform01();
    double w = rng.uniform01();
    return UnitPair{u, detail::conditional_v_given_u(model, u, w)};
}

CopulaSample sample_dataset(const CopulaModel& model, std::size_t n,
                            RngSeed seed) {
    validate_model(model);
    if (n < 1) throw ConfigError("sample size must be at least 1");
    CopulaSample sample{model, seed, {}};
    sample.pairs.reserve(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        sample.pairs.push_back(sample_pair(model, rng));
    }
    return sample;
}

}  // namespace tailrisk

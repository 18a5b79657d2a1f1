#include "tailrisk/copula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace tailrisk {

namespace {

// Linear-scale exponentials overflow double near e^709; above this the
// shifted form of log_sum_pow is used instead.
constexpr double kExpArgLimit = 700.0;

void check_theta_finite(Family family, double theta) {
    if (!std::isfinite(theta)) {
        std::ostringstream msg;
        msg << family_name(family) << " theta must be finite, got " << theta;
        throw DomainError(msg.str());
    }
}

void check_interior(double t, const char* what) {
    if (!(t > 0.0) || !(t < 1.0)) {
        std::ostringstream msg;
        msg << what << " must lie strictly inside (0,1), got " << t;
        throw DomainError(msg.str());
    }
}

void check_pair(UnitPair p) {
    check_interior(p.u, "u");
    check_interior(p.v, "v");
}

}  // namespace

// =======================================================================
// Types
// =======================================================================

const char* family_name(Family family) {
    switch (family) {
        case Family::Clayton: return "clayton";
        case Family::Gumbel: return "gumbel";
    }
    throw ConfigError("unknown copula family enum value");
}

Family family_from_name(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "clayton") return Family::Clayton;
    if (lower == "gumbel") return Family::Gumbel;
    throw ConfigError("unknown copula family '" + name +
                      "' (expected clayton or gumbel)");
}

double family_theta_floor(Family family) {
    return family == Family::Clayton ? 0.0 : 1.0;
}

CopulaModel make_model(Family family, double theta) {
    CopulaModel model{family, theta};
    validate_model(model);
    return model;
}

void validate_model(const CopulaModel& model) {
    check_theta_finite(model.family, model.theta);
    switch (model.family) {
        case Family::Clayton:
            if (!(model.theta > 0.0)) {
                std::ostringstream msg;
                msg << "clayton requires theta > 0, got " << model.theta;
                throw DomainError(msg.str());
            }
            return;
        case Family::Gumbel:
            if (!(model.theta >= 1.0)) {
                std::ostringstream msg;
                msg << "gumbel requires theta >= 1, got " << model.theta;
                throw DomainError(msg.str());
            }
            return;
    }
    throw ConfigError("unknown copula family enum value");
}

// =======================================================================
// Log-space kernels
// =======================================================================

namespace detail {

double log_sum_pow(double a, double b) {
    if (a < b) std::swap(a, b);
    if (a < kExpArgLimit) {
        return std::log1p(std::expm1(a) + std::expm1(b));
    }
    return a + std::log1p(std::exp(b - a) - std::exp(-a));
}

double gumbel_radius(double theta, double x, double y) {
    double hi = std::max(x, y);
    double lo = std::min(x, y);
    double ratio_pow = std::exp(theta * (std::log(lo) - std::log(hi)));
    return hi * std::exp(std::log1p(ratio_pow) / theta);
}

double log_abs_dphi(Family family, double theta, double x) {
    if (family == Family::Clayton) {
        return (theta + 1.0) * x;
    }
    return std::log(theta) + (theta - 1.0) * std::log(x) + x;
}

double log_d2phi(Family family, double theta, double x) {
    if (family == Family::Clayton) {
        return std::log(theta + 1.0) + (theta + 2.0) * x;
    }
    return std::log(theta) + (theta - 2.0) * std::log(x) + 2.0 * x +
           std::log(theta - 1.0 + x);
}

double log_density_from_logs(Family family, double theta, double x, double y) {
    if (x < y) std::swap(x, y);
    if (family == Family::Clayton) {
        double log_s = log_sum_pow(theta * x, theta * y);
        return std::log(theta + 1.0) + (theta + 1.0) * (x + y) -
               (2.0 + 1.0 / theta) * log_s;
    }
    if (theta == 1.0) return 0.0;
    double radius = gumbel_radius(theta, x, y);
    return (1.0 - 2.0 * theta) * std::log(radius) - radius +
           std::log(theta - 1.0 + radius) +
           (theta - 1.0) * (std::log(x) + std::log(y)) + x + y;
}

}  // namespace detail

// =======================================================================
// Generator and its derivatives
// =======================================================================

double generator_phi(const CopulaModel& model, double t) {
    validate_model(model);
    if (!(t > 0.0) || !(t <= 1.0)) {
        std::ostringstream msg;
        msg << "generator argument must lie in (0,1], got " << t;
        throw DomainError(msg.str());
    }
    double x = -std::log(t);
    if (model.family == Family::Clayton) {
        return std::expm1(model.theta * x) / model.theta;
    }
    return std::pow(x, model.theta);
}

double generator_dphi(const CopulaModel& model, double t) {
    validate_model(model);
    check_interior(t, "generator argument");
    double x = -std::log(t);
    return -std::exp(detail::log_abs_dphi(model.family, model.theta, x));
}

double generator_d2phi(const CopulaModel& model, double t) {
    validate_model(model);
    check_interior(t, "generator argument");
    double x = -std::log(t);
    return std::exp(detail::log_d2phi(model.family, model.theta, x));
}

// =======================================================================
// Copula surface
// =======================================================================

double copula_cdf(const CopulaModel& model, UnitPair p) {
    validate_model(model);
    check_pair(p);
    double x = -std::log(p.u);
    double y = -std::log(p.v);
    if (model.family == Family::Clayton) {
        double log_s = detail::log_sum_pow(model.theta * x, model.theta * y);
        return std::exp(-log_s / model.theta);
    }
    if (model.theta == 1.0) return p.u * p.v;
    return std::exp(-detail::gumbel_radius(model.theta, x, y));
}

double copula_partial_v(const CopulaModel& model, UnitPair p) {
    validate_model(model);
    check_pair(p);
    double x = -std::log(p.u);
    double y = -std::log(p.v);
    if (model.family == Family::Clayton) {
        double log_s = detail::log_sum_pow(model.theta * x, model.theta * y);
        return std::exp((model.theta + 1.0) * y -
                        (1.0 + 1.0 / model.theta) * log_s);
    }
    if (model.theta == 1.0) return p.u;
    double radius = detail::gumbel_radius(model.theta, x, y);
    return std::exp(-radius + y +
                    (model.theta - 1.0) * (std::log(y) - std::log(radius)));
}

double copula_partial_u(const CopulaModel& model, UnitPair p) {
    return copula_partial_v(model, UnitPair{p.v, p.u});
}

double log_copula_density(const CopulaModel& model, UnitPair p) {
    validate_model(model);
    check_pair(p);
    return detail::log_density_from_logs(model.family, model.theta,
                                         -std::log(p.u), -std::log(p.v));
}

double copula_density(const CopulaModel& model, UnitPair p) {
    return std::exp(log_copula_density(model, p));
}

double log_copula_density_generic(const CopulaModel& model, UnitPair p) {
    validate_model(model);
    check_pair(p);
    double x = -std::log(p.u);
    double y = -std::log(p.v);
    if (x < y) std::swap(x, y);
    double xc;  // -log C(u,v)
    if (model.family == Family::Clayton) {
        xc = detail::log_sum_pow(model.theta * x, model.theta * y) / model.theta;
    } else {
        if (model.theta == 1.0) return 0.0;
        xc = detail::gumbel_radius(model.theta, x, y);
    }
    return detail::log_d2phi(model.family, model.theta, xc) +
           detail::log_abs_dphi(model.family, model.theta, x) +
           detail::log_abs_dphi(model.family, model.theta, y) -
           3.0 * detail::log_abs_dphi(model.family, model.theta, xc);
}

// =======================================================================
// Tail-risk functionals
// =======================================================================

double tail_risk(const CopulaModel& model, TailSpec spec) {
    validate_model(model);
    if (!(spec.alpha > 0.0) || !(spec.alpha < 1.0)) {
        std::ostringstream msg;
        msg << "alpha must lie strictly inside (0,1), got " << spec.alpha;
        throw DomainError(msg.str());
    }
    double a = spec.alpha;
    switch (spec.functional) {
        case TailFunctional::Lower:
            return copula_cdf(model, UnitPair{a, a});
        case TailFunctional::Upper:
            return 2.0 * a - 1.0 + copula_cdf(model, UnitPair{1.0 - a, 1.0 - a});
        case TailFunctional::Conditional:
            return copula_cdf(model, UnitPair{a, a}) / a;
    }
    throw ConfigError("unknown tail functional enum value");
}

double tail_risk_derivative(const CopulaModel& model, TailSpec spec) {
    validate_model(model);
    double h = std::max(1e-5, 1e-5 * model.theta);
    double floor = family_theta_floor(model.family);
    CopulaModel up{model.family, model.theta + h};
    if (model.theta - h <= floor && model.family == Family::Clayton) {
        return (tail_risk(up, spec) - tail_risk(model, spec)) / h;
    }
    if (model.theta - h < floor && model.family == Family::Gumbel) {
        return (tail_risk(up, spec) - tail_risk(model, spec)) / h;
    }
    CopulaModel down{model.family, model.theta - h};
    return (tail_risk(up, spec) - tail_risk(down, spec)) / (2.0 * h);
}

}  // namespace tailrisk

#pragma once

// One-parameter Archimedean copulas (Clayton, Gumbel) and the joint
// tail-risk functionals R_L, R_U, R_C derived from them.
//
// Conventions used throughout:
//   phi        generator, strictly decreasing convex on (0,1] with phi(1)=0
//   C(u,v)     = phi^{-1}(phi(u) + phi(v))
//   c(u,v)     = -phi''(C) phi'(u) phi'(v) / phi'(C)^3
//   R_L(alpha) = C(alpha, alpha)
//   R_U(alpha) = 2*alpha - 1 + C(1-alpha, 1-alpha)
//   R_C(alpha) = R_L(alpha) / alpha
//
// Density and likelihood evaluation is routed through log space so that
// extreme theta and near-corner (u,v) stay finite in double precision.

#include <string>

#include "tailrisk/errors.hpp"

namespace tailrisk {

// =======================================================================
// Types
// =======================================================================

enum class Family {
    Clayton,  // phi(t) = (t^-theta - 1)/theta, theta > 0
    Gumbel    // phi(t) = (-log t)^theta,       theta >= 1
};

const char* family_name(Family family);
Family family_from_name(const std::string& name);  // "clayton" | "gumbel"

// Lower end of the admissible theta range (Clayton: 0 open, Gumbel: 1 closed).
double family_theta_floor(Family family);

struct CopulaModel {
    Family family;
    double theta;
};

// Validates the theta range for the family; throws DomainError otherwise.
CopulaModel make_model(Family family, double theta);
void validate_model(const CopulaModel& model);

struct UnitPair {
    double u;
    double v;
};

enum class TailFunctional {
    Lower,       // R_L: both coordinates below alpha
    Upper,       // R_U: both coordinates above 1 - alpha
    Conditional  // R_C: lower tail conditional on one coordinate
};

struct TailSpec {
    double alpha = 0.05;
    TailFunctional functional = TailFunctional::Lower;
};

// =======================================================================
// Generator and its derivatives
// =======================================================================

/** phi(t) for t in (0,1]; phi(1) = 0. */
double generator_phi(const CopulaModel& model, double t);

/** phi'(t) for t strictly inside (0,1); always negative. */
double generator_dphi(const CopulaModel& model, double t);

/** phi''(t) for t strictly inside (0,1); always positive. */
double generator_d2phi(const CopulaModel& model, double t);

// =======================================================================
// Copula surface
// =======================================================================

/** C(u,v) for strictly interior (u,v). */
double copula_cdf(const CopulaModel& model, UnitPair p);

/** dC/dv (u,v), the conditional distribution of U given V = v. */
double copula_partial_v(const CopulaModel& model, UnitPair p);

/** dC/du (u,v); by exchangeability equals copula_partial_v with u,v swapped. */
double copula_partial_u(const CopulaModel& model, UnitPair p);

/** Copula density c(u,v); exp of log_copula_density. */
double copula_density(const CopulaModel& model, UnitPair p);

/**
 * log c(u,v), finite for interior points at any admissible theta.
 * Clayton uses the closed-form density, Gumbel assembles the generic
 * Archimedean expression from the generator derivatives in log space.
 */
double log_copula_density(const CopulaModel& model, UnitPair p);

/**
 * Log-space generic Archimedean assembly
 *   log c = log phi''(C) + log|phi'(u)| + log|phi'(v)| - 3 log|phi'(C)|,
 * valid for both families.  Kept as a separate code path so the closed
 * forms can be cross-checked against it.
 */
double log_copula_density_generic(const CopulaModel& model, UnitPair p);

// =======================================================================
// Tail-risk functionals
// =======================================================================

/** R_L, R_U or R_C at the given alpha in (0,1). */
double tail_risk(const CopulaModel& model, TailSpec spec);

/**
 * dR/dtheta by central finite differences with step
 * h = max(1e-5, 1e-5*theta); switches to a one-sided difference when
 * theta is within h of the family's lower theta bound.
 */
double tail_risk_derivative(const CopulaModel& model, TailSpec spec);

// =======================================================================
// Log-space kernels (shared with the likelihood hot path)
// =======================================================================

namespace detail {

// log(e^a + e^b - 1) for a,b >= 0, without forming e^a directly.
double log_sum_pow(double a, double b);

// (x^theta + y^theta)^{1/theta} for x,y > 0, stable for large theta.
double gumbel_radius(double theta, double x, double y);

// log c evaluated from x = -log u, y = -log v.  The likelihood code sums
// this directly so that it is bit-identical to log_copula_density.
double log_density_from_logs(Family family, double theta, double x, double y);

// log|phi'| and log phi'' as functions of x = -log t.
double log_abs_dphi(Family family, double theta, double x);
double log_d2phi(Family family, double theta, double x);

}  // namespace detail

}  // namespace tailrisk

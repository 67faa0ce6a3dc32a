#pragma once

#include <string>
#include <variant>

#include "kinex/fraction_law.hpp"
#include "kinex/rng.hpp"

namespace kinex {

/// Unit-mean steady states. All families have mean exactly 1.
struct ExponentialUnit {};

/// Gamma(shape a, scale 1/a): density a^a v^(a-1) e^(-a v) / Gamma(a).
struct GammaShape {
  double a;
};

/// Inverse-Gamma(shape a, scale a - 1), a > 1:
/// density (a-1)^a / Gamma(a) * e^(-(a-1)/v) / v^(a+1).
struct InverseGammaShape {
  double a;
};

/// Point mass at 1.
struct DiracUnit {};

/// Rescaled steady state of the Slanina rule, (1/2)^(3/2)/Gamma(3/2) e^(-1/(2v)) / v^(5/2).
/// Identical in law to InverseGammaShape{1.5}.
struct SlaninaRescaled {};

using EquilibriumFamily =
    std::variant<ExponentialUnit, GammaShape, InverseGammaShape, DiracUnit, SlaninaRescaled>;

void validate(const EquilibriumFamily& fam);
std::string to_string(const EquilibriumFamily& fam);

/// Parses "exp", "gamma:A", "invgamma:A", "dirac", "slanina".
EquilibriumFamily parse_equilibrium_family(const std::string& text);

/// Steady state reached under the given fraction law (SlaninaPQ maps to the
/// rescaled Slanina state).
EquilibriumFamily equilibrium_for(const FractionLaw& law);

struct TransformValue {
  double xi;
  double value;
};

/// Density at v > 0. Throws std::domain_error for DiracUnit or v <= 0.
double equilibrium_pdf(const EquilibriumFamily& fam, double v);

/// Laplace transform at xi >= 0. InverseGammaShape is evaluated by adaptive
/// quadrature (relative error < 1e-8).
TransformValue equilibrium_laplace(const EquilibriumFamily& fam, double xi);

/// k-th raw moment; +infinity when it diverges.
double equilibrium_moment(const EquilibriumFamily& fam, int k);

double equilibrium_cdf(const EquilibriumFamily& fam, double v);

/// Inverse CDF by bisection, absolute accuracy 1e-10 in v (relative for
/// large quantiles). p must lie in (0, 1).
double equilibrium_quantile(const EquilibriumFamily& fam, double p);

/// One draw from the family.
double sample_equilibrium(const EquilibriumFamily& fam, SeededRng& rng);

}  // namespace kinex

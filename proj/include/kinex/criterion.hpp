#pragma once

#include "kinex/fraction_law.hpp"

namespace kinex {

// Key function G(s) = <eps1^s + eps2^s> - 1 and the sign of G'(1), which
// decides convergence to the steady state.

struct GEvaluation {
  double s;
  double value;  // may be +infinity
};

/// Closed form of G(s) for every law. Returns +infinity where the
/// expectation diverges (InverseBetaQuarter with s >= a + 1/2).
GEvaluation g_value(const FractionLaw& law, double s);

/// G(s) from the defining expectation by adaptive quadrature, with no use of
/// the Gamma-function closed forms. Used to cross-validate g_value.
double g_value_by_quadrature(const FractionLaw& law, double s);

/// G'(1). Beta-type laws: 2<eps ln eps> by quadrature. InverseBetaQuarter:
/// -(1/4) Gamma(2a) Gamma(a-1/2) / (Gamma(2a-1) Gamma(a+1/2)) * Q(a).
double g_prime_at_one(const FractionLaw& law);

/// Central difference (G(s+h) - G(s-h)) / (2h).
double g_prime_finite_difference(const FractionLaw& law, double s, double step = 1e-5);

/// Q(a) = 2 ln 2 + psi(a - 1/2) - psi(a), a >= 1. Q(1) = 0 and Q is
/// strictly increasing, so G'(1) < 0 for every InverseBetaQuarter law.
double q_value(double a);

}  // namespace kinex

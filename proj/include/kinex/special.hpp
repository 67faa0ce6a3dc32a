#pragma once

// Special functions used by the trade-fraction laws and the equilibrium
// families. Everything here is self-contained; no external special-function
// library is involved.

namespace kinex {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kLn2 = 0.69314718055994530941723212145817657;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Natural log of the Gamma function for x > 0 (Lanczos, g = 7).
/// Throws std::domain_error for x <= 0.
double log_gamma(double x);

/// Digamma psi(x) = Gamma'(x)/Gamma(x) for x > 0.
/// Shifts the argument to x >= 8 with psi(x) = psi(x+1) - 1/x and then
/// sums a 7-term asymptotic series.
double digamma(double x);

/// Log of the Beta function B(a, b).
double log_beta(double a, double b);

/// Beta(a, b) density. Zero outside (0, 1). At x = 0 (resp. 1) returns the
/// finite limit, or throws std::domain_error when the density has a pole
/// there (a < 1, resp. b < 1).
double beta_pdf(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

}  // namespace kinex

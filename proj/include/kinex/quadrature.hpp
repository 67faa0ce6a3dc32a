#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kinex::quad {

using Integrand = std::function<double(double)>;

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n). Cached
/// per n; the returned reference stays valid for the program lifetime.
const Rule& gauss_legendre_rule(std::size_t n);

double gauss_legendre(const Integrand& f, double lo, double hi, std::size_t n);

/// Adaptive Gauss-Kronrod (7/15) on a finite interval. Bisects the piece with
/// the largest error estimate until the summed estimate is below
/// max(abs_tol, rel_tol * |I|), a piece reaches max_depth, or 4000 pieces exist.
double adaptive(const Integrand& f, double lo, double hi, double abs_tol = 1e-13,
                double rel_tol = 1e-12, int max_depth = 50);

/// Adaptive integral over [lo, +inf) through v = lo + t / (1 - t).
double adaptive_to_infinity(const Integrand& f, double lo, double abs_tol = 1e-13,
                            double rel_tol = 1e-12);

/// E[g(X)] for X ~ Beta(a, b) by fixed Gauss-Legendre rules on (0, 1/2) and
/// (1/2, 1). On a half whose weight exponent is negative the substitution
/// x = c u^(1/a) (or its mirror) absorbs the endpoint singularity.
double beta_expectation(double a, double b, const Integrand& g, std::size_t nodes_per_half = 128);

}  // namespace kinex::quad

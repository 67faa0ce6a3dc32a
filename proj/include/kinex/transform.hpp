#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "kinex/equilibria.hpp"
#include "kinex/fraction_law.hpp"
#include "kinex/rng.hpp"

namespace kinex {

/// Sampled Laplace transform on nodes 0 = xi_0 < xi_1 < ... < xi_{n-1}.
///
/// Between positive nodes the transform is interpolated by a monotone cubic
/// Hermite spline in log(xi); slopes come from 5-point Lagrange differences
/// and are limited (Fritsch-Carlson) only where monotonicity would break. On
/// [0, xi_1] it is the quadratic through the first three nodes. Beyond the
/// last node a continuation is used: either an analytic function attached at
/// construction, or a power law fitted to the last decade of nodes.
class TransformGrid {
 public:
  using Continuation = std::function<double(double)>;

  /// Throws std::invalid_argument unless: n >= 16, xi strictly increasing
  /// from 0, values[0] = 1, values within [0, 1] and nonincreasing.
  TransformGrid(std::vector<double> xi, std::vector<double> values, Continuation tail = {});

  std::span<const double> xi() const noexcept { return xi_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return xi_.size(); }
  bool has_analytic_tail() const noexcept { return analytic_tail_; }

  double operator()(double xi) const;

  /// One-sided slope (values[1] - 1) / xi_1; close to -1 for a unit-mean law.
  double derivative_at_zero() const;

 private:
  double interpolate(double xi) const;

  std::vector<double> xi_;
  std::vector<double> values_;
  std::vector<double> log_xi_;
  std::vector<double> slopes_;  // d value / d log(xi) at positive nodes
  Continuation tail_;
  bool analytic_tail_ = false;
};

/// 0 followed by count - 1 geometrically spaced nodes on
/// [xi_max * min_ratio, xi_max].
std::vector<double> geometric_nodes(double xi_max, std::size_t count, double min_ratio = 1e-6);

/// Grid sampled from the family's closed-form transform, carrying that
/// transform as its continuation.
TransformGrid grid_from_family(const EquilibriumFamily& fam, double xi_max, std::size_t count);

/// Right-hand side of the stationary equation at xi:
///   symmetric laws: <f(xi eps)^2>,  InverseBetaQuarter: <f(xi / (4 theta))^2>.
/// Laws with a density use `beta_expectation` (Gauss-Legendre, 128 nodes per half).
/// SlaninaPQ is rejected with std::invalid_argument.
double stationary_rhs(const TransformGrid& grid, const FractionLaw& law, double xi);

/// max over nodes of |stationary_rhs - grid value|.
double stationary_residual(const TransformGrid& grid, const FractionLaw& law);

struct PicardResult {
  TransformGrid grid;
  int iterations = 0;
  double last_change = 0.0;
  bool converged = false;
  /// max over iterates of |derivative_at_zero + 1|
  double max_slope_deviation = 0.0;
};

/// Iterates f <- stationary map, starting from exp(-xi) (all agents at 1),
/// until the sup-norm change between iterates drops below tol or max_iters
/// is reached. Non-convergence is reported through `converged`.
PicardResult picard_solve(const FractionLaw& law, double xi_max, std::size_t nodes, int max_iters,
                          double tol);

/// LHS - RHS of xi (p + q - 1) g'(xi) = g(p xi) g(q xi) - g(xi) for the
/// closed form g(xi) = (1 + sqrt(2 xi)) e^(-sqrt(2 xi)). Throws
/// std::domain_error unless xi > 0 and sqrt(p) + sqrt(q) = 1.
double slanina_ode_residual(double xi, double p, double q);

struct AllEqualOne {};
using TreeBase = std::variant<AllEqualOne, EquilibriumFamily>;

/// Z = eps (Z1 + Z2) expanded exactly to `depth` levels (2^depth leaves),
/// with a fresh fraction at every node (eps1 of a new pair) and leaves drawn
/// from `base`.
double tree_sample(const FractionLaw& law, int depth, const TreeBase& base, SeededRng& rng);

/// `count` draws at depth `depth` by population dynamics: level d + 1 is
/// built from random distinct pairs of level d. Cost is depth * count, but
/// the returned draws are not independent of each other.
std::vector<double> tree_sample_pool(const FractionLaw& law, int depth, const TreeBase& base,
                                     std::size_t count, SeededRng& rng);

void write_grid_csv(std::ostream& out, const TransformGrid& grid);

}  // namespace kinex

#include "kinex/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "kinex/quadrature.hpp"

namespace kinex {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::size_t kMinGridSize = 16;
constexpr double kGridTolerance = 1e-12;
constexpr std::size_t kQuadratureNodes = 128;

// Derivative at x[center] of the Lagrange polynomial through (x[k], y[k]),
// k in [first, first + count).
double lagrange_derivative(std::span<const double> x, std::span<const double> y,
                           std::size_t first, std::size_t count, std::size_t center) {
  const double xc = x[center];
  double result = 0.0;
  for (std::size_t j = first; j < first + count; ++j) {
    double coeff;
    if (j == center) {
      coeff = 0.0;
      for (std::size_t k = first; k < first + count; ++k) {
        if (k != center) coeff += 1.0 / (xc - x[k]);
      }
    } else {
      coeff = 1.0 / (x[j] - xc);
      for (std::size_t k = first; k < first + count; ++k) {
        if (k != center && k != j) coeff *= (xc - x[k]) / (x[j] - x[k]);
      }
    }
    result += coeff * y[j];
  }
  return result;
}

// Power law through the last node, exponent fitted on the last decade.
TransformGrid::Continuation fit_power_tail(std::span<const double> xi,
                                           std::span<const double> values) {
  const std::size_t last = xi.size() - 1;
  const double x_end = xi[last];
  const double f_end = values[last];
  if (!(f_end > 0.0)) return [](double) { return 0.0; };
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t k = last + 1; k-- > 1;) {
    if (xi[k] < 0.1 * x_end || !(values[k] > 0.0)) break;
    const double lx = std::log(xi[k]);
    const double ly = std::log(values[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  double exponent = 0.0;
  if (n >= 2) {
    const double denom = n * sxx - sx * sx;
    if (denom > 0.0) exponent = -(n * sxy - sx * sy) / denom;
  }
  exponent = std::max(exponent, 0.0);
  return [=](double xi_value) { return f_end * std::pow(xi_value / x_end, -exponent); };
}

double squared(double x) { return x * x; }

}  // namespace

TransformGrid::TransformGrid(std::vector<double> xi, std::vector<double> values, Continuation tail)
    : xi_(std::move(xi)), values_(std::move(values)) {
  const std::size_t n = xi_.size();
  if (n < kMinGridSize) {
    throw std::invalid_argument("TransformGrid: need at least 16 nodes");
  }
  if (values_.size() != n) throw std::invalid_argument("TransformGrid: size mismatch");
  if (xi_[0] != 0.0) throw std::invalid_argument("TransformGrid: first node must be 0");
  if (std::fabs(values_[0] - 1.0) > kGridTolerance) {
    throw std::invalid_argument("TransformGrid: value at 0 must be 1");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && !(xi_[k] > xi_[k - 1])) {
      throw std::invalid_argument("TransformGrid: nodes must be strictly increasing");
    }
    if (!(values_[k] >= -kGridTolerance && values_[k] <= 1.0 + kGridTolerance)) {
      throw std::invalid_argument("TransformGrid: values must lie in [0, 1]");
    }
    if (k > 0 && values_[k] > values_[k - 1] + kGridTolerance) {
      throw std::invalid_argument("TransformGrid: values must be nonincreasing");
    }
  }
  values_[0] = 1.0;

  // Positive nodes in log(xi); slopes are d value / d log(xi).
  log_xi_.resize(n);
  log_xi_[0] = -HUGE_VAL;
  for (std::size_t k = 1; k < n; ++k) log_xi_[k] = std::log(xi_[k]);
  const std::span<const double> lx(log_xi_.data() + 1, n - 1);
  const std::span<const double> fv(values_.data() + 1, n - 1);
  const std::size_t m = n - 1;
  std::vector<double> slopes(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t first = std::min(k >= 2 ? k - 2 : 0, m - 5);
    slopes[k] = lagrange_derivative(lx, fv, first, 5, k);
  }
  // Fritsch-Carlson limiting, only where the unlimited cubic would break
  // monotonicity.
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double delta = (fv[k + 1] - fv[k]) / (lx[k + 1] - lx[k]);
    if (delta == 0.0) {
      slopes[k] = 0.0;
      slopes[k + 1] = 0.0;
      continue;
    }
    if (slopes[k] * delta < 0.0) slopes[k] = 0.0;
    if (slopes[k + 1] * delta < 0.0) slopes[k + 1] = 0.0;
    const double alpha = slopes[k] / delta;
    const double beta = slopes[k + 1] / delta;
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slopes[k] = tau * alpha * delta;
      slopes[k + 1] = tau * beta * delta;
    }
  }
  slopes_.assign(n, 0.0);
  std::copy(slopes.begin(), slopes.end(), slopes_.begin() + 1);

  if (tail) {
    tail_ = std::move(tail);
    analytic_tail_ = true;
  } else {
    tail_ = fit_power_tail(xi_, values_);
  }
}

double TransformGrid::operator()(double xi) const {
  if (!(xi >= 0.0)) throw std::domain_error("TransformGrid: xi must be >= 0");
  if (xi > xi_.back()) return tail_(xi);
  return interpolate(xi);
}

double TransformGrid::interpolate(double xi) const {
  if (xi <= xi_[1]) {
    // Quadratic through the nodes at 0, xi_1 and xi_2.
    const double x1 = xi_[1];
    const double x2 = xi_[2];
    const double d1 = (values_[1] - values_[0]) / x1;
    const double d2 = (values_[2] - values_[0]) / x2;
    const double curvature = (d2 - d1) / (x2 - x1);
    return values_[0] + xi * (d1 + curvature * (xi - x1));
  }
  const auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  std::size_t k = static_cast<std::size_t>(it - xi_.begin()) - 1;
  if (k + 1 >= xi_.size()) return values_.back();
  const double t = std::log(xi);
  const double h = log_xi_[k + 1] - log_xi_[k];
  const double s = (t - log_xi_[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * values_[k] + h10 * h * slopes_[k] + h01 * values_[k + 1] + h11 * h * slopes_[k + 1];
}

double TransformGrid::derivative_at_zero() const { return (values_[1] - values_[0]) / xi_[1]; }

std::vector<double> geometric_nodes(double xi_max, std::size_t count, double min_ratio) {
  if (!(xi_max > 0.0) || count < kMinGridSize || !(min_ratio > 0.0 && min_ratio < 1.0)) {
    throw std::invalid_argument("geometric_nodes: need xi_max > 0, count >= 16, 0 < ratio < 1");
  }
  std::vector<double> nodes(count);
  nodes[0] = 0.0;
  const double log_lo = std::log(xi_max * min_ratio);
  const double log_hi = std::log(xi_max);
  const double step = (log_hi - log_lo) / static_cast<double>(count - 2);
  for (std::size_t k = 1; k < count; ++k) {
    nodes[k] = std::exp(log_lo + step * static_cast<double>(k - 1));
  }
  nodes.back() = xi_max;
  return nodes;
}

TransformGrid grid_from_family(const EquilibriumFamily& fam, double xi_max, std::size_t count) {
  validate(fam);
  std::vector<double> xi = geometric_nodes(xi_max, count);
  std::vector<double> values(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) values[k] = equilibrium_laplace(fam, xi[k]).value;
  return TransformGrid(std::move(xi), std::move(values),
                       [fam](double x) { return equilibrium_laplace(fam, x).value; });
}

double stationary_rhs(const TransformGrid& grid, const FractionLaw& law, double xi) {
  if (xi == 0.0) return 1.0;
  return std::visit(
      overloaded{
          [&](const Uniform01&) {
            return quad::beta_expectation(
                1.0, 1.0, [&](double x) { return squared(grid(xi * x)); }, kQuadratureNodes);
          },
          [&](const SymmetricBeta& l) {
            return quad::beta_expectation(
                l.a, l.a, [&](double x) { return squared(grid(xi * x)); }, kQuadratureNodes);
          },
          [&](const InverseBetaQuarter& l) {
            return quad::beta_expectation(
                l.a + 0.5, l.a - 0.5, [&](double x) { return squared(grid(xi / (4.0 * x))); },
                kQuadratureNodes);
          },
          [&](const DiracHalf&) { return squared(grid(0.5 * xi)); },
          [](const SlaninaPQ&) -> double {
            throw std::invalid_argument(
                "stationary map: the Slanina rule has no mean-conservative stationary equation");
          },
      },
      law);
}

double stationary_residual(const TransformGrid& grid, const FractionLaw& law) {
  validate(law);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double xi = grid.xi()[k];
    worst = std::max(worst, std::fabs(stationary_rhs(grid, law, xi) - grid.values()[k]));
  }
  return worst;
}

PicardResult picard_solve(const FractionLaw& law, double xi_max, std::size_t nodes, int max_iters,
                          double tol) {
  validate(law);
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("picard_solve: max_iters must be >= 1");
  std::vector<double> xi = geometric_nodes(xi_max, nodes);
  std::vector<double> values(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) values[k] = std::exp(-xi[k]);
  TransformGrid grid(xi, values);

  PicardResult result{grid, 0, 0.0, false, std::fabs(grid.derivative_at_zero() + 1.0)};
  for (int iter = 1; iter <= max_iters; ++iter) {
    std::vector<double> next(xi.size());
    double change = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      next[k] = std::clamp(stationary_rhs(result.grid, law, xi[k]), 0.0, 1.0);
      change = std::max(change, std::fabs(next[k] - result.grid.values()[k]));
    }
    // Roundoff can leave flat stretches a few ulps out of order.
    for (std::size_t k = 1; k < next.size(); ++k) next[k] = std::min(next[k], next[k - 1]);
    result.grid = TransformGrid(xi, std::move(next));
    result.iterations = iter;
    result.last_change = change;
    result.max_slope_deviation =
        std::max(result.max_slope_deviation, std::fabs(result.grid.derivative_at_zero() + 1.0));
    if (change < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

namespace {

double draw_base(const TreeBase& base, SeededRng& rng) {
  return std::visit(overloaded{
                        [](const AllEqualOne&) { return 1.0; },
                        [&](const EquilibriumFamily& fam) { return sample_equilibrium(fam, rng); },
                    },
                    base);
}

double node_fraction(const FractionLaw& law, SeededRng& rng) {
  return sample_fraction_pair(law, rng).first;
}

void check_tree_law(const FractionLaw& law, int depth) {
  validate(law);
  if (std::holds_alternative<SlaninaPQ>(law)) {
    throw std::invalid_argument("tree sampling needs a mean-conservative law");
  }
  if (depth < 0) throw std::invalid_argument("tree sampling: depth must be >= 0");
}

double tree_recurse(const FractionLaw& law, int depth, const TreeBase& base, SeededRng& rng) {
  if (depth == 0) return draw_base(base, rng);
  const double eps = node_fraction(law, rng);
  const double left = tree_recurse(law, depth - 1, base, rng);
  const double right = tree_recurse(law, depth - 1, base, rng);
  return eps * (left + right);
}

}  // namespace

double tree_sample(const FractionLaw& law, int depth, const TreeBase& base, SeededRng& rng) {
  check_tree_law(law, depth);
  return tree_recurse(law, depth, base, rng);
}

std::vector<double> tree_sample_pool(const FractionLaw& law, int depth, const TreeBase& base,
                                     std::size_t count, SeededRng& rng) {
  check_tree_law(law, depth);
  if (count < 2) throw std::invalid_argument("tree_sample_pool: need at least 2 draws");
  std::vector<double> level(count);
  for (double& z : level) z = draw_base(base, rng);
  std::vector<double> next(count);
  for (int d = 0; d < depth; ++d) {
    for (double& z : next) {
      const auto i = rng.uniform_index(count);
      auto j = rng.uniform_index(count);
      while (j == i) j = rng.uniform_index(count);
      z = node_fraction(law, rng) * (level[i] + level[j]);
    }
    level.swap(next);
  }
  return level;
}

double slanina_ode_residual(double xi, double p, double q) {
  validate(FractionLaw{SlaninaPQ{p, q}});
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw std::domain_error("slanina_ode_residual: xi must be positive");
  }
  auto g = [](double x) {
    const double u = std::sqrt(2.0 * x);
    return (1.0 + u) * std::exp(-u);
  };
  const double slope = -std::exp(-std::sqrt(2.0 * xi));
  const double lhs = xi * (p + q - 1.0) * slope;
  const double rhs = g(p * xi) * g(q * xi) - g(xi);
  return lhs - rhs;
}

void write_grid_csv(std::ostream& out, const TransformGrid& grid) {
  out << "xi,value\n";
  char buf[64];
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid.xi()[k], grid.values()[k]);
    out << buf;
  }
}

}  // namespace kinex

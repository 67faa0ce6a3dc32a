#include "kinex/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <vector>

#include "kinex/special.hpp"

namespace kinex::quad {
namespace {

Rule build_gauss_legendre(std::size_t n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
  double value;
  double error;
};

Estimate gauss_kronrod_15(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  return {kronrod * half, std::fabs((kronrod - gauss) * half)};
}


}  // namespace

const Rule& gauss_legendre_rule(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre_rule: n must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

double gauss_legendre(const Integrand& f, double lo, double hi, std::size_t n) {
  const Rule& rule = gauss_legendre_rule(n);
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += rule.weights[i] * f(center + half * rule.nodes[i]);
  return sum * half;
}

double adaptive(const Integrand& f, double lo, double hi, double abs_tol, double rel_tol,
                int max_depth) {
  struct Piece {
    double lo, hi;
    Estimate est;
    int depth;
    bool operator<(const Piece& o) const { return est.error < o.est.error; }
  };
  constexpr std::size_t kMaxPieces = 4000;
  std::priority_queue<Piece> heap;
  std::vector<Piece> done;
  heap.push({lo, hi, gauss_kronrod_15(f, lo, hi), 0});
  double value = heap.top().est.value;
  double error = heap.top().est.error;
  while (!heap.empty() && heap.size() + done.size() < kMaxPieces) {
    if (error <= std::max(abs_tol, rel_tol * std::fabs(value))) break;
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (worst.depth >= max_depth || mid <= worst.lo || mid >= worst.hi) {
      done.push_back(worst);
      continue;
    }
    const Piece left{worst.lo, mid, gauss_kronrod_15(f, worst.lo, mid), worst.depth + 1};
    const Piece right{mid, worst.hi, gauss_kronrod_15(f, mid, worst.hi), worst.depth + 1};
    value += left.est.value + right.est.value - worst.est.value;
    error += left.est.error + right.est.error - worst.est.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to drop the rounding picked up by the running updates.
  double total = 0.0;
  for (const auto& p : done) total += p.est.value;
  while (!heap.empty()) {
    total += heap.top().est.value;
    heap.pop();
  }
  return total;
}

double adaptive_to_infinity(const Integrand& f, double lo, double abs_tol, double rel_tol) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double v = lo + t / one_minus;
    const double value = f(v);
    return value == 0.0 ? 0.0 : value / (one_minus * one_minus);
  };
  // Split so that the bulk near v = lo and the tail are refined separately.
  const double pieces[] = {0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < std::size(pieces); ++i) {
    total += adaptive(mapped, pieces[i], pieces[i + 1], abs_tol, rel_tol);
  }
  return total;
}

double beta_expectation(double a, double b, const Integrand& g, std::size_t nodes_per_half) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_expectation: a, b must be > 0");
  const double log_norm = -log_beta(a, b);
  const Rule& rule = gauss_legendre_rule(nodes_per_half);
  constexpr double c = 0.5;
  double total = 0.0;

  // Left half (0, 1/2): weight x^(a-1) (1-x)^(b-1).
  if (a < 1.0) {
    // x = c u^(1/a), u in (0, 1): x^(a-1) dx = (c^a / a) du.
    const double scale = std::exp(log_norm + a * std::log(c)) / a;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = 0.5 * (rule.nodes[i] + 1.0);
      const double x = c * std::pow(u, 1.0 / a);
      total += 0.5 * rule.weights[i] * scale * std::exp((b - 1.0) * std::log1p(-x)) * g(x);
    }
  } else {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = 0.25 * (rule.nodes[i] + 1.0);
      const double w = std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
      total += 0.25 * rule.weights[i] * w * g(x);
    }
  }

  // Right half (1/2, 1), mirrored: y = 1 - x in (0, 1/2).
  if (b < 1.0) {
    const double scale = std::exp(log_norm + b * std::log(c)) / b;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = 0.5 * (rule.nodes[i] + 1.0);
      const double y = c * std::pow(u, 1.0 / b);
      total += 0.5 * rule.weights[i] * scale * std::exp((a - 1.0) * std::log1p(-y)) * g(1.0 - y);
    }
  } else {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double y = 0.25 * (rule.nodes[i] + 1.0);
      const double w = std::exp(log_norm + (b - 1.0) * std::log(y) + (a - 1.0) * std::log1p(-y));
      total += 0.25 * rule.weights[i] * w * g(1.0 - y);
    }
  }
  return total;
}

}  // namespace kinex::quad

#include "kinex/criterion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kinex/quadrature.hpp"
#include "kinex/special.hpp"

namespace kinex {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_0^1 x^(p-1) (1-x)^(q-1) g(x) dx by adaptive quadrature. Each half is
// mapped so that its endpoint power becomes constant: x = (1/2) u^(1/p) on the
// left, 1 - x = (1/2) u^(1/q) on the right.
template <class G>
double beta_weighted_numeric(double p, double q, G g) {
  auto left = [=](double u) {
    const double x = 0.5 * std::pow(u, 1.0 / p);
    return std::pow(1.0 - x, q - 1.0) * g(x);
  };
  auto right = [=](double u) {
    const double y = 0.5 * std::pow(u, 1.0 / q);
    return std::pow(1.0 - y, p - 1.0) * g(1.0 - y);
  };
  const double l = std::pow(0.5, p) / p * quad::adaptive(left, 0.0, 1.0, 1e-15, 1e-14);
  const double r = std::pow(0.5, q) / q * quad::adaptive(right, 0.0, 1.0, 1e-15, 1e-14);
  return l + r;
}

double beta_integral_numeric(double p, double q) {
  return beta_weighted_numeric(p, q, [](double) { return 1.0; });
}

// 2 <eps ln eps> for eps ~ Beta(a, a).
double two_eps_log_eps(double a) {
  auto x_log_x = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  return 2.0 * beta_weighted_numeric(a, a, x_log_x) / beta_integral_numeric(a, a);
}

}  // namespace

GEvaluation g_value(const FractionLaw& law, double s) {
  validate(law);
  if (!(s >= 0.0)) throw std::domain_error("g_value: s must be >= 0");
  if (s == 0.0 && !std::holds_alternative<SlaninaPQ>(law)) return {s, 1.0};
  const double value = std::visit(
      overloaded{
          [&](const Uniform01&) { return 2.0 / (1.0 + s) - 1.0; },
          [&](const SymmetricBeta& l) {
            return 2.0 * std::exp(log_beta(l.a + s, l.a) - log_beta(l.a, l.a)) - 1.0;
          },
          [&](const InverseBetaQuarter& l) {
            const double a = l.a;
            if (s >= a + 0.5) return kInf;
            return std::exp((1.0 - 2.0 * s) * kLn2 + log_gamma(2.0 * a) + log_gamma(a - s + 0.5) -
                            log_gamma(2.0 * a - s) - log_gamma(a + 0.5)) -
                   1.0;
          },
          [&](const DiracHalf&) { return 2.0 * std::pow(0.5, s) - 1.0; },
          [&](const SlaninaPQ& l) { return std::pow(l.p, s) + std::pow(l.q, s) - 1.0; },
      },
      law);
  return {s, value};
}

double g_value_by_quadrature(const FractionLaw& law, double s) {
  validate(law);
  if (!(s >= 0.0)) throw std::domain_error("g_value_by_quadrature: s must be >= 0");
  return std::visit(
      overloaded{
          [&](const Uniform01&) {
            return 2.0 * quad::adaptive([s](double x) { return std::pow(x, s); }, 0.0, 1.0,
                                        1e-15, 1e-14) -
                   1.0;
          },
          [&](const SymmetricBeta& l) {
            return 2.0 * beta_integral_numeric(l.a + s, l.a) / beta_integral_numeric(l.a, l.a) -
                   1.0;
          },
          [&](const InverseBetaQuarter& l) {
            const double p = l.a + 0.5;
            const double q = l.a - 0.5;
            if (p - s <= 0.0) return kInf;
            return 2.0 * std::pow(4.0, -s) * beta_integral_numeric(p - s, q) /
                       beta_integral_numeric(p, q) -
                   1.0;
          },
          [&](const DiracHalf&) { return 2.0 * std::pow(0.5, s) - 1.0; },
          [&](const SlaninaPQ& l) { return std::pow(l.p, s) + std::pow(l.q, s) - 1.0; },
      },
      law);
}

double g_prime_at_one(const FractionLaw& law) {
  validate(law);
  return std::visit(
      overloaded{
          [](const Uniform01&) { return two_eps_log_eps(1.0); },
          [](const SymmetricBeta& l) { return two_eps_log_eps(l.a); },
          [](const InverseBetaQuarter& l) {
            const double a = l.a;
            const double ratio = std::exp(log_gamma(2.0 * a) + log_gamma(a - 0.5) -
                                          log_gamma(2.0 * a - 1.0) - log_gamma(a + 0.5));
            return -0.25 * ratio * q_value(a);
          },
          [](const DiracHalf&) { return -kLn2; },
          [](const SlaninaPQ& l) { return l.p * std::log(l.p) + l.q * std::log(l.q); },
      },
      law);
}

double g_prime_finite_difference(const FractionLaw& law, double s, double step) {
  return (g_value(law, s + step).value - g_value(law, s - step).value) / (2.0 * step);
}

double q_value(double a) {
  if (!(a >= 1.0) || !std::isfinite(a)) throw std::domain_error("q_value: need a >= 1");
  return 2.0 * kLn2 + digamma(a - 0.5) - digamma(a);
}

}  // namespace kinex

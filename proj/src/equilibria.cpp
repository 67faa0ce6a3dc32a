#include "kinex/equilibria.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
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

double inverse_gamma_pdf(double a, double v) {
  const double scale = a - 1.0;
  return std::exp(a * std::log(scale) - log_gamma(a) - scale / v - (a + 1.0) * std::log(v));
}

double inverse_gamma_laplace(double a, double xi) {
  if (xi == 0.0) return 1.0;
  // E[exp(-xi (a-1) / Y)] with Y ~ Gamma(a, 1).
  const double log_norm = -log_gamma(a);
  const double c = xi * (a - 1.0);
  auto integrand = [=](double y) {
    if (y <= 0.0) return 0.0;
    return std::exp(log_norm + (a - 1.0) * std::log(y) - y - c / y);
  };
  return quad::adaptive_to_infinity(integrand, 0.0, 1e-15, 1e-11);
}

}  // namespace

void validate(const EquilibriumFamily& fam) {
  if (const auto* g = std::get_if<GammaShape>(&fam); g && !(g->a > 0.0 && std::isfinite(g->a))) {
    throw std::domain_error("GammaShape requires a > 0");
  }
  if (const auto* g = std::get_if<InverseGammaShape>(&fam);
      g && !(g->a > 1.0 && std::isfinite(g->a))) {
    throw std::domain_error("InverseGammaShape requires a > 1");
  }
}

std::string to_string(const EquilibriumFamily& fam) {
  auto num = [](double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
  };
  return std::visit(overloaded{
                        [](const ExponentialUnit&) { return std::string("exp"); },
                        [&](const GammaShape& g) { return "gamma:" + num(g.a); },
                        [&](const InverseGammaShape& g) { return "invgamma:" + num(g.a); },
                        [](const DiracUnit&) { return std::string("dirac"); },
                        [](const SlaninaRescaled&) { return std::string("slanina"); },
                    },
                    fam);
}

EquilibriumFamily parse_equilibrium_family(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  auto param = [&]() {
    if (colon == std::string::npos) {
      throw std::invalid_argument("family '" + name + "' needs a shape parameter");
    }
    const std::string arg = text.substr(colon + 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
    if (ec != std::errc{} || ptr != arg.data() + arg.size()) {
      throw std::invalid_argument("invalid number in family '" + text + "'");
    }
    return value;
  };
  EquilibriumFamily fam;
  if (name == "exp") {
    fam = ExponentialUnit{};
  } else if (name == "gamma") {
    fam = GammaShape{param()};
  } else if (name == "invgamma") {
    fam = InverseGammaShape{param()};
  } else if (name == "dirac") {
    fam = DiracUnit{};
  } else if (name == "slanina") {
    fam = SlaninaRescaled{};
  } else {
    throw std::invalid_argument("unknown equilibrium family '" + text + "'");
  }
  validate(fam);
  return fam;
}

EquilibriumFamily equilibrium_for(const FractionLaw& law) {
  return std::visit(overloaded{
                        [](const Uniform01&) -> EquilibriumFamily { return ExponentialUnit{}; },
                        [](const SymmetricBeta& l) -> EquilibriumFamily { return GammaShape{l.a}; },
                        [](const InverseBetaQuarter& l) -> EquilibriumFamily {
                          return InverseGammaShape{l.a};
                        },
                        [](const DiracHalf&) -> EquilibriumFamily { return DiracUnit{}; },
                        [](const SlaninaPQ&) -> EquilibriumFamily { return SlaninaRescaled{}; },
                    },
                    law);
}

double equilibrium_pdf(const EquilibriumFamily& fam, double v) {
  if (std::holds_alternative<DiracUnit>(fam)) {
    throw std::domain_error("equilibrium_pdf: the Dirac family has no density");
  }
  if (!(v > 0.0)) throw std::domain_error("equilibrium_pdf: v must be positive");
  return std::visit(
      overloaded{
          [&](const ExponentialUnit&) { return std::exp(-v); },
          [&](const GammaShape& g) {
            return std::exp(g.a * std::log(g.a) + (g.a - 1.0) * std::log(v) - g.a * v -
                            log_gamma(g.a));
          },
          [&](const InverseGammaShape& g) { return inverse_gamma_pdf(g.a, v); },
          [](const DiracUnit&) { return 0.0; },
          [&](const SlaninaRescaled&) {
            // Gamma(3/2) = sqrt(pi) / 2
            const double norm = std::pow(0.5, 1.5) / (0.5 * std::sqrt(kPi));
            return norm * std::exp(-0.5 / v) / std::pow(v, 2.5);
          },
      },
      fam);
}

TransformValue equilibrium_laplace(const EquilibriumFamily& fam, double xi) {
  if (!(xi >= 0.0)) throw std::domain_error("equilibrium_laplace: xi must be >= 0");
  const double value = std::visit(
      overloaded{
          [&](const ExponentialUnit&) { return 1.0 / (1.0 + xi); },
          [&](const GammaShape& g) { return std::pow(1.0 + xi / g.a, -g.a); },
          [&](const InverseGammaShape& g) { return inverse_gamma_laplace(g.a, xi); },
          [&](const DiracUnit&) { return std::exp(-xi); },
          [&](const SlaninaRescaled&) {
            const double u = std::sqrt(2.0 * xi);
            return (1.0 + u) * std::exp(-u);
          },
      },
      fam);
  return {xi, value};
}

double equilibrium_moment(const EquilibriumFamily& fam, int k) {
  if (k < 1) throw std::domain_error("equilibrium_moment: order must be >= 1");
  auto inverse_gamma_moment = [k](double a) {
    if (static_cast<double>(k) >= a) return kInf;
    return std::exp(k * std::log(a - 1.0) + log_gamma(a - k) - log_gamma(a));
  };
  return std::visit(overloaded{
                        [&](const ExponentialUnit&) { return std::exp(log_gamma(k + 1.0)); },
                        [&](const GammaShape& g) {
                          // prod_{j<k} (a + j) / a
                          double m = 1.0;
                          for (int j = 0; j < k; ++j) m *= (g.a + j) / g.a;
                          return m;
                        },
                        [&](const InverseGammaShape& g) { return inverse_gamma_moment(g.a); },
                        [](const DiracUnit&) { return 1.0; },
                        [&](const SlaninaRescaled&) { return inverse_gamma_moment(1.5); },
                    },
                    fam);
}

double equilibrium_cdf(const EquilibriumFamily& fam, double v) {
  if (std::isnan(v)) throw std::domain_error("equilibrium_cdf: NaN argument");
  if (v <= 0.0) return 0.0;
  if (v == kInf) return 1.0;
  return std::visit(overloaded{
                        [&](const ExponentialUnit&) { return -std::expm1(-v); },
                        [&](const GammaShape& g) { return gamma_p(g.a, g.a * v); },
                        [&](const InverseGammaShape& g) { return gamma_q(g.a, (g.a - 1.0) / v); },
                        [&](const DiracUnit&) { return v >= 1.0 ? 1.0 : 0.0; },
                        [&](const SlaninaRescaled&) { return gamma_q(1.5, 0.5 / v); },
                    },
                    fam);
}

double equilibrium_quantile(const EquilibriumFamily& fam, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("equilibrium_quantile: p must be in (0,1)");
  if (std::holds_alternative<DiracUnit>(fam)) return 1.0;
  if (std::holds_alternative<ExponentialUnit>(fam)) return -std::log1p(-p);
  double lo = 0.0;
  double hi = 1.0;
  while (equilibrium_cdf(fam, hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return kInf;
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-10 * std::max(1.0, mid)) break;
    if (equilibrium_cdf(fam, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double sample_equilibrium(const EquilibriumFamily& fam, SeededRng& rng) {
  return std::visit(overloaded{
                        [&](const ExponentialUnit&) { return rng.exponential(); },
                        [&](const GammaShape& g) { return rng.gamma(g.a) / g.a; },
                        [&](const InverseGammaShape& g) { return (g.a - 1.0) / rng.gamma(g.a); },
                        [](const DiracUnit&) { return 1.0; },
                        [&](const SlaninaRescaled&) { return 0.5 / rng.gamma(1.5); },
                    },
                    fam);
}

}  // namespace kinex

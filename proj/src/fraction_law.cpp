#include "kinex/fraction_law.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kinex {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double parse_number(const std::string& text, const std::string& context) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("invalid number '" + text + "' in law '" + context + "'");
  }
  return value;
}

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

void validate(const FractionLaw& law) {
  std::visit(overloaded{
                 [](const Uniform01&) {},
                 [](const DiracHalf&) {},
                 [](const SymmetricBeta& l) {
                   if (!(l.a > 0.0) || !std::isfinite(l.a)) {
                     throw std::domain_error("SymmetricBeta requires a > 0");
                   }
                 },
                 [](const InverseBetaQuarter& l) {
                   if (!(l.a > 1.0) || !std::isfinite(l.a)) {
                     throw std::domain_error("InverseBetaQuarter requires a > 1");
                   }
                 },
                 [](const SlaninaPQ& l) {
                   if (!(l.q > 0.0) || !(l.p >= l.q) || !(l.p <= 1.0)) {
                     throw std::domain_error("SlaninaPQ requires 1 >= p >= q > 0");
                   }
                   if (std::fabs(std::sqrt(l.p) + std::sqrt(l.q) - 1.0) > kSlaninaConstraintTol) {
                     throw std::domain_error("SlaninaPQ requires sqrt(p) + sqrt(q) = 1");
                   }
                 },
             },
             law);
}

bool is_conservative_in_mean(const FractionLaw& law) {
  return !std::holds_alternative<SlaninaPQ>(law);
}

bool is_pointwise_conservative(const FractionLaw& law) {
  return std::holds_alternative<Uniform01>(law) || std::holds_alternative<SymmetricBeta>(law) ||
         std::holds_alternative<DiracHalf>(law);
}

std::string to_string(const FractionLaw& law) {
  return std::visit(overloaded{
                        [](const Uniform01&) { return std::string("uniform"); },
                        [](const DiracHalf&) { return std::string("dirac-half"); },
                        [](const SymmetricBeta& l) { return "beta:" + format_number(l.a); },
                        [](const InverseBetaQuarter& l) { return "invbeta:" + format_number(l.a); },
                        [](const SlaninaPQ& l) {
                          return "slanina:" + format_number(l.p) + "," + format_number(l.q);
                        },
                    },
                    law);
}

FractionLaw parse_fraction_law(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  const bool has_args = colon != std::string::npos;

  FractionLaw law;
  if (name == "uniform" && !has_args) {
    law = Uniform01{};
  } else if (name == "dirac-half" && !has_args) {
    law = DiracHalf{};
  } else if (name == "beta" && has_args) {
    law = SymmetricBeta{parse_number(args, text)};
  } else if (name == "invbeta" && has_args) {
    law = InverseBetaQuarter{parse_number(args, text)};
  } else if (name == "slanina" && has_args) {
    const auto comma = args.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("slanina law needs two parameters: slanina:P,Q");
    }
    law = SlaninaPQ{parse_number(args.substr(0, comma), text),
                    parse_number(args.substr(comma + 1), text)};
  } else {
    throw std::invalid_argument("unknown fraction law '" + text + "'");
  }
  validate(law);
  return law;
}

FractionPair sample_fraction_pair(const FractionLaw& law, SeededRng& rng) {
  return std::visit(overloaded{
                        [&](const Uniform01&) {
                          const double e = rng.uniform();
                          return FractionPair{e, 1.0 - e};
                        },
                        [](const DiracHalf&) { return FractionPair{0.5, 0.5}; },
                        [&](const SymmetricBeta& l) {
                          const double e = rng.beta(l.a, l.a);
                          return FractionPair{e, 1.0 - e};
                        },
                        [&](const InverseBetaQuarter& l) {
                          const double t1 = rng.beta(l.a + 0.5, l.a - 0.5);
                          const double t2 = rng.beta(l.a + 0.5, l.a - 0.5);
                          return FractionPair{0.25 / t1, 0.25 / t2};
                        },
                        [](const SlaninaPQ& l) { return FractionPair{l.p, l.q}; },
                    },
                    law);
}

}  // namespace kinex

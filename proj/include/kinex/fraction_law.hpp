#pragma once

#include <string>
#include <utility>
#include <variant>

#include "kinex/rng.hpp"

namespace kinex {

/// epsilon uniform on (0, 1); pair (epsilon, 1 - epsilon).
struct Uniform01 {};

/// epsilon ~ Beta(a, a); pair (epsilon, 1 - epsilon).
struct SymmetricBeta {
  double a;
};

/// epsilon_i = 1 / (4 theta_i), theta_i ~ Beta(a + 1/2, a - 1/2) independent, a > 1.
struct InverseBetaQuarter {
  double a;
};

/// epsilon = 1/2 deterministically.
struct DiracHalf {};

/// Deterministic mixing weights v* = p v + q w, w* = q v + p w with
/// p >= q > 0 and sqrt(p) + sqrt(q) = 1. Not conservative.
struct SlaninaPQ {
  double p;
  double q;
};

using FractionLaw = std::variant<Uniform01, SymmetricBeta, InverseBetaQuarter, DiracHalf, SlaninaPQ>;

inline constexpr double kSlaninaConstraintTol = 1e-12;

/// Throws std::domain_error if the law's parameters violate its constraints.
void validate(const FractionLaw& law);

/// <eps1 + eps2> = 1 holds for every law except SlaninaPQ.
bool is_conservative_in_mean(const FractionLaw& law);

/// True for laws with eps2 = 1 - eps1 pointwise (Uniform01, SymmetricBeta, DiracHalf).
bool is_pointwise_conservative(const FractionLaw& law);

/// Short name in the command-line grammar, e.g. "beta:2", "invbeta:1.5".
std::string to_string(const FractionLaw& law);

/// Parses "uniform", "beta:A", "invbeta:A", "dirac-half", "slanina:P,Q".
/// Throws std::invalid_argument on unknown names, std::domain_error on
/// constraint violations.
FractionLaw parse_fraction_law(const std::string& text);

struct FractionPair {
  double first;
  double second;
};

/// One draw of (eps1, eps2). For SlaninaPQ returns (p, q).
FractionPair sample_fraction_pair(const FractionLaw& law, SeededRng& rng);

}  // namespace kinex

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinex/equilibria.hpp"

namespace kinex {

inline constexpr std::size_t kMinSamplesForDistance = 100;
inline constexpr std::size_t kMinSamplesForTail = 1000;

/// sup_v |F_n(v) - F(v)| against a reference family. Needs >= 100 samples.
double ks_distance(std::span<const double> samples, const EquilibriumFamily& fam);

/// Two-sample KS statistic sup |F_n - G_m|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Mean of |x_(i) - F^{-1}((i - 1/2) / n)| over the sorted sample.
double wasserstein1(std::span<const double> samples, const EquilibriumFamily& fam);

/// Sort-based Gini coefficient, sum_i (2i - n - 1) x_(i) / (n sum x).
double gini(std::span<const double> samples);

/// Hill estimate of the Pareto survival exponent from the top
/// ceil(top_fraction * n) order statistics, top_fraction in (0, 0.1].
double hill_tail_index(std::span<const double> samples, double top_fraction = 0.01);

struct MomentRow {
  int order;
  double empirical;
  double analytic;  // +infinity when the family's moment diverges
};

/// Raw empirical moments 1..max_order next to the family's moments. Rows
/// with an infinite analytic value are divergent moments; their empirical
/// value does not settle as the sample grows.
std::vector<MomentRow> moment_table(std::span<const double> samples, const EquilibriumFamily& fam,
                                    int max_order);

struct FitReport {
  double ks = 0.0;
  double wasserstein1 = 0.0;
  double gini = 0.0;
  std::optional<double> hill_index;
  std::vector<MomentRow> moments;
};

/// All diagnostics at once. The Hill index is left empty when the sample
/// has too few points or no tail spread.
FitReport fit_report(std::span<const double> samples, const EquilibriumFamily& fam,
                     int max_order = 3, double top_fraction = 0.01);

/// JSON object with keys ks, wasserstein1, gini, hill_index (null when
/// absent), moments: [{k, empirical, analytic}], analytic "inf" if divergent.
std::string to_json(const FitReport& report);

}  // namespace kinex

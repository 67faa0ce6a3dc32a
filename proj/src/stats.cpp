#include "kinex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace kinex {
namespace {

std::vector<double> sorted_copy(std::span<const double> samples) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

void require_samples(std::span<const double> samples, std::size_t minimum, const char* fn) {
  if (samples.size() < minimum) {
    throw std::invalid_argument(std::string(fn) + ": need at least " + std::to_string(minimum) +
                                " samples, got " + std::to_string(samples.size()));
  }
  for (double x : samples) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(fn) + ": non-finite sample");
  }
}

}  // namespace

double ks_distance(std::span<const double> samples, const EquilibriumFamily& fam) {
  require_samples(samples, kMinSamplesForDistance, "ks_distance");
  const std::vector<double> sorted = sorted_copy(samples);
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Left limit of the model CDF matters for the Dirac step.
    const double f_right = equilibrium_cdf(fam, sorted[i]);
    const double f_left = equilibrium_cdf(fam, std::nextafter(sorted[i], 0.0));
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    sup = std::max({sup, above - f_right, f_left - below});
  }
  return std::clamp(sup, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  const std::vector<double> x = sorted_copy(a);
  const std::vector<double> y = sorted_copy(b);
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    sup = std::max(sup, std::fabs(i / nx - j / ny));
  }
  return sup;
}

double wasserstein1(std::span<const double> samples, const EquilibriumFamily& fam) {
  require_samples(samples, kMinSamplesForDistance, "wasserstein1");
  const std::vector<double> sorted = sorted_copy(samples);
  const double n = static_cast<double>(sorted.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double q = equilibrium_quantile(fam, (static_cast<double>(i) + 0.5) / n);
    sum += std::fabs(sorted[i] - q);
  }
  return sum / n;
}

double gini(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("gini: empty sample");
  const std::vector<double> sorted = sorted_copy(samples);
  if (sorted.front() < 0.0) throw std::invalid_argument("gini: negative sample");
  const double n = static_cast<double>(sorted.size());
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    total += sorted[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  if (!(total > 0.0)) throw std::domain_error("gini: undefined for zero total");
  return std::clamp(weighted / (n * total), 0.0, 1.0);
}

double hill_tail_index(std::span<const double> samples, double top_fraction) {
  require_samples(samples, kMinSamplesForTail, "hill_tail_index");
  if (!(top_fraction > 0.0 && top_fraction <= 0.1)) {
    throw std::invalid_argument("hill_tail_index: top_fraction must be in (0, 0.1]");
  }
  std::vector<double> sorted = sorted_copy(samples);
  std::reverse(sorted.begin(), sorted.end());
  const auto k = static_cast<std::size_t>(
      std::ceil(top_fraction * static_cast<double>(sorted.size())));
  if (k < 2 || k >= sorted.size()) {
    throw std::invalid_argument("hill_tail_index: too few tail points");
  }
  const double threshold = sorted[k];
  if (!(threshold > 0.0)) throw std::invalid_argument("hill_tail_index: non-positive threshold");
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(sorted[i] / threshold);
  if (!(sum > 0.0)) throw std::invalid_argument("hill_tail_index: no spread in the tail");
  return static_cast<double>(k) / sum;
}

std::vector<MomentRow> moment_table(std::span<const double> samples, const EquilibriumFamily& fam,
                                    int max_order) {
  if (samples.empty()) throw std::invalid_argument("moment_table: empty sample");
  if (max_order < 1) throw std::invalid_argument("moment_table: max_order must be >= 1");
  std::vector<MomentRow> rows;
  const double n = static_cast<double>(samples.size());
  for (int k = 1; k <= max_order; ++k) {
    double sum = 0.0;
    for (double x : samples) sum += std::pow(x, k);
    rows.push_back({k, sum / n, equilibrium_moment(fam, k)});
  }
  return rows;
}

FitReport fit_report(std::span<const double> samples, const EquilibriumFamily& fam, int max_order,
                     double top_fraction) {
  FitReport report;
  report.ks = ks_distance(samples, fam);
  report.wasserstein1 = wasserstein1(samples, fam);
  report.gini = gini(samples);
  if (samples.size() >= kMinSamplesForTail) {
    try {
      report.hill_index = hill_tail_index(samples, top_fraction);
    } catch (const std::invalid_argument&) {
      report.hill_index.reset();
    }
  }
  report.moments = moment_table(samples, fam, max_order);
  return report;
}

std::string to_json(const FitReport& report) {
  nlohmann::ordered_json j;
  j["ks"] = report.ks;
  j["wasserstein1"] = report.wasserstein1;
  j["gini"] = report.gini;
  j["hill_index"] = report.hill_index ? nlohmann::ordered_json(*report.hill_index)
                                      : nlohmann::ordered_json(nullptr);
  auto moments = nlohmann::ordered_json::array();
  for (const auto& row : report.moments) {
    nlohmann::ordered_json m;
    m["k"] = row.order;
    m["empirical"] = row.empirical;
    if (std::isinf(row.analytic)) {
      m["analytic"] = "inf";
    } else {
      m["analytic"] = row.analytic;
    }
    moments.push_back(std::move(m));
  }
  j["moments"] = std::move(moments);
  return j.dump(2);
}

}  // namespace kinex

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kinex/fraction_law.hpp"

namespace kinex {

/// Wealth vector of N agents plus the number of trades executed so far.
struct Population {
  std::vector<double> wealth;
  std::uint64_t trades_done = 0;

  std::size_t agent_count() const noexcept { return wealth.size(); }
  /// tau = 2 t / N
  double kinetic_time() const noexcept {
    return wealth.empty() ? 0.0 : 2.0 * static_cast<double>(trades_done) / agent_count();
  }
};

enum class InitialCondition { AllEqualOne, ExponentialMeanOne, UniformZeroTwo };

InitialCondition parse_initial_condition(const std::string& text);
std::string to_string(InitialCondition initial);

/// v* = eps (v + w), w* = (1 - eps)(v + w); the pair total is conserved.
struct PureGambling {
  FractionLaw law;  // Uniform01, SymmetricBeta or DiracHalf
};
/// v* = eps1 (v + w), w* = eps2 (v + w); conserved only in expectation.
struct MeanConservative {
  InverseBetaQuarter law;
};
/// v* = p v + q w, w* = q v + p w; the pair total shrinks by 1 - 2 sqrt(pq).
struct SlaninaMix {
  SlaninaPQ law;
};

struct TradeRule {
  std::variant<PureGambling, MeanConservative, SlaninaMix> kind;
  bool renormalize = false;
};

/// Rule matching the law's variant. Without an explicit renormalize flag the
/// defaults are: off for PureGambling, on for MeanConservative and SlaninaMix.
TradeRule make_trade_rule(const FractionLaw& law, std::optional<bool> renormalize = std::nullopt);

/// Same, but checks that `rule_name` ("pure", "mean", "slanina") matches the law.
TradeRule make_trade_rule(const std::string& rule_name, const FractionLaw& law,
                          std::optional<bool> renormalize = std::nullopt);

FractionLaw law_of(const TradeRule& rule);
void validate(const TradeRule& rule);

struct TradeOutcome {
  double v;
  double w;
};

struct MeanTradeOutcome {
  double v;
  double w;
  /// (v* + w*) - (v + w): what the pair took from (> 0) or gave to (< 0) the market.
  double market_flow;
};

TradeOutcome apply_trade_pure(double v, double w, double eps);
MeanTradeOutcome apply_trade_mean(double v, double w, double eps1, double eps2);
TradeOutcome apply_trade_slanina(double v, double w, double p, double q);

struct SimulationConfig {
  TradeRule rule;
  std::size_t agents = 0;
  std::uint64_t total_trades = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  InitialCondition initial = InitialCondition::AllEqualOne;
  /// Trades between time-series samples; 0 means one sample per N trades.
  std::uint64_t sample_stride = 0;
  /// Trades excluded from `pooled` and from post-burn-in series statistics.
  std::uint64_t burn_in_trades = 0;
  /// When nonzero, a full wealth snapshot is appended to `pooled` every this
  /// many trades after burn-in.
  std::uint64_t snapshot_stride = 0;
};

struct SeriesPoint {
  double tau;
  double mean;
  double variance;
};

struct SimulationResult {
  Population population;
  std::vector<SeriesPoint> series;
  std::vector<double> pooled;
  /// Total wealth at t = 0 and at the end, before any renormalization.
  double initial_total = 0.0;
  double final_raw_total = 0.0;
  /// Accumulated market flow of mean-conservative trades (raw scale).
  double market_flow = 0.0;
};

/// Random initial conditions are rescaled so the population mean is exactly 1.
Population make_population(std::size_t agents, InitialCondition initial, SeededRng& rng);

/// Runs `total_trades` trades. Each trade picks an unordered pair uniformly
/// (self-pairs rejected), draws fractions from the rule's law and applies the
/// matching kernel. With renormalize set the population is kept at mean 1;
/// since every kernel is positively homogeneous, the rescaling is applied
/// lazily (every N trades and before every observation), which yields the
/// same observed wealths as rescaling after each trade.
/// Throws std::invalid_argument for N < 2 or T < 1.
SimulationResult simulate(const SimulationConfig& config);

/// R independent runs on streams config.stream + r, executed concurrently on
/// up to `threads` threads (0 = hardware concurrency). Results are ordered by
/// replica index, independent of scheduling.
std::vector<SimulationResult> simulate_replicas(const SimulationConfig& config,
                                                std::size_t replicas, std::size_t threads = 0);

/// Compensated sum.
double total_wealth(std::span<const double> wealth);

struct MeanVariance {
  double mean;
  double variance;
};
MeanVariance mean_variance(std::span<const double> values);

void write_wealth_csv(std::ostream& out, std::span<const double> wealth);
void write_series_csv(std::ostream& out, std::span<const SeriesPoint> series);

}  // namespace kinex

#include "kinex/kinetics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace kinex {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_wealth(double v, double w, const char* fn) {
  if (!(v >= 0.0) || !(w >= 0.0)) {
    throw std::domain_error(std::string(fn) + ": wealth must be non-negative");
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Returns the factor applied.
double rescale_to_unit_mean(std::vector<double>& wealth) {
  const double total = total_wealth(wealth);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::runtime_error("renormalization: total wealth is " + format_double(total));
  }
  const double factor = static_cast<double>(wealth.size()) / total;
  for (double& x : wealth) x *= factor;
  return factor;
}

class Simulator {
 public:
  explicit Simulator(const SimulationConfig& config)
      : config_(config), rng_(config.seed, config.stream) {
    if (config.agents < 2) throw std::invalid_argument("simulate: need at least 2 agents");
    if (config.total_trades < 1) throw std::invalid_argument("simulate: need at least 1 trade");
    validate(config.rule);
    stride_ = config.sample_stride != 0 ? config.sample_stride : config.agents;
    result_.population = make_population(config.agents, config.initial, rng_);
    result_.initial_total = total_wealth(result_.population.wealth);
  }

  SimulationResult run() && {
    std::visit([this](const auto& kind) { loop(kind); }, config_.rule.kind);
    return std::move(result_);
  }

 private:
  void observe() {
    auto& pop = result_.population;
    if (config_.rule.renormalize) rescale();
    const MeanVariance mv = mean_variance(pop.wealth);
    result_.series.push_back({pop.kinetic_time(), mv.mean, mv.variance});
  }

  void snapshot() {
    auto& pop = result_.population;
    if (config_.rule.renormalize) rescale();
    result_.pooled.insert(result_.pooled.end(), pop.wealth.begin(), pop.wealth.end());
  }

  void rescale() { scale_ *= rescale_to_unit_mean(result_.population.wealth); }

  std::pair<std::size_t, std::size_t> pick_pair() {
    const std::uint64_t n = config_.agents;
    const auto i = rng_.uniform_index(n);
    auto j = rng_.uniform_index(n);
    while (j == i) j = rng_.uniform_index(n);
    return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
  }

  template <class Kind>
  void loop(const Kind& kind) {
    auto& pop = result_.population;
    auto& wealth = pop.wealth;
    const std::uint64_t fold_interval = config_.agents;
    observe();
    for (std::uint64_t t = 1; t <= config_.total_trades; ++t) {
      const auto [i, j] = pick_pair();
      const double v = wealth[i];
      const double w = wealth[j];
      if constexpr (std::is_same_v<Kind, PureGambling>) {
        const FractionPair eps = sample_fraction_pair(kind.law, rng_);
        const double sum = v + w;
        const double vs = eps.first * sum;
        wealth[i] = vs;
        wealth[j] = sum - vs;
      } else if constexpr (std::is_same_v<Kind, MeanConservative>) {
        const FractionPair eps = sample_fraction_pair(kind.law, rng_);
        const double sum = v + w;
        wealth[i] = eps.first * sum;
        wealth[j] = eps.second * sum;
        result_.market_flow += ((wealth[i] + wealth[j]) - sum) / scale_;
      } else {
        wealth[i] = kind.law.p * v + kind.law.q * w;
        wealth[j] = kind.law.q * v + kind.law.p * w;
      }
      pop.trades_done = t;

      if (t == config_.total_trades) result_.final_raw_total = total_wealth(wealth) / scale_;
      const bool sample = t % stride_ == 0 || t == config_.total_trades;
      const bool take_snapshot = config_.snapshot_stride != 0 && t > config_.burn_in_trades &&
                                 (t - config_.burn_in_trades) % config_.snapshot_stride == 0;
      if (sample) observe();
      if (take_snapshot) snapshot();
      if (config_.rule.renormalize && !sample && !take_snapshot && t % fold_interval == 0) {
        rescale();
      }
    }
  }

  SimulationConfig config_;
  SeededRng rng_;
  std::uint64_t stride_ = 1;
  // current wealth = raw wealth * scale_
  double scale_ = 1.0;
  SimulationResult result_;
};

}  // namespace

InitialCondition parse_initial_condition(const std::string& text) {
  if (text == "equal") return InitialCondition::AllEqualOne;
  if (text == "exponential") return InitialCondition::ExponentialMeanOne;
  if (text == "uniform") return InitialCondition::UniformZeroTwo;
  throw std::invalid_argument("unknown initial condition '" + text +
                              "' (expected equal, exponential or uniform)");
}

std::string to_string(InitialCondition initial) {
  switch (initial) {
    case InitialCondition::AllEqualOne: return "equal";
    case InitialCondition::ExponentialMeanOne: return "exponential";
    case InitialCondition::UniformZeroTwo: return "uniform";
  }
  return "?";
}

TradeRule make_trade_rule(const FractionLaw& law, std::optional<bool> renormalize) {
  validate(law);
  return std::visit(
      overloaded{
          [&](const InverseBetaQuarter& l) {
            return TradeRule{MeanConservative{l}, renormalize.value_or(true)};
          },
          [&](const SlaninaPQ& l) { return TradeRule{SlaninaMix{l}, renormalize.value_or(true)}; },
          [&](const auto&) { return TradeRule{PureGambling{law}, renormalize.value_or(false)}; },
      },
      law);
}

TradeRule make_trade_rule(const std::string& rule_name, const FractionLaw& law,
                          std::optional<bool> renormalize) {
  TradeRule rule = make_trade_rule(law, renormalize);
  const bool matches = (rule_name == "pure" && std::holds_alternative<PureGambling>(rule.kind)) ||
                       (rule_name == "mean" && std::holds_alternative<MeanConservative>(rule.kind)) ||
                       (rule_name == "slanina" && std::holds_alternative<SlaninaMix>(rule.kind));
  if (!matches) {
    if (rule_name != "pure" && rule_name != "mean" && rule_name != "slanina") {
      throw std::invalid_argument("unknown rule '" + rule_name + "'");
    }
    throw std::invalid_argument("rule '" + rule_name + "' does not accept law '" +
                                to_string(law) + "'");
  }
  return rule;
}

FractionLaw law_of(const TradeRule& rule) {
  return std::visit(overloaded{
                        [](const PureGambling& k) { return k.law; },
                        [](const MeanConservative& k) { return FractionLaw{k.law}; },
                        [](const SlaninaMix& k) { return FractionLaw{k.law}; },
                    },
                    rule.kind);
}

void validate(const TradeRule& rule) {
  const FractionLaw law = law_of(rule);
  validate(law);
  if (const auto* pure = std::get_if<PureGambling>(&rule.kind); pure && !is_pointwise_conservative(pure->law)) {
    throw std::invalid_argument("pure gambling needs a uniform, beta or dirac-half law");
  }
}

TradeOutcome apply_trade_pure(double v, double w, double eps) {
  check_wealth(v, w, "apply_trade_pure");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("apply_trade_pure: eps must be in [0,1]");
  const double sum = v + w;
  const double vs = eps * sum;
  return {vs, sum - vs};
}

MeanTradeOutcome apply_trade_mean(double v, double w, double eps1, double eps2) {
  check_wealth(v, w, "apply_trade_mean");
  if (!(eps1 >= 0.0) || !(eps2 >= 0.0)) {
    throw std::domain_error("apply_trade_mean: fractions must be non-negative");
  }
  const double sum = v + w;
  const double vs = eps1 * sum;
  const double ws = eps2 * sum;
  return {vs, ws, (vs + ws) - sum};
}

TradeOutcome apply_trade_slanina(double v, double w, double p, double q) {
  check_wealth(v, w, "apply_trade_slanina");
  validate(FractionLaw{SlaninaPQ{p, q}});
  return {p * v + q * w, q * v + p * w};
}

Population make_population(std::size_t agents, InitialCondition initial, SeededRng& rng) {
  Population pop;
  pop.wealth.resize(agents);
  for (double& x : pop.wealth) {
    switch (initial) {
      case InitialCondition::AllEqualOne: x = 1.0; break;
      case InitialCondition::ExponentialMeanOne: x = rng.exponential(); break;
      case InitialCondition::UniformZeroTwo: x = 2.0 * rng.uniform(); break;
    }
  }
  if (initial != InitialCondition::AllEqualOne) rescale_to_unit_mean(pop.wealth);
  return pop;
}

SimulationResult simulate(const SimulationConfig& config) { return Simulator(config).run(); }

std::vector<SimulationResult> simulate_replicas(const SimulationConfig& config,
                                                std::size_t replicas, std::size_t threads) {
  if (replicas == 0) throw std::invalid_argument("simulate_replicas: need at least one replica");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, replicas);

  std::vector<SimulationResult> results(replicas);
  std::vector<std::exception_ptr> errors(replicas);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t r = next++; r < replicas; r = next++) {
      try {
        SimulationConfig replica = config;
        replica.stream = config.stream + r;
        results[r] = simulate(replica);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

double total_wealth(std::span<const double> wealth) {
  // Neumaier summation.
  double sum = 0.0;
  double comp = 0.0;
  for (double x : wealth) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

MeanVariance mean_variance(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_variance: empty input");
  const double n = static_cast<double>(values.size());
  const double mean = total_wealth(values) / n;
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  return {mean, ss / n};
}

void write_wealth_csv(std::ostream& out, std::span<const double> wealth) {
  out << "wealth\n";
  for (double x : wealth) out << format_double(x) << '\n';
}

void write_series_csv(std::ostream& out, std::span<const SeriesPoint> series) {
  out << "tau,mean,variance\n";
  for (const auto& p : series) {
    out << format_double(p.tau) << ',' << format_double(p.mean) << ',' << format_double(p.variance)
        << '\n';
  }
}

}  // namespace kinex

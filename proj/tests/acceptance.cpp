// Acceptance runs: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kinex/criterion.hpp"
#include "kinex/equilibria.hpp"
#include "kinex/kinetics.hpp"
#include "kinex/stats.hpp"
#include "kinex/transform.hpp"

using namespace kinex;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s  [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

constexpr std::size_t kAgents = 10000;

SimulationConfig desk_run(const FractionLaw& law, std::uint64_t trades_per_agent, std::uint64_t seed) {
  SimulationConfig c;
  c.rule = make_trade_rule(law);
  c.agents = kAgents;
  c.total_trades = trades_per_agent * kAgents;
  c.burn_in_trades = 1000 * kAgents;
  c.seed = seed;
  return c;
}

double time_averaged_variance(const SimulationResult& r, double tau_from) {
  double sum = 0.0;
  int count = 0;
  for (const auto& p : r.series) {
    if (p.tau < tau_from) continue;
    sum += p.variance;
    ++count;
  }
  return sum / count;
}

void gibbs() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = simulate(desk_run(Uniform01{}, 2000, 101));
  const double ks = ks_distance(r.population.wealth, ExponentialUnit{});
  const double drift = std::fabs(r.final_raw_total - r.initial_total) / r.initial_total;
  report(1, ks < 0.02 && drift < 1e-10, "Gibbs equilibrium",
         fmt("KS=%.4f (<0.02) drift=%.2e (<1e-10) %.1fs", ks, drift, seconds_since(start)));
}

void gamma_family() {
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 201;
  for (double a : {0.5, 2.0, 4.0}) {
    const auto r = simulate(desk_run(SymmetricBeta{a}, 2000, seed++));
    const double ks = ks_distance(r.population.wealth, GammaShape{a});
    const double var = time_averaged_variance(r, 2.0 * 1000);
    ok = ok && ks < 0.02 && std::fabs(var - 1.0 / a) < 0.03;
    detail += fmt("a=%g KS=%.4f var=%.4f (1/a=%.4f) ", a, ks, var, 1.0 / a);
  }
  report(2, ok, "Gamma equilibria", detail + "(KS<0.02, |var-1/a|<0.03)");
}

void degenerate() {
  SimulationConfig c;
  c.rule = make_trade_rule(DiracHalf{});
  c.agents = 1024;
  c.total_trades = 1000000;
  c.initial = InitialCondition::ExponentialMeanOne;
  c.seed = 301;
  const auto r = simulate(c);
  double worst = 0.0;
  for (double x : r.population.wealth) worst = std::max(worst, std::fabs(x - 1.0));
  report(3, worst < 1e-6, "degenerate limit", fmt("max|w-1|=%.2e (<1e-6)", worst));
}

void heavy_tail() {
  const auto start = std::chrono::steady_clock::now();
  auto c = desk_run(InverseBetaQuarter{3.0}, 4000, 401);
  c.snapshot_stride = 10 * kAgents;
  const auto r = simulate(c);
  const double ks = ks_distance(r.population.wealth, InverseGammaShape{3.0});
  const double hill = hill_tail_index(r.pooled, 0.01);
  report(4, ks < 0.03 && std::fabs(hill - 3.0) < 0.5, "heavy-tail equilibrium",
         fmt("KS=%.4f (<0.03) Hill=%.3f (3+-0.5, %zu pooled) %.1fs", ks, hill, r.pooled.size(),
             seconds_since(start)));
}

void slanina() {
  auto c = desk_run(SlaninaPQ{0.25, 0.25}, 2000, 501);
  c.snapshot_stride = 10 * kAgents;
  const auto r = simulate(c);
  const double ks = ks_distance(r.pooled, SlaninaRescaled{});

  SimulationConfig d;
  d.rule = make_trade_rule(SlaninaPQ{0.25, 0.25}, false);
  d.agents = kAgents;
  d.total_trades = 10 * kAgents;
  d.sample_stride = kAgents / 10;
  d.seed = 502;
  const auto decay = simulate(d);
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : decay.series) {
    const double y = std::log(p.mean);
    n += 1;
    sx += p.tau;
    sy += y;
    sxx += p.tau * p.tau;
    sxy += p.tau * y;
  }
  const double rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  report(5, ks < 0.03 && std::fabs(rate / 0.5 - 1.0) < 0.05, "Slanina correspondence",
         fmt("KS=%.4f (<0.03, pooled) decay rate=%.4f (0.5 +-5%%)", ks, rate));
}

void residuals() {
  struct Case {
    FractionLaw law;
    EquilibriumFamily fam;
  };
  const Case cases[] = {{Uniform01{}, ExponentialUnit{}},
                        {SymmetricBeta{0.5}, GammaShape{0.5}},
                        {SymmetricBeta{2.0}, GammaShape{2.0}},
                        {SymmetricBeta{5.0}, GammaShape{5.0}},
                        {InverseBetaQuarter{1.5}, SlaninaRescaled{}},
                        {DiracHalf{}, DiracUnit{}}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    const double res = stationary_residual(grid_from_family(c.fam, 10.0, 256), c.law);
    const double secs = seconds_since(start);
    ok = ok && res < 1e-5 && secs < 5.0;
    detail += fmt("%s=%.1e/%.2fs ", to_string(c.law).c_str(), res, secs);
  }
  report(6, ok, "fixed-point residuals", detail + "(<1e-5, <5s)");
}

void picard() {
  bool ok = true;
  std::string detail;
  struct Case {
    FractionLaw law;
    EquilibriumFamily fam;
  };
  for (const Case& c : {Case{SymmetricBeta{2.0}, GammaShape{2.0}}, Case{Uniform01{}, ExponentialUnit{}}}) {
    const auto r = picard_solve(c.law, 10.0, 256, 200, 1e-8);
    double dist = 0.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      dist = std::max(dist, std::fabs(r.grid.values()[i] -
                                      equilibrium_laplace(c.fam, r.grid.xi()[i]).value));
    }
    ok = ok && r.converged && r.iterations <= 200 && dist < 1e-6;
    detail += fmt("%s: %d iters sup=%.1e ", to_string(c.law).c_str(), r.iterations, dist);
  }
  report(7, ok, "Picard convergence", detail + "(<1e-6, <=200 iters)");
}

void criterion_suite() {
  std::vector<FractionLaw> laws{Uniform01{}, DiracHalf{}};
  for (double a : {0.1, 0.5, 1.0, 2.0, 10.0}) laws.push_back(SymmetricBeta{a});
  for (double a : {1.01, 1.5, 2.0, 5.0, 20.0}) laws.push_back(InverseBetaQuarter{a});

  double worst_g1 = 0.0, worst_quad = 0.0, max_gprime = -1.0;
  for (const auto& law : laws) {
    worst_g1 = std::max(worst_g1, std::fabs(g_value(law, 1.0).value));
    max_gprime = std::max(max_gprime, g_prime_at_one(law));
    for (double s : {0.0, 0.3, 0.5, 1.5, 2.0, 3.7}) {
      const double closed = g_value(law, s).value;
      if (std::isfinite(closed)) {
        worst_quad = std::max(worst_quad, std::fabs(closed - g_value_by_quadrature(law, s)));
      }
    }
  }
  bool monotone = true;
  double prev = q_value(1.0);
  for (int i = 1; i <= 1900; ++i) {
    const double q = q_value(1.0 + 0.01 * i);
    monotone = monotone && q > prev;
    prev = q;
  }
  const double q1 = std::fabs(q_value(1.0));
  const bool ok = worst_g1 < 1e-10 && max_gprime < 0.0 && q1 < 1e-10 && monotone && worst_quad < 1e-8;
  report(8, ok, "criterion suite",
         fmt("max|G(1)|=%.1e max G'(1)=%.4f |Q(1)|=%.1e Q increasing=%s max|closed-quad|=%.1e", worst_g1,
             max_gprime, q1, monotone ? "yes" : "no", worst_quad));
}

void ode_residual() {
  double worst = 0.0;
  for (double xi : {0.1, 1.0, 5.0, 20.0}) {
    worst = std::max(worst, std::fabs(slanina_ode_residual(xi, 0.25, 0.25)));
    worst = std::max(worst, std::fabs(slanina_ode_residual(xi, 9.0 / 16.0, 1.0 / 16.0)));
  }
  report(9, worst < 1e-10, "Slanina ODE residual", fmt("max=%.1e (<1e-10)", worst));
}

void tree_fixed_point() {
  // 20 independent pools of 5e4 draws; standard errors from the spread across pools.
  constexpr int kPools = 20;
  constexpr std::size_t kPerPool = 50000;
  double est[3][kPools];
  for (int r = 0; r < kPools; ++r) {
    SeededRng rng(1001, static_cast<std::uint64_t>(r));
    const auto z = tree_sample_pool(SymmetricBeta{2.0}, 20, AllEqualOne{}, kPerPool, rng);
    double m[3] = {0, 0, 0};
    for (double x : z) {
      m[0] += x;
      m[1] += x * x;
      m[2] += x * x * x;
    }
    for (int k = 0; k < 3; ++k) est[k][r] = m[k] / kPerPool;
  }
  const double target[3] = {1.0, 1.5, 3.0};
  bool ok = true;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    double mean = 0.0, sq = 0.0;
    for (int r = 0; r < kPools; ++r) mean += est[k][r];
    mean /= kPools;
    for (int r = 0; r < kPools; ++r) sq += (est[k][r] - mean) * (est[k][r] - mean);
    const double se = std::sqrt(sq / (kPools - 1) / kPools);
    const double z = std::fabs(mean - target[k]) / se;
    ok = ok && z < 5.0;
    detail += fmt("m%d=%.4f (%.1f SE) ", k + 1, mean, z);
  }
  report(10, ok, "distributional fixed point", detail + "(within 5 SE of 1, 1.5, 3)");
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  gibbs();
  gamma_family();
  degenerate();
  heavy_tail();
  slanina();
  residuals();
  picard();
  criterion_suite();
  ode_residual();
  tree_fixed_point();
  std::printf("%d of 10 criteria passed in %.1fs\n", 10 - failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}

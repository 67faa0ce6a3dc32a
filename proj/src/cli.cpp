#include "kinex/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinex/criterion.hpp"
#include "kinex/equilibria.hpp"
#include "kinex/fraction_law.hpp"
#include "kinex/kinetics.hpp"
#include "kinex/stats.hpp"
#include "kinex/transform.hpp"

namespace kinex::cli {
namespace {

// Raised for numeric failures that map to exit status 2.
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
  return file;
}

void finish_output(std::ofstream& file, const std::string& path) {
  file.flush();
  if (!file) throw std::invalid_argument("failed writing output file '" + path + "'");
}

struct SimulateOptions {
  std::string rule;
  std::string law;
  std::size_t agents = 1000;
  std::uint64_t trades_per_agent = 2000;
  std::uint64_t burn_in = 1000;
  std::uint64_t seed = 1;
  std::size_t replicas = 1;
  std::size_t threads = 0;
  std::string initial = "equal";
  std::string out;
  std::string series;
  std::string format = "csv";
  bool renormalize = false;
  bool no_renormalize = false;
};

int run_simulate(const SimulateOptions& o, std::ostream& out) {
  const FractionLaw law = parse_fraction_law(o.law);
  if (o.renormalize && o.no_renormalize) {
    throw std::invalid_argument("--renormalize and --no-renormalize are exclusive");
  }
  std::optional<bool> renorm;
  if (o.renormalize) renorm = true;
  if (o.no_renormalize) renorm = false;
  const TradeRule rule = o.rule.empty() ? make_trade_rule(law, renorm)
                                        : make_trade_rule(o.rule, law, renorm);
  if (o.agents < 2) throw std::invalid_argument("--agents must be at least 2");
  if (o.trades_per_agent < 1) throw std::invalid_argument("--trades-per-agent must be positive");
  if (o.burn_in > o.trades_per_agent) {
    throw std::invalid_argument("--burn-in cannot exceed --trades-per-agent");
  }
  if (o.replicas < 1) throw std::invalid_argument("--replicas must be positive");
  if (o.format != "csv" && o.format != "json") {
    throw std::invalid_argument("--format must be csv or json");
  }

  SimulationConfig config;
  config.rule = rule;
  config.agents = o.agents;
  config.total_trades = o.trades_per_agent * o.agents;
  config.seed = o.seed;
  config.initial = parse_initial_condition(o.initial);
  config.burn_in_trades = o.burn_in * o.agents;

  // Open outputs before the run so an unwritable path fails fast.
  std::ofstream out_file, series_file;
  if (!o.out.empty()) out_file = open_output(o.out);
  if (!o.series.empty()) series_file = open_output(o.series);

  const std::vector<SimulationResult> results = simulate_replicas(config, o.replicas, o.threads);

  std::vector<double> merged;
  for (const auto& r : results) {
    merged.insert(merged.end(), r.population.wealth.begin(), r.population.wealth.end());
  }
  const EquilibriumFamily fam = equilibrium_for(law);

  if (out_file.is_open()) {
    if (o.format == "csv") {
      write_wealth_csv(out_file, merged);
    } else {
      out_file << to_json(fit_report(merged, fam)) << '\n';
    }
    finish_output(out_file, o.out);
  }
  if (series_file.is_open()) {
    write_series_csv(series_file, results.front().series);
    finish_output(series_file, o.series);
  }

  // Time-averaged variance over the post-burn-in part of replica 0's series.
  const double burn_tau = 2.0 * static_cast<double>(o.burn_in);
  double var_sum = 0.0;
  int var_count = 0;
  for (const auto& p : results.front().series) {
    if (p.tau > burn_tau) {
      var_sum += p.variance;
      ++var_count;
    }
  }
  const MeanVariance mv = mean_variance(merged);
  out << "simulate law=" << to_string(law) << " agents=" << o.agents
      << " replicas=" << o.replicas << " tau=" << fmt(results.front().population.kinetic_time())
      << " mean=" << fmt(mv.mean) << " variance=" << fmt(mv.variance)
      << " avg_variance=" << (var_count > 0 ? fmt(var_sum / var_count) : std::string("nan"))
      << " gini=" << fmt(gini(merged));
  if (merged.size() >= kMinSamplesForDistance) {
    out << " ks[" << to_string(fam) << "]=" << fmt(ks_distance(merged, fam));
  }
  out << '\n';
  return kExitOk;
}

struct FixedPointOptions {
  std::string law;
  double xi_max = 10.0;
  std::size_t nodes = 256;
  int max_iters = 200;
  double tol = 1e-8;
  std::string out;
};

int run_fixedpoint(const FixedPointOptions& o, std::ostream& out) {
  const FractionLaw law = parse_fraction_law(o.law);
  if (std::holds_alternative<SlaninaPQ>(law)) {
    throw std::invalid_argument("fixedpoint needs a mean-conservative law");
  }
  if (!(o.xi_max > 0.0)) throw std::invalid_argument("--xi-max must be positive");
  if (!(o.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  std::ofstream out_file;
  if (!o.out.empty()) out_file = open_output(o.out);

  const PicardResult result = picard_solve(law, o.xi_max, o.nodes, o.max_iters, o.tol);
  if (out_file.is_open()) {
    write_grid_csv(out_file, result.grid);
    finish_output(out_file, o.out);
  }
  const EquilibriumFamily fam = equilibrium_for(law);
  double distance = 0.0;
  for (std::size_t k = 0; k < result.grid.size(); ++k) {
    const double exact = equilibrium_laplace(fam, result.grid.xi()[k]).value;
    distance = std::max(distance, std::fabs(result.grid.values()[k] - exact));
  }
  out << "fixedpoint law=" << to_string(law) << " iterations=" << result.iterations
      << " last_change=" << fmt(result.last_change)
      << " converged=" << (result.converged ? "yes" : "no") << " sup_distance["
      << to_string(fam) << "]=" << fmt(distance) << '\n';
  if (!result.converged) {
    throw NumericFailure("fixed-point iteration did not converge within " +
                         std::to_string(o.max_iters) + " iterations (last change " +
                         fmt(result.last_change) + ")");
  }
  return kExitOk;
}

int run_gfun(const std::string& law_text, double s, std::ostream& out) {
  const FractionLaw law = parse_fraction_law(law_text);
  if (!(s >= 0.0)) throw std::invalid_argument("--s must be >= 0");
  const GEvaluation g = g_value(law, s);
  out << "gfun law=" << to_string(law) << " s=" << fmt(s) << " g="
      << (std::isinf(g.value) ? std::string("inf") : fmt(g.value))
      << " g_prime_at_one=" << fmt(g_prime_at_one(law));
  if (const auto* inv = std::get_if<InverseBetaQuarter>(&law)) {
    out << " q=" << fmt(q_value(inv->a));
  }
  out << '\n';
  return kExitOk;
}

struct VerifyCase {
  std::string name;
  FractionLaw law;
  EquilibriumFamily family;
};

VerifyCase parse_verify_case(const std::string& text) {
  if (text == "uniform" || text == "exp") return {text, Uniform01{}, ExponentialUnit{}};
  if (text == "dirac") return {text, DiracHalf{}, DiracUnit{}};
  if (text == "slanina") return {text, InverseBetaQuarter{1.5}, SlaninaRescaled{}};
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (colon != std::string::npos && (head == "gamma" || head == "invgamma")) {
    const EquilibriumFamily fam = parse_equilibrium_family(text);
    if (const auto* g = std::get_if<GammaShape>(&fam)) {
      return {text, SymmetricBeta{g->a}, fam};
    }
    const auto& ig = std::get<InverseGammaShape>(fam);
    return {text, InverseBetaQuarter{ig.a}, fam};
  }
  throw std::invalid_argument("unknown verify case '" + text +
                              "' (expected uniform, gamma:A, invgamma:A, slanina, dirac, all)");
}

std::vector<VerifyCase> all_verify_cases() {
  return {parse_verify_case("uniform"), parse_verify_case("gamma:0.5"),
          parse_verify_case("gamma:2"),  parse_verify_case("gamma:5"),
          parse_verify_case("slanina"),  parse_verify_case("dirac")};
}

int run_verify(const std::string& case_text, bool all, double tol, double xi_max,
               std::size_t nodes, std::ostream& out, std::ostream& err) {
  if (!(tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  if (all == !case_text.empty()) {
    throw std::invalid_argument("verify needs exactly one of --case or --all");
  }
  const std::vector<VerifyCase> cases = all ? all_verify_cases()
                                            : std::vector<VerifyCase>{parse_verify_case(case_text)};
  int failures = 0;
  double worst = 0.0;
  for (const auto& c : cases) {
    validate(c.law);
    const TransformGrid grid = grid_from_family(c.family, xi_max, nodes);
    const double residual = stationary_residual(grid, c.law);
    worst = std::max(worst, residual);
    if (!(residual <= tol)) {
      ++failures;
      err << "verify: case " << c.name << " residual " << fmt(residual) << " exceeds tolerance "
          << fmt(tol) << '\n';
    }
  }
  out << "verify cases=" << cases.size() << " failed=" << failures
      << " max_residual=" << fmt(worst) << " tol=" << fmt(tol) << '\n';
  if (failures > 0) throw NumericFailure("stationary residual above tolerance");
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinetic wealth-exchange simulator and equilibrium checks", "kinex"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Evolve a population of trading agents");
  simulate_cmd->add_option("--rule", sim.rule, "pure, mean or slanina (default: from the law)");
  simulate_cmd->add_option("--law", sim.law, "Fraction law, e.g. uniform, beta:2, invbeta:1.5")
      ->required();
  simulate_cmd->add_option("--agents", sim.agents, "Number of agents")->capture_default_str();
  simulate_cmd->add_option("--trades-per-agent", sim.trades_per_agent, "Total trades / N")
      ->capture_default_str();
  simulate_cmd->add_option("--burn-in", sim.burn_in, "Leading trades / N excluded from averages")
      ->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed)->capture_default_str();
  simulate_cmd->add_option("--replicas", sim.replicas, "Independent populations")
      ->capture_default_str();
  simulate_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
  simulate_cmd->add_option("--initial", sim.initial, "equal, exponential or uniform")
      ->capture_default_str();
  simulate_cmd->add_flag("--renormalize", sim.renormalize, "Keep the population mean at 1");
  simulate_cmd->add_flag("--no-renormalize", sim.no_renormalize);
  simulate_cmd->add_option("--out", sim.out, "Wealth CSV, or fit report with --format json");
  simulate_cmd->add_option("--series", sim.series, "Time series CSV (tau,mean,variance)");
  simulate_cmd->add_option("--format", sim.format, "csv or json")->capture_default_str();

  FixedPointOptions fp;
  auto* fixedpoint_cmd =
      app.add_subcommand("fixedpoint", "Solve the stationary transform equation by iteration");
  fixedpoint_cmd->add_option("--law", fp.law)->required();
  fixedpoint_cmd->add_option("--xi-max", fp.xi_max)->capture_default_str();
  fixedpoint_cmd->add_option("--nodes", fp.nodes)->capture_default_str();
  fixedpoint_cmd->add_option("--max-iters", fp.max_iters)->capture_default_str();
  fixedpoint_cmd->add_option("--tol", fp.tol)->capture_default_str();
  fixedpoint_cmd->add_option("--out", fp.out, "Grid CSV (xi,value)");

  std::string g_law;
  double g_s = 1.0;
  auto* gfun_cmd = app.add_subcommand("gfun", "Evaluate G(s) and G'(1) for a fraction law");
  gfun_cmd->add_option("--law", g_law)->required();
  gfun_cmd->add_option("--s", g_s)->capture_default_str();

  std::string verify_case;
  bool verify_all = false;
  double verify_tol = 1e-5;
  double verify_xi_max = 10.0;
  std::size_t verify_nodes = 256;
  auto* verify_cmd =
      app.add_subcommand("verify", "Check closed-form transforms against the stationary equation");
  verify_cmd->add_option("--case", verify_case, "uniform, gamma:A, invgamma:A, slanina, dirac");
  verify_cmd->add_flag("--all", verify_all);
  verify_cmd->add_option("--tol", verify_tol)->capture_default_str();
  verify_cmd->add_option("--xi-max", verify_xi_max)->capture_default_str();
  verify_cmd->add_option("--nodes", verify_nodes)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "kinex: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (simulate_cmd->parsed()) return run_simulate(sim, out);
    if (fixedpoint_cmd->parsed()) return run_fixedpoint(fp, out);
    if (gfun_cmd->parsed()) return run_gfun(g_law, g_s, out);
    if (verify_cmd->parsed()) {
      return run_verify(verify_case, verify_all, verify_tol, verify_xi_max, verify_nodes, out, err);
    }
  } catch (const NumericFailure& e) {
    err << "kinex: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "kinex: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "kinex: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    err << "kinex: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}

}  // namespace kinex::cli

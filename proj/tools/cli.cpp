#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "noarb/binomial.hpp"
#include "noarb/bsm.hpp"
#include "noarb/error.hpp"
#include "noarb/gbm.hpp"
#include "noarb/gordan.hpp"
#include "noarb/pde.hpp"

namespace noarb::cli {
namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240901;

std::string fixed(double v, int digits = 6) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void render_value(std::ostringstream& os, const json& v) {
  if (v.is_number_float()) {
    os << fixed(v.get<double>());
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ", ";
      render_value(os, v[i]);
    }
  } else if (v.is_string()) {
    os << v.get<std::string>();
  } else {
    os << v.dump();
  }
}

void render_object(std::ostringstream& os, const json& obj, const std::string& indent) {
  for (const auto& [key, v] : obj.items()) {
    if (v.is_object()) {
      os << indent << key << ":\n";
      render_object(os, v, indent + "  ");
    } else {
      os << indent << key << ": ";
      render_value(os, v);
      os << '\n';
    }
  }
}

std::string emit(const json& payload, bool as_json) {
  if (as_json) return payload.dump() + "\n";
  std::ostringstream os;
  render_object(os, payload, "");
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidParams, "--out: cannot write '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// xcheck

struct Row {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  double deviation() const { return std::abs(value - reference); }
  bool pass() const { return deviation() <= tolerance; }
};

std::vector<Row> xcheck_rows() {
  std::vector<Row> rows;
  const binomial::OnePeriodMarket mkt{100.0, 1.2, 0.8, 0.03};

  const gordan::Market market = one_period_market();
  const auto cls = gordan::classify_market(market.assets, market.rate);
  const auto* no_arb = std::get_if<gordan::NoArbitrage>(&cls);
  rows.push_back({"gordan.no_arbitrage", no_arb ? 1.0 : 0.0, 1.0, 0.0});
  rows.push_back({"gordan.complete", (no_arb && no_arb->complete) ? 1.0 : 0.0, 1.0, 0.0});
  rows.push_back({"gordan.pi", no_arb ? no_arb->measure.probabilities[0] : NAN, 0.5761, 5e-4});

  const double pi = binomial::risk_neutral_prob(mkt);
  const double call = binomial::price_european(mkt, 10.0, 0.0);
  const double put = binomial::price_european(mkt, 0.0, 30.0);
  const auto plan = binomial::replicate(mkt, 10.0, 0.0);
  const auto hedge = binomial::covered_hedge(mkt, 10.0, 0.0);
  rows.push_back({"binomial.pi", pi, 0.5761, 5e-4});
  rows.push_back({"binomial.c0", call, 5.5911, 5e-4});
  rows.push_back({"binomial.p0", put, 12.34, 5e-3});
  rows.push_back({"replicate.delta", plan.delta, 0.25, 5e-4});
  rows.push_back({"replicate.bank", plan.bank, -19.4089, 5e-4});
  rows.push_back({"replicate.cost", plan.cost, call, 1e-10});
  rows.push_back({"covered_hedge.price", hedge.price, call, 1e-10});
  rows.push_back({"martingale.call", binomial::martingale_identity_check(mkt, call, 10.0, 0.0), 0.0, 1e-10});
  rows.push_back({"parity.printed", binomial::put_call_parity_residual(5.5911, 12.34, 100.0, 110.0, 0.03, 1.0),
                  0.0, 1e-3});

  const double s0 = 100.0, strike = 110.0, rate = 0.03, sigma = 0.2, maturity = 0.25;
  const double closed = bsm::price_call(s0, strike, rate, sigma, maturity);
  const double lattice = binomial::crr_lattice_price(s0, strike, rate, sigma, maturity, 1000, true);
  pde::SolverConfig cfg;
  cfg.s_max = 440.0;
  cfg.space_steps = 400;
  cfg.time_steps = 400;
  const double grid = pde::price_at(pde::solve_call(strike, rate, sigma, maturity, cfg), 0.0, s0);
  const double quadrature = std::exp(-rate * maturity) *
                            bsm::quadrature_oracle(s0, strike, rate - 0.5 * sigma * sigma, sigma, maturity);
  rows.push_back({"bsm.crr1000", lattice, closed, 0.01});
  rows.push_back({"bsm.pde400", grid, closed, 0.01});
  rows.push_back({"bsm.quadrature", quadrature, closed, 1e-6});
  const double hi = std::max({closed, lattice, grid, quadrature});
  const double lo = std::min({closed, lattice, grid, quadrature});
  rows.push_back({"bsm.four_way_spread", hi - lo, 0.0, 0.01});
  return rows;
}

// ---------------------------------------------------------------------------
// subcommand handlers

struct Flags {
  bool json = false;
};

json measure_json(const gordan::StateMeasure& m) {
  return {{"probabilities", m.probabilities}, {"residual", m.residual}, {"unique", m.unique}};
}

CommandResult cmd_gordan_classify(const std::string& path, bool as_json) {
  const gordan::Market market = gordan::load_market_file(path);
  const auto cls = gordan::classify_market(market.assets, market.rate);
  json payload;
  std::vector<std::string> names;
  for (const auto& a : market.assets) names.push_back(a.name);
  payload["assets"] = names;
  int code = 0;
  if (const auto* na = std::get_if<gordan::NoArbitrage>(&cls)) {
    payload["branch"] = "no-arbitrage";
    payload["complete"] = na->complete;
    payload["measure"] = measure_json(na->measure);
  } else {
    const auto& arb = std::get<gordan::Arbitrage>(cls);
    payload["branch"] = "arbitrage";
    payload["certificate"] = {{"weights", arb.certificate.weights},
                              {"worst_excess", arb.certificate.worst_excess}};
    code = 2;
  }
  return {code, emit(payload, as_json), {}};
}

struct BinomialArgs {
  double s0 = 0, u = 0, d = 0, r = 0, up = 0, down = 0;
};

CommandResult cmd_binomial(const BinomialArgs& a, bool replicate, bool as_json) {
  const binomial::OnePeriodMarket mkt{a.s0, a.u, a.d, a.r};
  json payload;
  payload["pi"] = binomial::risk_neutral_prob(mkt);
  const double price = binomial::price_european(mkt, a.up, a.down);
  payload["price"] = price;
  if (replicate) {
    const auto plan = binomial::replicate(mkt, a.up, a.down);
    payload["delta"] = plan.delta;
    payload["bank"] = plan.bank;
    payload["cost"] = plan.cost;
  } else {
    payload["martingale_residual"] = binomial::martingale_identity_check(mkt, price, a.up, a.down);
  }
  return {0, emit(payload, as_json), {}};
}

struct GbmArgs {
  int process = 1;
  double s0 = 100.0, alpha = 0.0, sigma = 0.0, r = 0.0, t = 1.0, strike = 100.0;
  std::size_t paths = 0;
  int steps = 1;
  int rebalances = 64;
  std::uint64_t seed = kDefaultSeed;
  std::string scheme = "exact";
  std::string out;
};

gbm::ProcessSpec spec_from(const GbmArgs& a) {
  gbm::ProcessSpec spec;
  spec.process = a.process == 1 ? gbm::ProcessCase::Case1
                 : a.process == 2 ? gbm::ProcessCase::Case2
                                  : gbm::ProcessCase::Case3;
  spec.s0 = a.s0;
  spec.alpha = spec.process == gbm::ProcessCase::Case3 ? 0.0 : a.alpha;
  spec.sigma = a.sigma;
  gbm::validate(spec);
  if (!std::isfinite(a.r)) throw Error(ErrorKind::InvalidParams, "--r must be finite");
  return spec;
}

CommandResult cmd_gbm_check(const GbmArgs& a, bool as_json) {
  const gbm::ProcessSpec spec = spec_from(a);
  const double residual = gbm::no_arb_residual(spec, a.r);
  const bool holds = std::abs(residual) <= 1e-12;
  json payload;
  payload["case"] = a.process;
  payload["constraint"] = std::string(gbm::constraint_text(spec.process));
  payload["residual"] = residual;
  payload["holds"] = holds;
  payload["message"] = "constraint " + std::string(gbm::constraint_text(spec.process)) +
                       (holds ? " holds" : " violated");
  payload["expected_terminal"] = gbm::expected_terminal(spec, a.t);
  payload["deflator"] = gbm::deflator(spec, a.t);
  if (a.paths > 0) {
    const auto rep = gbm::mc_martingale_check(spec, a.t, a.paths, a.seed);
    payload["martingale"] = {{"deflated_mean", rep.deflated_mean}, {"std_error", rep.std_error},
                             {"z_score", rep.z_score}, {"paths", rep.paths}, {"seed", rep.seed}};
  }
  CommandResult res{holds ? 0 : 2, emit(payload, as_json), {}};
  if (!holds) res.err = payload["message"].get<std::string>() + "\n";
  return res;
}

CommandResult cmd_gbm_simulate(const GbmArgs& a, bool as_json) {
  const gbm::ProcessSpec spec = spec_from(a);
  const auto scheme = a.scheme == "euler" ? gbm::Scheme::Euler : gbm::Scheme::Exact;
  const std::size_t paths = a.paths > 0 ? a.paths : 10000;
  const auto samples = gbm::simulate_paths(spec, a.t, a.steps, paths, a.seed, scheme);
  double sum = 0.0;
  for (double v : samples.terminals) sum += v;
  json payload;
  payload["scheme"] = a.scheme;
  payload["paths"] = paths;
  payload["steps"] = a.steps;
  payload["seed"] = a.seed;
  payload["mean_terminal"] = sum / static_cast<double>(paths);
  payload["expected_terminal"] = gbm::expected_terminal(spec, a.t);
  payload["non_positive"] = samples.non_positive;
  if (!a.out.empty()) {
    write_file(a.out, gbm::samples_to_csv(samples));
    payload["csv"] = a.out;
  }
  return {0, emit(payload, as_json), {}};
}

CommandResult cmd_gbm_hedge(const GbmArgs& a, bool as_json) {
  const gbm::ProcessSpec spec = spec_from(a);
  const std::size_t paths = a.paths > 0 ? a.paths : 10000;
  const auto res = gbm::delta_hedge_simulate(spec, {a.strike, a.t, bsm::OptionKind::Call}, a.r,
                                             a.rebalances, paths, a.seed);
  json payload;
  payload["rebalances"] = res.rebalances;
  payload["paths"] = paths;
  payload["seed"] = a.seed;
  payload["premium"] = bsm::price_call(spec.s0, a.strike, a.r, spec.sigma, a.t);
  payload["error_mean"] = res.error_mean;
  payload["error_std"] = res.error_std;
  payload["mean_std_error"] = res.mean_std_error;
  return {0, emit(payload, as_json), {}};
}

struct OptionArgs {
  double s0 = 0, strike = 0, r = 0, sigma = 0, t = 0;
  std::string kind = "call";
  bool oracle = false;
  double s_max = 0.0;
  int m = 400, n = 400;
  std::string out;
};

CommandResult cmd_bsm_price(const OptionArgs& a, bool as_json) {
  const bool is_call = a.kind == "call";
  json payload;
  payload["kind"] = a.kind;
  const double price = is_call ? bsm::price_call(a.s0, a.strike, a.r, a.sigma, a.t)
                               : bsm::price_put(a.s0, a.strike, a.r, a.sigma, a.t);
  payload["price"] = price;
  if (a.strike > 0.0) {
    const auto d = bsm::d1_d2(a.s0, a.strike, a.r, a.sigma, a.t);
    payload["d1"] = d.d1;
    payload["d2"] = d.d2;
  }
  const double call_delta = bsm::delta(a.s0, a.strike, a.r, a.sigma, a.t);
  payload["delta"] = is_call ? call_delta : call_delta - 1.0;
  if (a.oracle) {
    const double alpha = a.r - 0.5 * a.sigma * a.sigma;
    const double q = std::exp(-a.r * a.t) *
                     bsm::quadrature_oracle(a.s0, a.strike, alpha, a.sigma, a.t,
                                            is_call ? bsm::OptionKind::Call : bsm::OptionKind::Put);
    payload["oracle"] = {{"quadrature", q}, {"deviation", q - price}};
  }
  return {0, emit(payload, as_json), {}};
}

CommandResult cmd_pde_solve(const OptionArgs& a, bool as_json) {
  pde::SolverConfig cfg = pde::default_config(a.s0, a.strike);
  if (a.s_max > 0.0) cfg.s_max = a.s_max;
  cfg.space_steps = a.m;
  cfg.time_steps = a.n;
  if (!(cfg.s_max > a.s0)) throw Error(ErrorKind::InvalidParams, "--smax must exceed --s0");
  const auto kind = a.kind == "call" ? bsm::OptionKind::Call : bsm::OptionKind::Put;
  const auto sol = pde::solve(kind, a.strike, a.r, a.sigma, a.t, cfg);
  const double grid_price = pde::price_at(sol, 0.0, a.s0);
  const double closed = kind == bsm::OptionKind::Call ? bsm::price_call(a.s0, a.strike, a.r, a.sigma, a.t)
                                                      : bsm::price_put(a.s0, a.strike, a.r, a.sigma, a.t);
  json payload;
  payload["kind"] = a.kind;
  payload["s_max"] = cfg.s_max;
  payload["space_steps"] = cfg.space_steps;
  payload["time_steps"] = cfg.time_steps;
  payload["price"] = grid_price;
  payload["closed_form"] = closed;
  payload["error"] = grid_price - closed;
  if (a.s0 >= sol.ds() && a.s0 <= sol.s_max() - sol.ds()) {
    payload["delta"] = pde::solution_delta(sol, 0.0, a.s0);
  }
  if (!a.out.empty()) {
    write_file(a.out, pde::surface_to_csv(sol));
    payload["csv"] = a.out;
  }
  return {0, emit(payload, as_json), {}};
}

void add_json_flag(CLI::App* app, Flags& flags) {
  app->add_flag("--json", flags.json, "Emit one JSON object with full-precision numbers");
}

}  // namespace

gordan::Market one_period_market() {
  const binomial::OnePeriodMarket mkt{100.0, 1.2, 0.8, 0.03};
  gordan::Market market;
  market.rate = 0.03;
  market.states = 2;
  const double growth = std::exp(0.03);
  market.assets = {
      {"bond", 1.0, {growth, growth}},
      {"stock", 100.0, {120.0, 80.0}},
      {"call", binomial::price_european(mkt, 10.0, 0.0), {10.0, 0.0}},
      {"put", binomial::price_european(mkt, 0.0, 30.0), {0.0, 30.0}},
  };
  return market;
}

CommandResult xcheck(bool as_json) {
  std::vector<Row> rows;
  try {
    rows = xcheck_rows();
  } catch (const std::exception& e) {
    return {3, {}, std::string("xcheck: engine failure: ") + e.what() + "\n"};
  }
  bool all = true;
  for (const auto& r : rows) all = all && r.pass();

  if (as_json) {
    json payload;
    payload["pass"] = all;
    payload["rows"] = json::array();
    for (const auto& r : rows) {
      payload["rows"].push_back({{"name", r.name}, {"value", r.value}, {"reference", r.reference},
                                 {"deviation", r.deviation()}, {"tolerance", r.tolerance},
                                 {"pass", r.pass()}});
    }
    return {all ? 0 : 3, payload.dump() + "\n", {}};
  }

  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-22s %14s %14s %12s %10s  %s\n", "check", "value", "reference",
                "deviation", "tolerance", "result");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-22s %14.6f %14.6f %12.3e %10.1e  %s\n", r.name.c_str(), r.value,
                  r.reference, r.deviation(), r.tolerance, r.pass() ? "PASS" : "FAIL");
    os << line;
  }
  os << (all ? "all checks passed\n" : "some checks FAILED\n");
  return {all ? 0 : 3, os.str(), {}};
}

CommandResult run(const std::vector<std::string>& argv) {
  CLI::App app{"noarb: no-arbitrage pricing and verification toolkit", "noarb"};
  app.require_subcommand(1);
  app.footer(
      "Conventions: binomial --r is the continuously compounded rate over the single period.\n"
      "gbm/bsm/pde rates and sigma are per unit of --t.\n"
      "Exit codes: 0 ok, 1 invalid input, 2 arbitrage or constraint violation detected,\n"
      "3 numerical failure.");

  Flags flags;
  std::function<CommandResult()> action;

  // gordan
  auto* gordan_cmd = app.add_subcommand("gordan", "Arbitrage (Gordan) theorem dichotomy");
  gordan_cmd->require_subcommand(1);
  std::string market_path;
  auto* classify = gordan_cmd->add_subcommand("classify", "Classify a market definition file");
  classify->add_option("market", market_path, "Market JSON file")->required();
  add_json_flag(classify, flags);
  classify->callback([&] { action = [&] { return cmd_gordan_classify(market_path, flags.json); }; });

  // binomial
  BinomialArgs bin;
  auto* binomial_cmd = app.add_subcommand("binomial", "One-period binomial model (--r per period)");
  binomial_cmd->require_subcommand(1);
  for (const char* name : {"price", "replicate"}) {
    auto* sub = binomial_cmd->add_subcommand(name, std::string(name) + " a claim paying --up / --down");
    sub->add_option("--s0", bin.s0, "Spot price")->required();
    sub->add_option("--u", bin.u, "Up factor")->required();
    sub->add_option("--d", bin.d, "Down factor")->required();
    sub->add_option("--r", bin.r, "Continuously compounded rate over the period")->required();
    sub->add_option("--up", bin.up, "Payoff in the up state")->required();
    sub->add_option("--down", bin.down, "Payoff in the down state")->required();
    add_json_flag(sub, flags);
    const bool is_replicate = std::string(name) == "replicate";
    sub->callback([&, is_replicate] { action = [&, is_replicate] { return cmd_binomial(bin, is_replicate, flags.json); }; });
  }

  // gbm
  GbmArgs g;
  auto* gbm_cmd = app.add_subcommand("gbm", "Geometric Brownian motion cases 1-3 (rates per unit --t)");
  gbm_cmd->require_subcommand(1);
  auto add_gbm_common = [&](CLI::App* sub) {
    sub->add_option("--case", g.process, "Process case 1, 2 or 3")->required()->check(CLI::Range(1, 3));
    sub->add_option("--s0", g.s0, "Spot price")->capture_default_str();
    sub->add_option("--alpha", g.alpha, "Drift parameter alpha (ignored by case 3)")->capture_default_str();
    sub->add_option("--sigma", g.sigma, "Volatility")->required();
    sub->add_option("--r", g.r, "Risk-free rate")->capture_default_str();
    sub->add_option("--t", g.t, "Horizon / maturity")->capture_default_str();
    sub->add_option("--paths", g.paths, "Monte Carlo paths");
    sub->add_option("--seed", g.seed, "RNG seed")->envname("NOARB_SEED")->capture_default_str();
    add_json_flag(sub, flags);
  };
  auto* check = gbm_cmd->add_subcommand("check", "No-arbitrage residual (and martingale MC with --paths)");
  add_gbm_common(check);
  check->callback([&] { action = [&] { return cmd_gbm_check(g, flags.json); }; });
  auto* simulate = gbm_cmd->add_subcommand("simulate", "Simulate terminal prices");
  add_gbm_common(simulate);
  simulate->add_option("--steps", g.steps, "Time steps (Euler)")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--scheme", g.scheme, "exact or euler")->check(CLI::IsMember({"exact", "euler"}))->capture_default_str();
  simulate->add_option("--out", g.out, "Write terminal samples as CSV");
  simulate->callback([&] { action = [&] { return cmd_gbm_simulate(g, flags.json); }; });
  auto* hedge = gbm_cmd->add_subcommand("hedge", "Discrete delta-hedge replication of a call");
  add_gbm_common(hedge);
  hedge->add_option("--k", g.strike, "Strike")->capture_default_str();
  hedge->add_option("--rebalances", g.rebalances, "Rebalance dates")->capture_default_str()->check(CLI::PositiveNumber);
  hedge->callback([&] { action = [&] { return cmd_gbm_hedge(g, flags.json); }; });

  // bsm
  OptionArgs opt;
  auto add_option_common = [&](CLI::App* sub) {
    sub->add_option("--s0", opt.s0, "Spot price")->required();
    sub->add_option("--k", opt.strike, "Strike")->required();
    sub->add_option("--r", opt.r, "Risk-free rate per unit --t")->required();
    sub->add_option("--sigma", opt.sigma, "Volatility")->required();
    sub->add_option("--t", opt.t, "Maturity")->required();
    sub->add_option("--kind", opt.kind, "call or put")->check(CLI::IsMember({"call", "put"}))->capture_default_str();
    add_json_flag(sub, flags);
  };
  auto* bsm_cmd = app.add_subcommand("bsm", "Closed-form Black-Scholes-Merton");
  bsm_cmd->require_subcommand(1);
  auto* bsm_price = bsm_cmd->add_subcommand("price", "Price a European option");
  add_option_common(bsm_price);
  bsm_price->add_flag("--oracle", opt.oracle, "Also evaluate the quadrature oracle");
  bsm_price->callback([&] { action = [&] { return cmd_bsm_price(opt, flags.json); }; });

  // pde
  auto* pde_cmd = app.add_subcommand("pde", "Finite-difference solver");
  pde_cmd->require_subcommand(1);
  auto* pde_solve = pde_cmd->add_subcommand("solve", "Crank-Nicolson solve and price at (0, s0)");
  add_option_common(pde_solve);
  pde_solve->add_option("--smax", opt.s_max, "Grid upper bound (default 4 max(s0, k))");
  pde_solve->add_option("--m", opt.m, "Price intervals")->capture_default_str();
  pde_solve->add_option("--n", opt.n, "Time steps")->capture_default_str();
  pde_solve->add_option("--out", opt.out, "Write the value surface as CSV");
  pde_solve->callback([&] { action = [&] { return cmd_pde_solve(opt, flags.json); }; });

  // xcheck
  auto* xcheck_cmd = app.add_subcommand("xcheck", "Reproduce the worked example and cross-check engines");
  add_json_flag(xcheck_cmd, flags);
  xcheck_cmd->callback([&] { action = [&] { return xcheck(flags.json); }; });

  std::vector<const char*> raw;
  raw.reserve(argv.size() + 1);
  if (argv.empty()) raw.push_back("noarb");
  for (const auto& a : argv) raw.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    if (app.exit(e, out, err) == 0) return {0, out.str(), err.str()};
    return {1, out.str(), err.str()};
  }

  if (!action) return {1, {}, "error: no command given\n"};
  try {
    return action();
  } catch (const Error& e) {
    return {exit_code_for(e.kind()), {}, std::string(to_string(e.kind())) + ": " + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {3, {}, std::string("numerical failure: ") + e.what() + "\n"};
  }
}

}  // namespace noarb::cli

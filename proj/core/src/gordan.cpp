#include "noarb/gordan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "noarb/error.hpp"
#include "noarb/simplex.hpp"

namespace noarb::gordan {
namespace {

int pivot_cap(const PayoffMatrix& m, const Tolerances& tol) {
  if (tol.max_iterations > 0) return tol.max_iterations;
  return static_cast<int>(10 * (m.asset_count() + m.state_count()));
}

lp::Options lp_options(const PayoffMatrix& m, const Tolerances& tol) {
  lp::Options opt;
  opt.feasibility_tol = tol.feasibility;
  opt.max_iterations = pivot_cap(m, tol);
  opt.reverse_column_order = tol.reverse_pivot_order;
  return opt;
}

struct MarginSolve {
  double margin = 0.0;
  std::vector<double> weights;
};

MarginSolve solve_margin_lp(const PayoffMatrix& m, const Tolerances& tol) {
  const std::size_t n = m.asset_count();
  const std::size_t states = m.state_count();

  // Substitute x_j = y_j - 1 so that every variable is nonnegative:
  // y in [0, 2]^n, t >= 0 (x = 0, t = 0 is always feasible).
  lp::Problem problem;
  problem.variables = n + 1;
  problem.objective.assign(n + 1, 0.0);
  problem.objective[n] = 1.0;
  for (std::size_t i = 0; i < states; ++i) {
    lp::Constraint c;
    c.coeffs.assign(n + 1, 0.0);
    double shift = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      c.coeffs[j] = m.at(j, i);
      shift += m.at(j, i);
    }
    c.coeffs[n] = -1.0;
    c.relation = lp::Relation::GreaterEqual;
    c.rhs = shift;
    problem.constraints.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < n; ++j) {
    lp::Constraint c;
    c.coeffs.assign(n + 1, 0.0);
    c.coeffs[j] = 1.0;
    c.relation = lp::Relation::LessEqual;
    c.rhs = 2.0;
    problem.constraints.push_back(std::move(c));
  }

  const lp::Solution sol = lp::solve(problem, lp_options(m, tol));
  if (sol.status != lp::Status::Optimal) {
    throw Error(ErrorKind::NumericalFailure,
                "arbitrage LP did not reach an optimum within " +
                    std::to_string(pivot_cap(m, tol)) + " pivots");
  }
  MarginSolve out;
  out.margin = sol.x[n];
  out.weights.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.weights[j] = sol.x[j] - 1.0;
  return out;
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, what + " is not finite");
}

}  // namespace

PayoffMatrix PayoffMatrix::from_entries(std::size_t assets, std::size_t states,
                                        std::vector<double> entries, double rate) {
  if (assets == 0 || states < 2) {
    throw Error(ErrorKind::InvalidParams, "payoff matrix needs at least one asset and two states");
  }
  if (entries.size() != assets * states) {
    throw Error(ErrorKind::MismatchedStates, "entry count does not match assets x states");
  }
  for (double e : entries) require_finite(e, "matrix entry");
  return PayoffMatrix(assets, states, std::move(entries), rate);
}

double PayoffMatrix::measure_residual(std::span<const double> probabilities) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < assets_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < states_; ++i) s += at(j, i) * probabilities[i];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

double PayoffMatrix::worst_excess(std::span<const double> weights) const {
  double worst = INFINITY;
  for (std::size_t i = 0; i < states_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < assets_; ++j) s += at(j, i) * weights[j];
    worst = std::min(worst, s);
  }
  return worst;
}

PayoffMatrix build_excess_matrix(std::span<const AssetQuote> quotes, double rate) {
  if (quotes.empty()) throw Error(ErrorKind::InvalidParams, "market has no assets");
  require_finite(rate, "rate");
  const std::size_t states = quotes.front().payoffs.size();
  if (states < 2) throw Error(ErrorKind::InvalidParams, "market needs at least two states");

  const double growth = std::exp(rate);
  std::vector<double> entries;
  entries.reserve(quotes.size() * states);
  for (const auto& q : quotes) {
    if (q.payoffs.size() != states) {
      throw Error(ErrorKind::MismatchedStates,
                  "asset '" + q.name + "' has " + std::to_string(q.payoffs.size()) +
                      " payoffs, expected " + std::to_string(states));
    }
    require_finite(q.price0, "price0 of '" + q.name + "'");
    if (q.price0 < 0.0) throw Error(ErrorKind::InvalidParams, "price0 of '" + q.name + "' is negative");
    const double forward = growth * q.price0;
    for (double payoff : q.payoffs) {
      require_finite(payoff, "payoff of '" + q.name + "'");
      entries.push_back(payoff - forward);
    }
  }
  return PayoffMatrix(quotes.size(), states, std::move(entries), rate);
}

std::optional<StateMeasure> solve_state_measure(const PayoffMatrix& m, const Tolerances& tol) {
  const std::size_t n = m.asset_count();
  const std::size_t states = m.state_count();

  lp::Problem problem;
  problem.variables = states;
  for (std::size_t j = 0; j < n; ++j) {
    lp::Constraint c;
    c.coeffs.assign(m.row(j).begin(), m.row(j).end());
    c.relation = lp::Relation::Equal;
    c.rhs = 0.0;
    problem.constraints.push_back(std::move(c));
  }
  lp::Constraint simplex_row;
  simplex_row.coeffs.assign(states, 1.0);
  simplex_row.relation = lp::Relation::Equal;
  simplex_row.rhs = 1.0;
  problem.constraints.push_back(std::move(simplex_row));

  const lp::Solution sol = lp::solve(problem, lp_options(m, tol));
  if (sol.status == lp::Status::IterationLimit) {
    throw Error(ErrorKind::NumericalFailure, "state-measure LP hit the pivot cap");
  }
  if (sol.status != lp::Status::Optimal) return std::nullopt;

  StateMeasure measure;
  measure.probabilities = sol.x;
  double total = 0.0;
  for (double p : measure.probabilities) total += p;
  if (!(total > 0.0)) return std::nullopt;
  for (double& p : measure.probabilities) p /= total;
  measure.residual = m.measure_residual(measure.probabilities);
  if (measure.residual > tol.feasibility) return std::nullopt;
  measure.unique = check_completeness(m, tol);
  return measure;
}

double arbitrage_margin(const PayoffMatrix& m, const Tolerances& tol) {
  return solve_margin_lp(m, tol).margin;
}

std::optional<ArbitrageCertificate> find_arbitrage(const PayoffMatrix& m, const Tolerances& tol) {
  MarginSolve lp = solve_margin_lp(m, tol);
  double norm = 0.0;
  for (double w : lp.weights) norm = std::max(norm, std::abs(w));
  if (lp.margin <= tol.positivity || norm == 0.0) return std::nullopt;
  for (double& w : lp.weights) w /= norm;
  ArbitrageCertificate cert;
  cert.worst_excess = m.worst_excess(lp.weights);
  cert.weights = std::move(lp.weights);
  if (cert.worst_excess <= tol.positivity) return std::nullopt;
  return cert;
}

std::size_t numerical_rank(const PayoffMatrix& m, double rel_tol) {
  const std::size_t rows = m.asset_count();
  const std::size_t cols = m.state_count();
  std::vector<double> a(m.entries().begin(), m.entries().end());
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  const double threshold = rel_tol * scale;

  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (std::abs(a[r * cols + c]) > std::abs(a[pivot * cols + c])) pivot = r;
    }
    if (std::abs(a[pivot * cols + c]) <= threshold) continue;
    if (pivot != rank) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(a[pivot * cols + k], a[rank * cols + k]);
    }
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const double f = a[r * cols + c] / a[rank * cols + c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < cols; ++k) a[r * cols + k] -= f * a[rank * cols + k];
    }
    ++rank;
  }
  return rank;
}

bool check_completeness(const PayoffMatrix& m, const Tolerances& tol) {
  return numerical_rank(m, tol.rank) + 1 == m.state_count();
}

Classification classify_market(std::span<const AssetQuote> quotes, double rate, const Tolerances& tol) {
  const PayoffMatrix m = build_excess_matrix(quotes, rate);
  if (auto measure = solve_state_measure(m, tol)) {
    const bool complete = measure->unique;
    return NoArbitrage{std::move(*measure), complete};
  }
  if (auto cert = find_arbitrage(m, tol)) return Arbitrage{std::move(*cert)};
  throw Error(ErrorKind::NumericalFailure,
              "market sits on the arbitrage boundary: neither a state measure nor a "
              "strictly positive portfolio was found within tolerance");
}

Market parse_market_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidParams, std::string("market file is not valid JSON: ") + e.what());
  }
  auto number = [](const nlohmann::json& node, const char* key) {
    if (!node.contains(key) || !node.at(key).is_number()) {
      throw Error(ErrorKind::InvalidParams, std::string("market field '") + key + "' must be a number");
    }
    return node.at(key).get<double>();
  };

  if (!doc.is_object()) throw Error(ErrorKind::InvalidParams, "market file must hold a JSON object");
  Market market;
  market.rate = number(doc, "rate");
  if (!doc.contains("states") || !doc.at("states").is_number_unsigned()) {
    throw Error(ErrorKind::InvalidParams, "market field 'states' must be a positive integer");
  }
  market.states = doc.at("states").get<std::size_t>();
  if (market.states < 2) throw Error(ErrorKind::InvalidParams, "market needs at least two states");
  if (!doc.contains("assets") || !doc.at("assets").is_array() || doc.at("assets").empty()) {
    throw Error(ErrorKind::InvalidParams, "market field 'assets' must be a non-empty array");
  }
  for (const auto& node : doc.at("assets")) {
    if (!node.is_object()) throw Error(ErrorKind::InvalidParams, "each asset must be an object");
    AssetQuote q;
    q.name = node.value("name", std::string("asset") + std::to_string(market.assets.size()));
    q.price0 = number(node, "price0");
    if (!node.contains("payoffs") || !node.at("payoffs").is_array()) {
      throw Error(ErrorKind::InvalidParams, "asset '" + q.name + "' needs a 'payoffs' array");
    }
    for (const auto& v : node.at("payoffs")) {
      if (!v.is_number()) throw Error(ErrorKind::InvalidParams, "payoffs of '" + q.name + "' must be numbers");
      q.payoffs.push_back(v.get<double>());
    }
    if (q.payoffs.size() != market.states) {
      throw Error(ErrorKind::MismatchedStates,
                  "asset '" + q.name + "' has " + std::to_string(q.payoffs.size()) +
                      " payoffs but the market declares " + std::to_string(market.states) + " states");
    }
    market.assets.push_back(std::move(q));
  }
  return market;
}

Market load_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidParams, "cannot open market file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_market_json(buf.str());
}

std::string market_to_json(const Market& market) {
  nlohmann::json doc;
  doc["rate"] = market.rate;
  doc["states"] = market.states;
  doc["assets"] = nlohmann::json::array();
  for (const auto& q : market.assets) {
    doc["assets"].push_back({{"name", q.name}, {"price0", q.price0}, {"payoffs", q.payoffs}});
  }
  return doc.dump(2);
}

}  // namespace noarb::gordan

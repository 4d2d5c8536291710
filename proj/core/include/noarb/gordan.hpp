#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace noarb::gordan {

/// One traded asset: price today and payoff in each terminal state.
struct AssetQuote {
  std::string name;
  double price0 = 0.0;
  std::vector<double> payoffs;
};

/// Excess-payoff table, assets as rows and states as columns:
/// entry (j, i) = payoff_j(i) - e^rate * price0_j.
class PayoffMatrix {
 public:
  /// Wraps raw excess payoffs (row-major, assets x states). Mostly useful for
  /// synthetic markets in tests and benchmarks.
  static PayoffMatrix from_entries(std::size_t assets, std::size_t states,
                                   std::vector<double> entries, double rate = 0.0);

  std::size_t asset_count() const noexcept { return assets_; }
  std::size_t state_count() const noexcept { return states_; }
  double rate() const noexcept { return rate_; }
  double at(std::size_t asset, std::size_t state) const { return entries_[asset * states_ + state]; }
  std::span<const double> row(std::size_t asset) const {
    return {entries_.data() + asset * states_, states_};
  }
  std::span<const double> entries() const noexcept { return entries_; }

  /// max_j |sum_i entry(j, i) * p_i|
  double measure_residual(std::span<const double> probabilities) const;
  /// min_i sum_j entry(j, i) * x_j
  double worst_excess(std::span<const double> weights) const;

 private:
  friend PayoffMatrix build_excess_matrix(std::span<const AssetQuote>, double);
  PayoffMatrix(std::size_t assets, std::size_t states, std::vector<double> entries, double rate)
      : assets_(assets), states_(states), rate_(rate), entries_(std::move(entries)) {}

  std::size_t assets_ = 0;
  std::size_t states_ = 0;
  double rate_ = 0.0;
  std::vector<double> entries_;
};

struct StateMeasure {
  std::vector<double> probabilities;
  bool unique = false;
  double residual = 0.0;
};

struct ArbitrageCertificate {
  std::vector<double> weights;  // normalized so that max |w| = 1
  double worst_excess = 0.0;
};

struct Tolerances {
  double feasibility = 1e-9;
  double positivity = 1e-9;
  double rank = 1e-9;
  /// Pivot cap for each LP; 0 selects 10 * (assets + states).
  int max_iterations = 0;
  /// Run the simplex with the reversed Bland ordering (different pivot path).
  bool reverse_pivot_order = false;
};

/// Throws Error{MismatchedStates} on ragged payoffs, Error{NonFinite} on
/// NaN/inf inputs and Error{InvalidParams} on an empty market, fewer than two
/// states or a negative price.
PayoffMatrix build_excess_matrix(std::span<const AssetQuote> quotes, double rate);

/// System 2: p >= 0, sum p = 1, A^T p = 0. nullopt when infeasible, which by
/// the theorem of alternatives means an arbitrage portfolio exists.
std::optional<StateMeasure> solve_state_measure(const PayoffMatrix& m, const Tolerances& tol = {});

/// System 1: max t s.t. (Ax)_i >= t for all states, |x_j| <= 1. Returns a
/// certificate iff the optimum exceeds the positivity tolerance.
/// Throws Error{NumericalFailure} when the LP hits the pivot cap.
std::optional<ArbitrageCertificate> find_arbitrage(const PayoffMatrix& m, const Tolerances& tol = {});

/// Optimal t of the System 1 LP (0 when no arbitrage exists).
double arbitrage_margin(const PayoffMatrix& m, const Tolerances& tol = {});

/// Rank by Gaussian elimination with partial pivoting; pivots at or below
/// rel_tol * max|entry| count as zero.
std::size_t numerical_rank(const PayoffMatrix& m, double rel_tol = 1e-9);

/// rank == states - 1, i.e. the state measure is unique.
bool check_completeness(const PayoffMatrix& m, const Tolerances& tol = {});

struct NoArbitrage {
  StateMeasure measure;
  bool complete = false;
};

struct Arbitrage {
  ArbitrageCertificate certificate;
};

using Classification = std::variant<NoArbitrage, Arbitrage>;

Classification classify_market(std::span<const AssetQuote> quotes, double rate,
                               const Tolerances& tol = {});

// Market-definition files:
// {"rate": 0.03, "states": 2, "assets": [{"name": "stock", "price0": 100,
//  "payoffs": [120, 80]}, ...]}

struct Market {
  double rate = 0.0;
  std::size_t states = 0;
  std::vector<AssetQuote> assets;
};

Market parse_market_json(std::string_view text);
Market load_market_file(const std::string& path);
std::string market_to_json(const Market& market);

}  // namespace noarb::gordan

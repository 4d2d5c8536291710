#include "noarb/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace noarb::lp {
namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  /// Minimizes cost . x over the current basis. `allowed` masks columns that
  /// may enter. Returns Optimal, Unbounded or IterationLimit.
  Status minimize(const std::vector<double>& cost, const std::vector<bool>& allowed,
                  const Options& opt, int& iterations) {
    std::vector<std::size_t> order(cols_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (opt.reverse_column_order) std::reverse(order.begin(), order.end());
    std::vector<std::size_t> rank(cols_);
    for (std::size_t k = 0; k < cols_; ++k) rank[order[k]] = k;

    for (;;) {
      // Bland: first improving column in the configured order.
      std::size_t entering = cols_;
      for (std::size_t j : order) {
        if (!allowed[j]) continue;
        double reduced = cost[j];
        for (std::size_t r = 0; r < rows_; ++r) reduced -= cost[basis_[r]] * at(r, j);
        if (reduced < -opt.pivot_tol) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return Status::Optimal;
      if (iterations >= opt.max_iterations) return Status::IterationLimit;

      std::size_t leaving = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, entering);
        if (a <= opt.pivot_tol) continue;
        const double ratio = std::max(rhs(r), 0.0) / a;
        if (leaving == rows_) {
          leaving = r;
          best = ratio;
          continue;
        }
        const double tie = 1e-12 * (1.0 + best);
        if (ratio < best - tie) {
          leaving = r;
          best = ratio;
        } else if (ratio <= best + tie && rank[basis_[r]] < rank[basis_[leaving]]) {
          leaving = r;
          best = std::min(best, ratio);
        }
      }
      if (leaving == rows_) return Status::Unbounded;
      pivot(leaving, entering);
      ++iterations;
    }
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) v += cost[basis_[r]] * rhs(r);
    return v;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  const std::size_t n = problem.variables;
  const std::size_t m = problem.constraints.size();

  // Equilibrate rows and flip them so every right-hand side is nonnegative.
  std::vector<Constraint> rows = problem.constraints;
  for (auto& row : rows) {
    row.coeffs.resize(n, 0.0);
    double scale = 0.0;
    for (double a : row.coeffs) scale = std::max(scale, std::abs(a));
    if (scale > 0.0) {
      for (double& a : row.coeffs) a /= scale;
      row.rhs /= scale;
    }
    if (row.rhs < 0.0) {
      for (double& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.relation == Relation::LessEqual) {
        row.relation = Relation::GreaterEqual;
      } else if (row.relation == Relation::GreaterEqual) {
        row.relation = Relation::LessEqual;
      }
    }
  }

  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (const auto& row : rows) {
    if (row.relation != Relation::Equal) ++slack_count;
    if (row.relation != Relation::LessEqual) ++artificial_count;
  }
  const std::size_t first_slack = n;
  const std::size_t first_artificial = n + slack_count;
  const std::size_t cols = first_artificial + artificial_count;

  Tableau tab(m, cols);
  std::size_t next_slack = first_slack;
  std::size_t next_artificial = first_artificial;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = rows[r];
    for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = row.coeffs[j];
    tab.rhs(r) = row.rhs;
    switch (row.relation) {
      case Relation::LessEqual:
        tab.at(r, next_slack) = 1.0;
        tab.basis()[r] = next_slack++;
        break;
      case Relation::GreaterEqual:
        tab.at(r, next_slack++) = -1.0;
        tab.at(r, next_artificial) = 1.0;
        tab.basis()[r] = next_artificial++;
        break;
      case Relation::Equal:
        tab.at(r, next_artificial) = 1.0;
        tab.basis()[r] = next_artificial++;
        break;
    }
  }

  Solution solution;
  int iterations = 0;

  // Phase 1: minimize the sum of artificials.
  std::vector<double> phase1_cost(cols, 0.0);
  for (std::size_t j = first_artificial; j < cols; ++j) phase1_cost[j] = 1.0;
  std::vector<bool> allowed(cols, true);
  Status status = tab.minimize(phase1_cost, allowed, options, iterations);
  solution.iterations = iterations;
  if (status == Status::IterationLimit) {
    solution.status = status;
    return solution;
  }
  solution.infeasibility = tab.objective(phase1_cost);
  if (solution.infeasibility > options.feasibility_tol) {
    solution.status = Status::Infeasible;
    return solution;
  }

  // Drive remaining (zero-level) artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < first_artificial) continue;
    std::size_t best = cols;
    double best_abs = options.pivot_tol;
    for (std::size_t j = 0; j < first_artificial; ++j) {
      if (std::abs(tab.at(r, j)) > best_abs) {
        best_abs = std::abs(tab.at(r, j));
        best = j;
      }
    }
    if (best != cols) tab.pivot(r, best);
  }
  for (std::size_t j = first_artificial; j < cols; ++j) allowed[j] = false;

  // Phase 2.
  std::vector<double> phase2_cost(cols, 0.0);
  for (std::size_t j = 0; j < std::min(n, problem.objective.size()); ++j) {
    phase2_cost[j] = -problem.objective[j];
  }
  if (!problem.objective.empty()) {
    status = tab.minimize(phase2_cost, allowed, options, iterations);
    solution.iterations = iterations;
    if (status != Status::Optimal) {
      solution.status = status;
      return solution;
    }
  }

  solution.status = Status::Optimal;
  solution.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) solution.x[tab.basis()[r]] = std::max(tab.rhs(r), 0.0);
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < std::min(n, problem.objective.size()); ++j) {
    obj += problem.objective[j] * solution.x[j];
  }
  solution.objective = obj;
  return solution;
}

}  // namespace noarb::lp

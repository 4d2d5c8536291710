#pragma once

#include <cstddef>
#include <vector>

namespace noarb::lp {

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
// Meant for the tiny LPs of the Gordan dichotomy (a few dozen columns);
// every variable is implicitly nonnegative.

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::Equal;
  double rhs = 0.0;
};

struct Problem {
  std::size_t variables = 0;
  /// Maximized. Empty means a pure feasibility problem (phase 1 only).
  std::vector<double> objective;
  std::vector<Constraint> constraints;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Options {
  /// Phase-1 objective (sum of artificials, on equilibrated rows) above
  /// which the problem is declared infeasible.
  double feasibility_tol = 1e-9;
  /// Entries with magnitude below this are never used as pivots.
  double pivot_tol = 1e-12;
  /// Total pivots over both phases.
  int max_iterations = 1000;
  /// Visit columns in reverse index order during Bland selection. Gives a
  /// different pivot path (and starting basis order) for cross-checks.
  bool reverse_column_order = false;
};

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  double infeasibility = 0.0;
  int iterations = 0;
};

Solution solve(const Problem& problem, const Options& options = {});

}  // namespace noarb::lp

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "noarb/bsm.hpp"

namespace noarb::pde {

enum class Scheme { CrankNicolson, ImplicitEuler };

struct SolverConfig {
  double s_max = 0.0;
  int space_steps = 400;
  int time_steps = 400;
  Scheme scheme = Scheme::CrankNicolson;
};

/// s_max = 4 max(s0, strike), 400 x 400 grid, Crank-Nicolson.
SolverConfig default_config(double s0, double strike);

/// Option values on a uniform (time x price) grid; row n holds t = n T / N.
class GridSolution {
 public:
  GridSolution(std::vector<double> s_grid, std::vector<double> t_grid, std::vector<double> values);

  std::size_t time_nodes() const noexcept { return t_grid_.size(); }
  std::size_t price_nodes() const noexcept { return s_grid_.size(); }
  std::span<const double> s_grid() const noexcept { return s_grid_; }
  std::span<const double> t_grid() const noexcept { return t_grid_; }
  double value(std::size_t t_index, std::size_t s_index) const {
    return values_[t_index * s_grid_.size() + s_index];
  }
  std::span<const double> row(std::size_t t_index) const {
    return {values_.data() + t_index * s_grid_.size(), s_grid_.size()};
  }
  double s_max() const noexcept { return s_grid_.back(); }
  double maturity() const noexcept { return t_grid_.back(); }
  double ds() const noexcept { return s_grid_[1] - s_grid_[0]; }
  double dt() const noexcept { return t_grid_.size() > 1 ? t_grid_[1] - t_grid_[0] : 0.0; }

 private:
  std::vector<double> s_grid_;
  std::vector<double> t_grid_;
  std::vector<double> values_;
};

/// Backward theta-scheme for r c = c_t + r S c_S + sigma^2 S^2 c_SS / 2 from the
/// payoff at T. Crank-Nicolson runs one fully implicit startup step to damp
/// the payoff kink. Dirichlet boundaries: calls c(t,0) = 0,
/// c(t,s_max) = s_max - K e^{-r(T-t)}; puts c(t,0) = K e^{-r(T-t)}, c(t,s_max) = 0.
/// Throws Error{InvalidParams} on a bad config and Error{UnstableConfig} if a
/// tridiagonal solve meets a vanishing pivot.
GridSolution solve(bsm::OptionKind kind, double strike, double rate, double sigma, double maturity,
                   const SolverConfig& config);

GridSolution solve_call(double strike, double rate, double sigma, double maturity,
                        const SolverConfig& config);

/// Bilinear interpolation; exact at nodes. Error{OutOfRange} outside the grid.
double price_at(const GridSolution& sol, double t, double s);

/// Central-difference dV/dS at nodes, interpolated bilinearly. Needs
/// ds <= s <= s_max - ds.
double solution_delta(const GridSolution& sol, double t, double s);

/// Solves the thomas system a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i in place
/// (d becomes x). Exposed for testing.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

/// CSV with header `t,s,value`, row-major by time.
std::string surface_to_csv(const GridSolution& sol);

}  // namespace noarb::pde

#include "noarb/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "noarb/error.hpp"

namespace noarb::pde {
namespace {

struct Cell {
  std::size_t lo = 0;
  double w = 0.0;
};

/// Locates x on a uniform axis with `intervals` cells of width h. Values
/// within 1e-9 cells of a node snap to it, so node queries are exact.
Cell locate(double x, double h, std::size_t intervals) {
  double pos = x / h;
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-9) pos = nearest;
  Cell c;
  if (pos >= static_cast<double>(intervals)) {
    c.lo = intervals == 0 ? 0 : intervals - 1;
    c.w = intervals == 0 ? 0.0 : 1.0;
    return c;
  }
  c.lo = static_cast<std::size_t>(std::floor(pos));
  c.w = pos - static_cast<double>(c.lo);
  return c;
}

}  // namespace

SolverConfig default_config(double s0, double strike) {
  SolverConfig c;
  c.s_max = 4.0 * std::max(s0, strike);
  return c;
}

GridSolution::GridSolution(std::vector<double> s_grid, std::vector<double> t_grid,
                           std::vector<double> values)
    : s_grid_(std::move(s_grid)), t_grid_(std::move(t_grid)), values_(std::move(values)) {}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  std::vector<double> c_prime(n, 0.0);
  double pivot = diag[0];
  if (!(std::abs(pivot) > 1e-300) || !std::isfinite(pivot)) {
    throw Error(ErrorKind::UnstableConfig, "tridiagonal system is singular");
  }
  c_prime[0] = upper[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c_prime[i - 1];
    if (!(std::abs(pivot) > 1e-300) || !std::isfinite(pivot)) {
      throw Error(ErrorKind::UnstableConfig, "tridiagonal system is singular");
    }
    c_prime[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c_prime[i] * rhs[i + 1];
}

GridSolution solve(bsm::OptionKind kind, double strike, double rate, double sigma, double maturity,
                   const SolverConfig& config) {
  for (double v : {strike, rate, sigma, maturity, config.s_max}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParams, "solver inputs must be finite");
  }
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidParams, "sigma must be positive");
  if (!(maturity > 0.0)) throw Error(ErrorKind::InvalidParams, "maturity must be positive");
  if (strike < 0.0) throw Error(ErrorKind::InvalidParams, "strike must be nonnegative");
  if (!(config.s_max > strike)) throw Error(ErrorKind::InvalidParams, "s_max must exceed the strike");
  if (config.space_steps < 4) throw Error(ErrorKind::InvalidParams, "need at least 4 price intervals");
  if (config.time_steps < 1) throw Error(ErrorKind::InvalidParams, "need at least 1 time step");

  const auto m = static_cast<std::size_t>(config.space_steps);
  const auto n = static_cast<std::size_t>(config.time_steps);
  const double ds = config.s_max / static_cast<double>(m);
  const double dt = maturity / static_cast<double>(n);
  const bool is_call = kind == bsm::OptionKind::Call;

  std::vector<double> s_grid(m + 1);
  for (std::size_t i = 0; i <= m; ++i) s_grid[i] = static_cast<double>(i) * ds;
  s_grid[m] = config.s_max;
  std::vector<double> t_grid(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t_grid[k] = static_cast<double>(k) * dt;
  t_grid[n] = maturity;

  std::vector<double> values((n + 1) * (m + 1), 0.0);
  auto row = [&](std::size_t k) { return values.data() + k * (m + 1); };
  for (std::size_t i = 0; i <= m; ++i) {
    row(n)[i] = is_call ? std::max(s_grid[i] - strike, 0.0) : std::max(strike - s_grid[i], 0.0);
  }

  auto lower_bc = [&](double t) { return is_call ? 0.0 : strike * std::exp(-rate * (maturity - t)); };
  auto upper_bc = [&](double t) {
    return is_call ? config.s_max - strike * std::exp(-rate * (maturity - t)) : 0.0;
  };

  // Generator L V_i = a_i V_{i-1} + b_i V_i + c_i V_{i+1} at S_i = i ds.
  const std::size_t interior = m - 1;
  std::vector<double> a(interior), b(interior), c(interior);
  for (std::size_t i = 1; i < m; ++i) {
    const double x = static_cast<double>(i);
    const double diffusion = 0.5 * sigma * sigma * x * x;
    const double convection = 0.5 * rate * x;
    a[i - 1] = diffusion - convection;
    b[i - 1] = -2.0 * diffusion - rate;
    c[i - 1] = diffusion + convection;
  }

  std::vector<double> lower(interior), diag(interior), upper(interior), rhs(interior);
  for (std::size_t k = n; k-- > 0;) {
    const bool startup = (k + 1 == n);
    const double theta = (config.scheme == Scheme::ImplicitEuler || startup) ? 1.0 : 0.5;
    const double* next = row(k + 1);
    double* cur = row(k);
    cur[0] = lower_bc(t_grid[k]);
    cur[m] = upper_bc(t_grid[k]);

    for (std::size_t j = 0; j < interior; ++j) {
      const std::size_t i = j + 1;
      const double explicit_part =
          a[j] * next[i - 1] + b[j] * next[i] + c[j] * next[i + 1];
      rhs[j] = next[i] + (1.0 - theta) * dt * explicit_part;
      lower[j] = -theta * dt * a[j];
      diag[j] = 1.0 - theta * dt * b[j];
      upper[j] = -theta * dt * c[j];
    }
    rhs.front() -= lower.front() * cur[0];
    rhs.back() -= upper.back() * cur[m];
    solve_tridiagonal(lower, diag, upper, rhs);
    std::copy(rhs.begin(), rhs.end(), cur + 1);
  }

  return GridSolution(std::move(s_grid), std::move(t_grid), std::move(values));
}

GridSolution solve_call(double strike, double rate, double sigma, double maturity,
                        const SolverConfig& config) {
  return solve(bsm::OptionKind::Call, strike, rate, sigma, maturity, config);
}

double price_at(const GridSolution& sol, double t, double s) {
  if (!(t >= 0.0 && t <= sol.maturity()) || !(s >= 0.0 && s <= sol.s_max())) {
    throw Error(ErrorKind::OutOfRange, "query point lies outside the solution grid");
  }
  const std::size_t nt = sol.time_nodes() - 1;
  const std::size_t ns = sol.price_nodes() - 1;
  const Cell ct = locate(t, sol.dt(), nt);
  const Cell cs = locate(s, sol.ds(), ns);

  auto along_s = [&](std::size_t ti) {
    const double v0 = sol.value(ti, cs.lo);
    if (cs.w == 0.0) return v0;
    return (1.0 - cs.w) * v0 + cs.w * sol.value(ti, cs.lo + 1);
  };
  const double v0 = along_s(ct.lo);
  if (ct.w == 0.0) return v0;
  return (1.0 - ct.w) * v0 + ct.w * along_s(ct.lo + 1);
}

double solution_delta(const GridSolution& sol, double t, double s) {
  const double ds = sol.ds();
  if (!(t >= 0.0 && t <= sol.maturity()) || !(s >= ds && s <= sol.s_max() - ds)) {
    throw Error(ErrorKind::OutOfRange, "delta query needs an interior price node region");
  }
  const std::size_t nt = sol.time_nodes() - 1;
  const std::size_t ns = sol.price_nodes() - 1;
  const Cell ct = locate(t, sol.dt(), nt);
  // Interior nodes run 1..ns-1; interpolate between neighbouring interior nodes.
  Cell cs = locate(s - ds, ds, ns - 2);
  cs.lo += 1;

  auto nodal = [&](std::size_t ti, std::size_t si) {
    return (sol.value(ti, si + 1) - sol.value(ti, si - 1)) / (2.0 * ds);
  };
  auto along_s = [&](std::size_t ti) {
    const double d0 = nodal(ti, cs.lo);
    if (cs.w == 0.0) return d0;
    return (1.0 - cs.w) * d0 + cs.w * nodal(ti, cs.lo + 1);
  };
  const double d0 = along_s(ct.lo);
  if (ct.w == 0.0) return d0;
  return (1.0 - ct.w) * d0 + ct.w * along_s(ct.lo + 1);
}

std::string surface_to_csv(const GridSolution& sol) {
  std::string out = "t,s,value\n";
  char buf[96];
  for (std::size_t k = 0; k < sol.time_nodes(); ++k) {
    for (std::size_t i = 0; i < sol.price_nodes(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", sol.t_grid()[k], sol.s_grid()[i],
                    sol.value(k, i));
      out += buf;
    }
  }
  return out;
}

}  // namespace noarb::pde

#include "noarb/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "noarb/error.hpp"
#include "noarb/quadrature.hpp"

namespace noarb::gbm {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

/// Runs body(j) for j in [0, count) over contiguous chunks. body must only
/// write to slot j, so the output is independent of the worker count.
template <typename Body>
void for_each_path(std::size_t count, unsigned workers, Body&& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count / 1024, 1)));
  if (workers <= 1) {
    for (std::size_t j = 0; j < count; ++j) body(j);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t j = lo; j < hi; ++j) body(j);
    });
  }
}

struct Moments {
  double mean = 0.0;
  double std_dev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments out;
  if (xs.empty()) return out;
  quad::CompensatedSum sum;
  for (double x : xs) sum.add(x);
  out.mean = sum.value() / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  quad::CompensatedSum sq;
  for (double x : xs) sq.add((x - out.mean) * (x - out.mean));
  out.std_dev = std::sqrt(sq.value() / static_cast<double>(xs.size() - 1));
  return out;
}

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw Error(ErrorKind::InvalidParams, "time must be finite and >= 0");
}

}  // namespace

std::string_view to_string(ProcessCase c) noexcept {
  switch (c) {
    case ProcessCase::Case1: return "case1";
    case ProcessCase::Case2: return "case2";
    case ProcessCase::Case3: return "case3";
  }
  return "unknown";
}

void validate(const ProcessSpec& spec) {
  if (!std::isfinite(spec.s0) || spec.s0 <= 0.0) throw Error(ErrorKind::InvalidParams, "s0 must be positive");
  if (!std::isfinite(spec.sigma) || spec.sigma <= 0.0) {
    throw Error(ErrorKind::InvalidParams, "sigma must be positive");
  }
  if (!std::isfinite(spec.alpha)) throw Error(ErrorKind::InvalidParams, "alpha must be finite");
}

double log_drift(const ProcessSpec& spec) {
  const double half_var = 0.5 * spec.sigma * spec.sigma;
  switch (spec.process) {
    case ProcessCase::Case1: return spec.alpha;
    case ProcessCase::Case2: return spec.alpha - half_var;
    case ProcessCase::Case3: return -half_var;
  }
  return 0.0;
}

double exact_terminal(const ProcessSpec& spec, double t, double z) {
  require_time(t);
  if (t == 0.0) return spec.s0;
  return spec.s0 * std::exp(spec.sigma * std::sqrt(t) * z + log_drift(spec) * t);
}

double deflator(const ProcessSpec& spec, double t) {
  require_time(t);
  switch (spec.process) {
    case ProcessCase::Case1: return std::exp(-(spec.alpha + 0.5 * spec.sigma * spec.sigma) * t);
    case ProcessCase::Case2: return std::exp(-spec.alpha * t);
    case ProcessCase::Case3: return 1.0;
  }
  return 1.0;
}

double expected_terminal(const ProcessSpec& spec, double t) {
  require_time(t);
  switch (spec.process) {
    case ProcessCase::Case1: return spec.s0 * std::exp((spec.alpha + 0.5 * spec.sigma * spec.sigma) * t);
    case ProcessCase::Case2: return spec.s0 * std::exp(spec.alpha * t);
    case ProcessCase::Case3: return spec.s0;
  }
  return spec.s0;
}

double no_arb_residual(const ProcessSpec& spec, double rate) {
  switch (spec.process) {
    case ProcessCase::Case1: return spec.alpha + 0.5 * spec.sigma * spec.sigma - rate;
    case ProcessCase::Case2: return spec.alpha - rate;
    case ProcessCase::Case3: return rate;
  }
  return rate;
}

std::string_view constraint_text(ProcessCase c) noexcept {
  switch (c) {
    case ProcessCase::Case1: return "alpha + sigma^2/2 = r";
    case ProcessCase::Case2: return "alpha = r";
    case ProcessCase::Case3: return "r = 0";
  }
  return "";
}

SdeCoefficients sde_coefficients(const ProcessSpec& spec) {
  SdeCoefficients c;
  c.sigma = spec.sigma;
  switch (spec.process) {
    case ProcessCase::Case1: c.drift_rate = spec.alpha + 0.5 * spec.sigma * spec.sigma; break;
    case ProcessCase::Case2: c.drift_rate = spec.alpha; break;
    case ProcessCase::Case3: c.drift_rate = 0.0; break;
  }
  return c;
}

std::array<std::uint32_t, 4> PathRng::philox(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, path_(path) {}

double PathRng::uniform() noexcept {
  if (buffered_ == 0) {
    const auto out = philox({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                             static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
                            key_);
    ++block_;
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    buffered_ = 2;
  }
  const std::uint64_t bits = buffer_[2 - buffered_--];
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

double PathRng::normal() { return bsm::norm_quantile(uniform()); }

SampleSet simulate_paths(const ProcessSpec& spec, double t, int steps, std::size_t paths,
                         std::uint64_t seed, Scheme scheme, unsigned workers) {
  validate(spec);
  require_time(t);
  if (steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  if (paths < 1) throw Error(ErrorKind::InvalidParams, "paths must be >= 1");

  SampleSet out;
  out.terminals.assign(paths, spec.s0);
  if (t == 0.0) return out;

  if (scheme == Scheme::Exact) {
    for_each_path(paths, workers, [&](std::size_t j) {
      PathRng rng(seed, j);
      out.terminals[j] = exact_terminal(spec, t, rng.normal());
    });
    return out;
  }

  const SdeCoefficients sde = sde_coefficients(spec);
  const double dt = t / steps;
  const double sqrt_dt = std::sqrt(dt);
  for_each_path(paths, workers, [&](std::size_t j) {
    PathRng rng(seed, j);
    double s = spec.s0;
    for (int k = 0; k < steps; ++k) {
      s += sde.drift(s) * dt + sde.diffusion(s) * sqrt_dt * rng.normal();
    }
    out.terminals[j] = s;
  });
  out.non_positive = static_cast<std::size_t>(
      std::count_if(out.terminals.begin(), out.terminals.end(), [](double s) { return s <= 0.0; }));
  return out;
}

MartingaleReport mc_martingale_check(const ProcessSpec& spec, double t, std::size_t paths,
                                     std::uint64_t seed, unsigned workers) {
  if (paths < 100) throw Error(ErrorKind::InvalidParams, "martingale check needs at least 100 paths");
  SampleSet samples = simulate_paths(spec, t, 1, paths, seed, Scheme::Exact, workers);
  const double factor = deflator(spec, t);
  for (double& s : samples.terminals) s *= factor;
  const Moments mom = moments(samples.terminals);

  MartingaleReport report;
  report.paths = paths;
  report.seed = seed;
  report.deflated_mean = mom.mean;
  report.std_error = mom.std_dev / std::sqrt(static_cast<double>(paths));
  const double gap = mom.mean - spec.s0;
  report.z_score = report.std_error > 0.0 ? gap / report.std_error : (gap == 0.0 ? 0.0 : INFINITY);
  return report;
}

HedgeResult delta_hedge_simulate(const ProcessSpec& spec, const bsm::OptionContract& contract,
                                 double rate, int rebalances, std::size_t paths,
                                 std::uint64_t seed, unsigned workers) {
  validate(spec);
  if (contract.kind != bsm::OptionKind::Call) {
    throw Error(ErrorKind::InvalidParams, "delta hedge simulation supports calls only");
  }
  if (!(contract.maturity > 0.0) || !std::isfinite(contract.maturity)) {
    throw Error(ErrorKind::InvalidParams, "maturity must be positive");
  }
  if (!(contract.strike >= 0.0) || !std::isfinite(contract.strike)) {
    throw Error(ErrorKind::InvalidParams, "strike must be nonnegative");
  }
  if (rebalances < 1) throw Error(ErrorKind::InvalidParams, "rebalances must be >= 1");
  if (paths < 1) throw Error(ErrorKind::InvalidParams, "paths must be >= 1");
  const double residual = no_arb_residual(spec, rate);
  if (!(std::abs(residual) <= 1e-12)) {
    throw Error(ErrorKind::ConstraintViolated,
                "constraint " + std::string(constraint_text(spec.process)) +
                    " violated (residual " + std::to_string(residual) + "); refusing to hedge");
  }

  const double maturity = contract.maturity;
  const double strike = contract.strike;
  const double sigma = spec.sigma;
  const double dt = maturity / rebalances;
  const double vol_step = sigma * std::sqrt(dt);
  const double drift_step = log_drift(spec) * dt;
  const double growth = std::exp(rate * dt);
  const double premium = bsm::price_call(spec.s0, strike, rate, sigma, maturity);

  HedgeResult result;
  result.rebalances = rebalances;
  result.terminal_errors.assign(paths, 0.0);
  for_each_path(paths, workers, [&](std::size_t j) {
    PathRng rng(seed, j);
    double s = spec.s0;
    double book = premium;
    for (int k = 0; k < rebalances; ++k) {
      const double remaining = maturity - k * dt;
      const double shares = bsm::delta(s, strike, rate, sigma, remaining);
      const double cash = book - shares * s;
      s *= std::exp(vol_step * rng.normal() + drift_step);
      book = shares * s + cash * growth;
    }
    result.terminal_errors[j] = book - std::max(s - strike, 0.0);
  });

  const Moments mom = moments(result.terminal_errors);
  result.error_mean = mom.mean;
  result.error_std = mom.std_dev;
  result.mean_std_error = mom.std_dev / std::sqrt(static_cast<double>(paths));
  return result;
}

std::string samples_to_csv(const SampleSet& samples) {
  std::string out = "terminal\n";
  char buf[32];
  for (double v : samples.terminals) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

}  // namespace noarb::gbm

#pragma once

#include <cstddef>
#include <cstdint>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "noarb/bsm.hpp"

namespace noarb::gbm {

/// The three geometric Brownian motion parameterizations:
///   Case1: S(t) = S0 exp(sigma W(t) + alpha t)
///   Case2: S(t) = S0 exp(sigma W(t) + (alpha - sigma^2/2) t)
///   Case3: S(t) = S0 exp(sigma W(t) - sigma^2 t / 2)   (alpha unused)
enum class ProcessCase { Case1, Case2, Case3 };

std::string_view to_string(ProcessCase c) noexcept;

struct ProcessSpec {
  ProcessCase process = ProcessCase::Case1;
  double s0 = 100.0;
  double alpha = 0.0;
  double sigma = 0.2;
};

/// Throws Error{InvalidParams} unless s0 > 0, sigma > 0 and alpha is finite.
void validate(const ProcessSpec& spec);

/// Drift of ln S(t) per unit time.
double log_drift(const ProcessSpec& spec);

double exact_terminal(const ProcessSpec& spec, double t, double z);

/// Factor e^{-g(t)} that turns S(t) into a martingale with constant mean S0.
double deflator(const ProcessSpec& spec, double t);

/// E[S(t)] = S0 / deflator(spec, t).
double expected_terminal(const ProcessSpec& spec, double t);

/// Case1: alpha + sigma^2/2 - r, Case2: alpha - r, Case3: r. Zero means the
/// case's no-arbitrage condition holds.
double no_arb_residual(const ProcessSpec& spec, double rate);

/// Human-readable form of the condition `no_arb_residual` measures.
std::string_view constraint_text(ProcessCase c) noexcept;

/// Ito dynamics dS = drift(S) dt + diffusion(S) dW.
struct SdeCoefficients {
  double drift_rate = 0.0;
  double sigma = 0.0;
  double drift(double s) const noexcept { return drift_rate * s; }
  double diffusion(double s) const noexcept { return sigma * s; }
};

SdeCoefficients sde_coefficients(const ProcessSpec& spec);

enum class Scheme { Exact, Euler };

/// Per-path normal stream. Philox4x32-10 (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3", SC11) keyed by the 64-bit seed with counter
/// (path, block index); each block yields two 53-bit uniforms on (0, 1),
/// mapped to normals by inverse CDF. Path j's draws depend only on (seed, j).
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path) noexcept;
  double uniform() noexcept;
  double normal();

  /// Raw Philox4x32-10 block for (key, counter), exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key) noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t path_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

struct SampleSet {
  std::vector<double> terminals;
  /// Euler paths whose terminal value ended at or below zero.
  std::size_t non_positive = 0;
};

/// `workers` == 0 uses the hardware concurrency. Results never depend on it.
SampleSet simulate_paths(const ProcessSpec& spec, double t, int steps, std::size_t paths,
                         std::uint64_t seed, Scheme scheme, unsigned workers = 0);

struct MartingaleReport {
  double deflated_mean = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  std::size_t paths = 0;
  std::uint64_t seed = 0;
};

MartingaleReport mc_martingale_check(const ProcessSpec& spec, double t, std::size_t paths,
                                     std::uint64_t seed, unsigned workers = 0);

struct HedgeResult {
  int rebalances = 0;
  std::vector<double> terminal_errors;
  double error_mean = 0.0;
  double error_std = 0.0;
  /// error_std / sqrt(paths)
  double mean_std_error = 0.0;
};

/// Discrete delta hedge of a European call: start from the closed-form price,
/// hold N(d1) shares at each uniform rebalance date and keep the remainder in
/// the bank at `rate`. Prices evolve under `spec`. Refuses to run (Error
/// {ConstraintViolated}) unless |no_arb_residual(spec, rate)| <= 1e-12.
HedgeResult delta_hedge_simulate(const ProcessSpec& spec, const bsm::OptionContract& contract,
                                 double rate, int rebalances, std::size_t paths,
                                 std::uint64_t seed, unsigned workers = 0);

/// CSV with header `terminal`, one value per line, round-trip precision.
std::string samples_to_csv(const SampleSet& samples);

}  // namespace noarb::gbm

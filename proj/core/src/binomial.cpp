#include "noarb/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "noarb/error.hpp"

namespace noarb::binomial {
namespace {

void validate(const OnePeriodMarket& mkt) {
  if (!std::isfinite(mkt.s0) || !std::isfinite(mkt.u) || !std::isfinite(mkt.d) ||
      !std::isfinite(mkt.rate)) {
    throw Error(ErrorKind::NonFinite, "binomial market has non-finite inputs");
  }
  if (mkt.s0 <= 0.0) throw Error(ErrorKind::InvalidParams, "s0 must be positive");
  if (!(mkt.d > 0.0 && mkt.u > mkt.d)) {
    throw Error(ErrorKind::InvalidParams, "binomial factors must satisfy u > d > 0");
  }
  const double growth = std::exp(mkt.rate);
  if (!(mkt.d < growth && growth < mkt.u)) {
    throw Error(ErrorKind::ArbitrageViolation,
                "e^r = " + std::to_string(growth) + " lies outside (d, u) = (" +
                    std::to_string(mkt.d) + ", " + std::to_string(mkt.u) + ")");
  }
}

void validate_payoffs(double up, double down) {
  if (!std::isfinite(up) || !std::isfinite(down)) {
    throw Error(ErrorKind::NonFinite, "claim payoffs must be finite");
  }
}

}  // namespace

double risk_neutral_prob(const OnePeriodMarket& mkt) {
  validate(mkt);
  return (std::exp(mkt.rate) - mkt.d) / (mkt.u - mkt.d);
}

double price_european(const OnePeriodMarket& mkt, double payoff_up, double payoff_down) {
  validate_payoffs(payoff_up, payoff_down);
  const double pi = risk_neutral_prob(mkt);
  return std::exp(-mkt.rate) * (pi * payoff_up + (1.0 - pi) * payoff_down);
}

ReplicationPlan replicate(const OnePeriodMarket& mkt, double payoff_up, double payoff_down) {
  validate(mkt);
  validate_payoffs(payoff_up, payoff_down);
  ReplicationPlan plan;
  plan.delta = (payoff_up - payoff_down) / (mkt.s0 * mkt.u - mkt.s0 * mkt.d);
  plan.bank = std::exp(-mkt.rate) * (mkt.u * payoff_down - mkt.d * payoff_up) / (mkt.u - mkt.d);
  plan.cost = plan.delta * mkt.s0 + plan.bank;
  return plan;
}

HedgeQuote covered_hedge(const OnePeriodMarket& mkt, double payoff_up, double payoff_down) {
  validate(mkt);
  validate_payoffs(payoff_up, payoff_down);
  // delta * S0 u - c_u = delta * S0 d - c_d: the hedged book is riskless.
  const double up = mkt.s0 * mkt.u;
  const double down = mkt.s0 * mkt.d;
  HedgeQuote q;
  q.delta = (payoff_up - payoff_down) / (up - down);
  const double riskless_payoff = q.delta * down - payoff_down;
  // delta * S0 - c0 = e^-r * riskless payoff
  q.price = q.delta * mkt.s0 - std::exp(-mkt.rate) * riskless_payoff;
  return q;
}

double martingale_identity_check(const OnePeriodMarket& mkt, double price0, double payoff_up,
                                 double payoff_down) {
  validate_payoffs(payoff_up, payoff_down);
  if (!std::isfinite(price0)) throw Error(ErrorKind::NonFinite, "price0 must be finite");
  const double pi = risk_neutral_prob(mkt);
  return pi * payoff_up + (1.0 - pi) * payoff_down - std::exp(mkt.rate) * price0;
}

double crr_lattice_price(double s0, double strike, double rate, double sigma, double maturity,
                         int steps, bool is_call) {
  if (!std::isfinite(s0) || !std::isfinite(strike) || !std::isfinite(rate) ||
      !std::isfinite(sigma) || !std::isfinite(maturity)) {
    throw Error(ErrorKind::NonFinite, "lattice inputs must be finite");
  }
  if (steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  if (sigma <= 0.0) throw Error(ErrorKind::InvalidParams, "sigma must be positive");
  if (maturity <= 0.0) throw Error(ErrorKind::InvalidParams, "maturity must be positive");
  if (s0 <= 0.0) throw Error(ErrorKind::InvalidParams, "s0 must be positive");
  if (strike < 0.0) throw Error(ErrorKind::InvalidParams, "strike must be nonnegative");

  const double dt = maturity / steps;
  const double u = std::exp(sigma * std::sqrt(dt));
  const double d = 1.0 / u;
  const OnePeriodMarket step{s0, u, d, rate * dt};
  const double pi = risk_neutral_prob(step);
  const double discount = std::exp(-rate * dt);

  std::vector<double> values(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    // k up-moves out of `steps`
    const double st = s0 * std::pow(u, 2 * k - steps);
    values[static_cast<std::size_t>(k)] =
        is_call ? std::max(st - strike, 0.0) : std::max(strike - st, 0.0);
  }
  for (int level = steps - 1; level >= 0; --level) {
    for (int k = 0; k <= level; ++k) {
      const auto i = static_cast<std::size_t>(k);
      values[i] = discount * (pi * values[i + 1] + (1.0 - pi) * values[i]);
    }
  }
  return values[0];
}

double put_call_parity_residual(double call_price, double put_price, double s0, double strike,
                                double rate, double maturity) {
  return call_price - put_price - s0 + strike * std::exp(-rate * maturity);
}

}  // namespace noarb::binomial

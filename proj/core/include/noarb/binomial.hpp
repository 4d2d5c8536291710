#pragma once

namespace noarb::binomial {

/// One-period up/down market. `rate` is the continuously compounded rate
/// over the whole period (not annualized).
struct OnePeriodMarket {
  double s0 = 0.0;
  double u = 0.0;
  double d = 0.0;
  double rate = 0.0;
};

/// Delta shares plus `bank` in the money market (negative = borrowed).
struct ReplicationPlan {
  double delta = 0.0;
  double bank = 0.0;
  double cost = 0.0;
};

struct HedgeQuote {
  double delta = 0.0;
  double price = 0.0;
};

/// pi = (e^r - d) / (u - d). Throws Error{ArbitrageViolation} unless
/// d < e^r < u, and Error{InvalidParams} on a malformed market.
double risk_neutral_prob(const OnePeriodMarket& mkt);

/// e^-r [pi * up + (1 - pi) * down]. Payoff-taking operations throw
/// Error{NonFinite} on NaN/inf payoffs.
double price_european(const OnePeriodMarket& mkt, double payoff_up, double payoff_down);

ReplicationPlan replicate(const OnePeriodMarket& mkt, double payoff_up, double payoff_down);

/// Long delta shares, short one claim: the riskless-portfolio argument.
/// Derived without pi; agrees with `replicate` as an identity.
HedgeQuote covered_hedge(const OnePeriodMarket& mkt, double payoff_up, double payoff_down);

/// pi * up + (1 - pi) * down - e^r * price0. Zero iff the measure prices the asset.
double martingale_identity_check(const OnePeriodMarket& mkt, double price0, double payoff_up,
                                 double payoff_down);

/// n-step Cox-Ross-Rubinstein lattice for a European option. `rate` and
/// `sigma` are annualized; each step uses u = e^{sigma sqrt(dt)}, d = 1/u and
/// growth e^{rate dt}.
double crr_lattice_price(double s0, double strike, double rate, double sigma, double maturity,
                         int steps, bool is_call);

/// call - put - s0 + strike e^{-rate maturity}
double put_call_parity_residual(double call_price, double put_price, double s0, double strike,
                                double rate, double maturity);

}  // namespace noarb::binomial

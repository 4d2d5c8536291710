#pragma once

#include <functional>
#include <span>
#include <string_view>

namespace noarb::bsm {

enum class OptionKind { Call, Put };

std::string_view to_string(OptionKind kind) noexcept;

struct OptionContract {
  double strike = 0.0;
  double maturity = 0.0;
  OptionKind kind = OptionKind::Call;
};

/// Closed-form call quote. `a` is the lognormal-integral lower limit
/// a = [ln(K/S0) - alpha T] / (sigma sqrt T) with alpha = r - sigma^2/2, so
/// d1 = sigma sqrt T - a and d2 = -a.
struct BsmQuote {
  double price = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double a = 0.0;
  double delta = 0.0;
};

struct D1D2 {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Standard normal CDF, computed as 0.5 * erfc(-x / sqrt 2) with the C
/// library's erfc (fdlibm rational approximations, error below 1 ulp), so the
/// absolute error stays far below 1e-10 over the whole real line.
double norm_cdf(double x);
double norm_pdf(double x);
/// Inverse of norm_cdf on (0, 1), via Boost.Math's erfc_inv.
double norm_quantile(double p);

/// Throws Error{DomainError} unless s0, strike, sigma and maturity are positive.
D1D2 d1_d2(double s0, double strike, double rate, double sigma, double maturity);

/// S0 N(d1) - K e^{-rT} N(d2). strike == 0 returns s0.
double price_call(double s0, double strike, double rate, double sigma, double maturity);

/// Put through parity: price_call - s0 + K e^{-rT}.
double price_put(double s0, double strike, double rate, double sigma, double maturity);

double price(const OptionContract& contract, double s0, double rate, double sigma);

BsmQuote quote_call(double s0, double strike, double rate, double sigma, double maturity);

/// Call priced from the drift-alpha lognormal law before the no-arbitrage
/// substitution:
///   e^{-rT} [S0 e^{(alpha + sigma^2/2) T} N(sigma sqrt T - a) - K N(-a)].
/// Requires |alpha + sigma^2/2 - rate| <= 1e-12, else Error{ConstraintViolated}.
double price_call_case1(double s0, double strike, double alpha, double sigma, double maturity,
                        double rate);

/// Undiscounted E[(S0 e^Y - K)^+] (or the put payoff) with Y ~ N(alpha T, sigma^2 T),
/// integrated by adaptive Simpson over y in [ln(K/S0), alpha T + 12 sigma sqrt T]
/// to absolute tolerance `abs_tol`. Independent of the closed form.
double quadrature_oracle(double s0, double strike, double alpha, double sigma, double maturity,
                         OptionKind kind = OptionKind::Call, double abs_tol = 1e-10);

/// Call delta N(d1) with `t_remaining` years to expiry. strike == 0 gives 1.
double delta(double s0, double strike, double rate, double sigma, double t_remaining);

/// Value c(t, S) of some pricing rule, for residual checks.
using ValueFunction = std::function<double(double t, double s)>;

/// max over the grid of |r c - c_t - r S c_S - sigma^2 S^2 c_SS / 2| with
/// central differences (dS = 1e-3 S, dt = 1e-5 T).
double pde_residual(const ValueFunction& value, std::span<const double> s_grid, double t,
                    double rate, double sigma, double maturity);

/// Residual of the closed-form call price.
double pde_residual(std::span<const double> s_grid, double t, double strike, double rate,
                    double sigma, double maturity);

}  // namespace noarb::bsm

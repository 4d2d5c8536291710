#include "noarb/bsm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "noarb/error.hpp"
#include "noarb/quadrature.hpp"

namespace noarb::bsm {
namespace {

void require_finite(std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::DomainError, "option inputs must be finite");
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw Error(ErrorKind::DomainError, std::string(name) + " must be positive");
}

void validate_pricing(double s0, double strike, double rate, double sigma, double maturity) {
  require_finite({s0, strike, rate, sigma, maturity});
  require_positive(s0, "s0");
  require_positive(sigma, "sigma");
  require_positive(maturity, "maturity");
  if (strike < 0.0) throw Error(ErrorKind::DomainError, "strike must be nonnegative");
}

}  // namespace

std::string_view to_string(OptionKind kind) noexcept {
  return kind == OptionKind::Call ? "call" : "put";
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::sqrt2 * std::numbers::inv_sqrtpi);
}

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::DomainError, "quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

D1D2 d1_d2(double s0, double strike, double rate, double sigma, double maturity) {
  validate_pricing(s0, strike, rate, sigma, maturity);
  require_positive(strike, "strike");
  const double vol = sigma * std::sqrt(maturity);
  D1D2 d;
  d.d1 = (std::log(s0 / strike) + (rate + 0.5 * sigma * sigma) * maturity) / vol;
  d.d2 = d.d1 - vol;
  return d;
}

double price_call(double s0, double strike, double rate, double sigma, double maturity) {
  validate_pricing(s0, strike, rate, sigma, maturity);
  if (strike == 0.0) return s0;
  const D1D2 d = d1_d2(s0, strike, rate, sigma, maturity);
  return s0 * norm_cdf(d.d1) - strike * std::exp(-rate * maturity) * norm_cdf(d.d2);
}

double price_put(double s0, double strike, double rate, double sigma, double maturity) {
  return price_call(s0, strike, rate, sigma, maturity) - s0 + strike * std::exp(-rate * maturity);
}

double price(const OptionContract& contract, double s0, double rate, double sigma) {
  return contract.kind == OptionKind::Call
             ? price_call(s0, contract.strike, rate, sigma, contract.maturity)
             : price_put(s0, contract.strike, rate, sigma, contract.maturity);
}

BsmQuote quote_call(double s0, double strike, double rate, double sigma, double maturity) {
  const D1D2 d = d1_d2(s0, strike, rate, sigma, maturity);
  const double alpha = rate - 0.5 * sigma * sigma;
  BsmQuote q;
  q.d1 = d.d1;
  q.d2 = d.d2;
  q.a = (std::log(strike / s0) - alpha * maturity) / (sigma * std::sqrt(maturity));
  q.price = price_call(s0, strike, rate, sigma, maturity);
  q.delta = norm_cdf(d.d1);
  return q;
}

double price_call_case1(double s0, double strike, double alpha, double sigma, double maturity,
                        double rate) {
  validate_pricing(s0, strike, rate, sigma, maturity);
  require_finite({alpha});
  const double residual = alpha + 0.5 * sigma * sigma - rate;
  if (std::abs(residual) > 1e-12) {
    throw Error(ErrorKind::ConstraintViolated,
                "alpha + sigma^2/2 - r = " + std::to_string(residual) + " is not zero");
  }
  const double mean_growth = std::exp((alpha + 0.5 * sigma * sigma) * maturity);
  const double discount = std::exp(-rate * maturity);
  if (strike == 0.0) return discount * s0 * mean_growth;
  const double vol = sigma * std::sqrt(maturity);
  const double a = (std::log(strike / s0) - alpha * maturity) / vol;
  return discount * (s0 * mean_growth * norm_cdf(vol - a) - strike * norm_cdf(-a));
}

double quadrature_oracle(double s0, double strike, double alpha, double sigma, double maturity,
                         OptionKind kind, double abs_tol) {
  require_finite({s0, strike, alpha, sigma, maturity});
  require_positive(s0, "s0");
  require_positive(sigma, "sigma");
  require_positive(maturity, "maturity");
  if (strike < 0.0) throw Error(ErrorKind::DomainError, "strike must be nonnegative");

  const double mean = alpha * maturity;
  const double sd = sigma * std::sqrt(maturity);
  if (strike == 0.0) {
    return kind == OptionKind::Call ? s0 * std::exp(mean + 0.5 * sd * sd) : 0.0;
  }

  const double kink = std::log(strike / s0);
  const double lo_tail = mean - 12.0 * sd;
  const double hi_tail = mean + 12.0 * sd;
  const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  auto density = [&](double y) {
    const double z = (y - mean) / sd;
    return norm * std::exp(-0.5 * z * z);
  };

  double lo = 0.0;
  double hi = 0.0;
  quad::SimpsonOptions opt;
  opt.abs_tol = abs_tol;
  auto panels_for = [&](double a, double b) {
    return static_cast<std::size_t>(std::max(2.0, std::ceil((b - a) / (0.5 * sd))));
  };

  if (kind == OptionKind::Call) {
    lo = std::max(kink, lo_tail);
    hi = hi_tail;
    if (!(hi > lo)) return 0.0;
    opt.initial_panels = panels_for(lo, hi);
    return quad::adaptive_simpson(
        [&](double y) { return (s0 * std::exp(y) - strike) * density(y); }, lo, hi, opt);
  }
  lo = lo_tail;
  hi = std::min(kink, hi_tail);
  if (!(hi > lo)) return 0.0;
  opt.initial_panels = panels_for(lo, hi);
  return quad::adaptive_simpson(
      [&](double y) { return (strike - s0 * std::exp(y)) * density(y); }, lo, hi, opt);
}

double delta(double s0, double strike, double rate, double sigma, double t_remaining) {
  validate_pricing(s0, strike, rate, sigma, t_remaining);
  if (strike == 0.0) return 1.0;
  return norm_cdf(d1_d2(s0, strike, rate, sigma, t_remaining).d1);
}

double pde_residual(const ValueFunction& value, std::span<const double> s_grid, double t,
                    double rate, double sigma, double maturity) {
  require_finite({t, rate, sigma, maturity});
  require_positive(maturity, "maturity");
  const double ht = 1e-5 * maturity;
  if (!(t + ht < maturity)) throw Error(ErrorKind::DomainError, "residual time must be before maturity");
  double worst = 0.0;
  for (double s : s_grid) {
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::DomainError, "grid prices must be positive");
    const double hs = 1e-3 * s;
    const double c = value(t, s);
    const double c_t = (value(t + ht, s) - value(t - ht, s)) / (2.0 * ht);
    const double up = value(t, s + hs);
    const double down = value(t, s - hs);
    const double c_s = (up - down) / (2.0 * hs);
    const double c_ss = (up - 2.0 * c + down) / (hs * hs);
    const double r = rate * c - c_t - rate * s * c_s - 0.5 * sigma * sigma * s * s * c_ss;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double pde_residual(std::span<const double> s_grid, double t, double strike, double rate,
                    double sigma, double maturity) {
  validate_pricing(1.0, strike, rate, sigma, maturity);
  return pde_residual(
      [&](double tt, double s) { return price_call(s, strike, rate, sigma, maturity - tt); },
      s_grid, t, rate, sigma, maturity);
}

}  // namespace noarb::bsm

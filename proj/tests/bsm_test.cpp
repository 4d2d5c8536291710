#include "noarb/bsm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "noarb/error.hpp"

namespace noarb::bsm {
namespace {

struct Params {
  double s0, strike, rate, sigma, maturity;
};

std::vector<Params> sweep(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> s(50.0, 150.0), r(0.0, 0.1), v(0.05, 0.5), t(0.1, 2.0);
  std::vector<Params> out;
  for (int i = 0; i < count; ++i) out.push_back({s(rng), s(rng), r(rng), v(rng), t(rng)});
  return out;
}

// Composite Simpson of the density on [0, x] in long double, an oracle for
// the CDF independent of erfc.
double simpson_cdf(double x) {
  const int n = 20000;
  const long double h = static_cast<long double>(x) / n;
  auto f = [](long double u) { return std::exp(-0.5L * u * u) / std::sqrt(2.0L * 3.14159265358979323846L); };
  long double sum = f(0.0L) + f(static_cast<long double>(x));
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0L : 2.0L) * f(i * h);
  return static_cast<double>(0.5L + sum * h / 3.0L);
}

TEST(NormCdf, Examples) {
  EXPECT_EQ(norm_cdf(0.0), 0.5);
  EXPECT_NEAR(norm_cdf(1.959963985), 0.975, 1e-9);
  EXPECT_NEAR(norm_cdf(1.959963985), 0.97500000002688156, 1e-15);
  for (double x = -9.0; x <= 9.0; x += 0.37) EXPECT_NEAR(norm_cdf(-x) + norm_cdf(x), 1.0, 1e-12) << x;
}

TEST(NormCdf, MatchesDensityQuadrature) {
  for (double x = -8.0; x <= 8.0; x += 0.25) EXPECT_NEAR(norm_cdf(x), simpson_cdf(x), 1e-10) << x;
  EXPECT_EQ(norm_cdf(-40.0), 0.0);
  EXPECT_EQ(norm_cdf(40.0), 1.0);
}

TEST(NormQuantile, InvertsCdf) {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.8, 0.975, 1.0 - 1e-9}) {
    EXPECT_NEAR(norm_cdf(norm_quantile(p)), p, 1e-12 + 1e-10 * p) << p;
  }
  EXPECT_NEAR(norm_quantile(0.975), 1.959963984540054, 1e-12);
}

TEST(D1D2, Examples) {
  const D1D2 d = d1_d2(100.0, 110.0, 0.03, 0.2, 0.25);
  EXPECT_NEAR(d.d1, -0.82810179804324860, 1e-14);
  EXPECT_NEAR(d.d2, -0.92810179804324860, 1e-14);

  // ln(S0/K) + (r + sigma^2/2) T = 0 with S0 = K and r = -sigma^2/2.
  EXPECT_NEAR(d1_d2(100.0, 100.0, -0.02, 0.2, 1.0).d1, 0.0, 1e-15);

  EXPECT_THROW(d1_d2(0.0, 110.0, 0.03, 0.2, 0.25), Error);
  EXPECT_THROW(d1_d2(100.0, 0.0, 0.03, 0.2, 0.25), Error);
  EXPECT_THROW(d1_d2(100.0, 110.0, 0.03, 0.0, 0.25), Error);
  EXPECT_THROW(d1_d2(100.0, 110.0, 0.03, 0.2, -1.0), Error);
}

TEST(QuoteCall, InvariantsOnSweep) {
  for (const Params& p : sweep(200, 3)) {
    const BsmQuote q = quote_call(p.s0, p.strike, p.rate, p.sigma, p.maturity);
    const double vol = p.sigma * std::sqrt(p.maturity);
    EXPECT_NEAR(q.d2, q.d1 - vol, 1e-14);
    EXPECT_NEAR(q.d1, vol - q.a, 1e-14);
    EXPECT_NEAR(q.d2, -q.a, 1e-14);
    EXPECT_GE(q.delta, 0.0);
    EXPECT_LE(q.delta, 1.0);
    EXPECT_EQ(q.price, price_call(p.s0, p.strike, p.rate, p.sigma, p.maturity));
  }
}

TEST(PriceCall, Examples) {
  EXPECT_EQ(price_call(100.0, 0.0, 0.03, 0.2, 0.25), 100.0);
  EXPECT_NEAR(price_call(100.0, 110.0, 0.03, 0.2, 0.25), 1.09134398962750126, 1e-13);
  const double oracle = std::exp(-0.03 * 0.25) * quadrature_oracle(100.0, 110.0, 0.01, 0.2, 0.25);
  EXPECT_NEAR(price_call(100.0, 110.0, 0.03, 0.2, 0.25), oracle, 1e-6);
  // Deterministic limit: S0 > K e^{-rT}.
  EXPECT_NEAR(price_call(100.0, 90.0, 0.03, 1e-8, 1.0), 100.0 - 90.0 * std::exp(-0.03), 1e-6);
}

TEST(PriceCallCase1, MatchesClosedForm) {
  EXPECT_NEAR(price_call_case1(100.0, 110.0, 0.01, 0.2, 0.25, 0.03),
              price_call(100.0, 110.0, 0.03, 0.2, 0.25), 1e-12);
  const double sigma = std::sqrt(2.0 * 0.03);  // sigma^2 / 2 = r with alpha = 0
  EXPECT_NEAR(price_call_case1(100.0, 110.0, 0.0, sigma, 0.25, 0.03),
              price_call(100.0, 110.0, 0.03, sigma, 0.25), 1e-12);
  try {
    price_call_case1(100.0, 110.0, 0.03, 0.2, 0.25, 0.03);
    ADD_FAILURE() << "expected ConstraintViolated";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConstraintViolated);
  }
  for (const Params& p : sweep(200, 11)) {
    const double alpha = p.rate - 0.5 * p.sigma * p.sigma;
    EXPECT_NEAR(price_call_case1(p.s0, p.strike, alpha, p.sigma, p.maturity, p.rate),
                price_call(p.s0, p.strike, p.rate, p.sigma, p.maturity), 1e-12);
  }
}

TEST(Quadrature, Examples) {
  EXPECT_NEAR(quadrature_oracle(100.0, 0.0, 0.05, 0.2, 1.0), 100.0 * std::exp(0.07), 1e-12);
  EXPECT_EQ(quadrature_oracle(100.0, 0.0, 0.05, 0.2, 1.0, OptionKind::Put), 0.0);
  const double alpha = 0.01, sigma = 0.2, t = 1.0;
  const double far = 100.0 * std::exp(alpha * t + 10.0 * sigma * std::sqrt(t));
  EXPECT_LE(quadrature_oracle(100.0, far, alpha, sigma, t, OptionKind::Call, 1e-14), 1e-8 * 100.0);
  EXPECT_THROW(quadrature_oracle(100.0, 110.0, 0.01, 0.0, 1.0), Error);
}

TEST(Quadrature, AgreesWithClosedFormOnSweep) {
  for (const Params& p : sweep(200, 21)) {
    const double alpha = p.rate - 0.5 * p.sigma * p.sigma;
    const double df = std::exp(-p.rate * p.maturity);
    const double call = df * quadrature_oracle(p.s0, p.strike, alpha, p.sigma, p.maturity);
    const double put = df * quadrature_oracle(p.s0, p.strike, alpha, p.sigma, p.maturity, OptionKind::Put);
    EXPECT_NEAR(call, price_call(p.s0, p.strike, p.rate, p.sigma, p.maturity), 1e-6);
    EXPECT_NEAR(put, price_put(p.s0, p.strike, p.rate, p.sigma, p.maturity), 1e-6);
  }
}

TEST(PricePut, Examples) {
  EXPECT_EQ(price_put(100.0, 0.0, 0.03, 0.2, 0.25), 0.0);
  EXPECT_NEAR(price_put(1e-6, 100.0, 0.03, 0.2, 1.0), 100.0 * std::exp(-0.03) - 1e-6, 1e-8);
  for (const Params& p : sweep(50, 8)) {
    const double lhs = price_call(p.s0, p.strike, p.rate, p.sigma, p.maturity) -
                       price_put(p.s0, p.strike, p.rate, p.sigma, p.maturity);
    EXPECT_NEAR(lhs, p.s0 - p.strike * std::exp(-p.rate * p.maturity), 1e-12);
  }
  const OptionContract put{110.0, 0.25, OptionKind::Put};
  EXPECT_EQ(price(put, 100.0, 0.03, 0.2), price_put(100.0, 110.0, 0.03, 0.2, 0.25));
}

TEST(PriceCall, BoundsAndMonotonicity) {
  for (const Params& p : sweep(200, 31)) {
    const double c = price_call(p.s0, p.strike, p.rate, p.sigma, p.maturity);
    const double lower = std::max(p.s0 - p.strike * std::exp(-p.rate * p.maturity), 0.0);
    EXPECT_GE(c, lower - 1e-12);
    EXPECT_LE(c, p.s0);
    EXPECT_LE(price_call(p.s0, p.strike + 1.0, p.rate, p.sigma, p.maturity), c + 1e-12);
    EXPECT_GE(price_call(p.s0, p.strike, p.rate, p.sigma + 0.01, p.maturity), c - 1e-12);
    EXPECT_GE(price_call(p.s0 + 1.0, p.strike, p.rate, p.sigma, p.maturity), c - 1e-12);
  }
}

TEST(Delta, Examples) {
  EXPECT_EQ(delta(100.0, 0.0, 0.03, 0.2, 0.25), 1.0);
  EXPECT_LT(delta(10.0, 1000.0, 0.03, 0.2, 0.25), 1e-12);
  EXPECT_NEAR(delta(100.0, 110.0, 0.03, 0.2, 0.25), norm_cdf(-0.82810179804324860), 1e-15);
}

TEST(Delta, MatchesFiniteDifferenceOnSweep) {
  for (const Params& p : sweep(200, 41)) {
    const double h = 1e-4 * p.s0;
    const double fd = (price_call(p.s0 + h, p.strike, p.rate, p.sigma, p.maturity) -
                       price_call(p.s0 - h, p.strike, p.rate, p.sigma, p.maturity)) /
                      (2.0 * h);
    EXPECT_NEAR(delta(p.s0, p.strike, p.rate, p.sigma, p.maturity), fd, 1e-6);
  }
}

TEST(PdeResidual, ClosedFormSatisfiesPde) {
  const std::vector<double> grid{80.0, 100.0, 120.0};
  EXPECT_LE(pde_residual(grid, 0.125, 110.0, 0.03, 0.2, 0.25), 1e-3);
  EXPECT_LE(pde_residual(grid, 0.125, 110.0, 0.03, 0.4, 0.25), 1e-3);
  for (const Params& p : sweep(50, 51)) {
    const std::vector<double> g{0.8 * p.s0, p.s0, 1.2 * p.s0};
    EXPECT_LE(pde_residual(g, 0.5 * p.maturity, p.strike, p.rate, p.sigma, p.maturity), 1e-3);
  }
}

TEST(PdeResidual, IntrinsicValueFails) {
  const ValueFunction intrinsic = [](double, double s) { return std::max(s - 110.0, 0.0); };
  const std::vector<double> grid{109.99, 110.0, 110.01};
  EXPECT_GT(pde_residual(intrinsic, grid, 0.125, 0.03, 0.2, 0.25), 0.1);
  EXPECT_THROW(pde_residual(grid, 0.25, 110.0, 0.03, 0.2, 0.25), Error);
}

}  // namespace
}  // namespace noarb::bsm

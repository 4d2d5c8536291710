#include "noarb/binomial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "noarb/bsm.hpp"
#include "noarb/error.hpp"

namespace noarb::binomial {
namespace {

const OnePeriodMarket kFig{100.0, 1.2, 0.8, 0.03};

ErrorKind kind_of(const OnePeriodMarket& m) {
  try {
    risk_neutral_prob(m);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::NumericalFailure;
}

TEST(RiskNeutralProb, Examples) {
  EXPECT_NEAR(risk_neutral_prob(kFig), 0.57613633488379214, 1e-15);
  EXPECT_NEAR(risk_neutral_prob(kFig), 0.5761, 5e-5);
  EXPECT_NEAR(risk_neutral_prob({100.0, 1.1, 0.9, 0.0}), 0.5, 1e-15);
  EXPECT_EQ(kind_of({100.0, 1.2, 1.1, 0.03}), ErrorKind::ArbitrageViolation);
  EXPECT_EQ(kind_of({100.0, 1.02, 0.8, 0.03}), ErrorKind::ArbitrageViolation);
  EXPECT_EQ(kind_of({100.0, 0.8, 1.2, 0.03}), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of({-1.0, 1.2, 0.8, 0.03}), ErrorKind::InvalidParams);
  EXPECT_EQ(kind_of({100.0, NAN, 0.8, 0.03}), ErrorKind::NonFinite);
}

TEST(PriceEuropean, Examples) {
  EXPECT_NEAR(price_european(kFig, 10.0, 0.0), 5.59108932902983646, 1e-13);
  EXPECT_NEAR(price_european(kFig, 10.0, 0.0), 5.5911, 5e-5);
  EXPECT_NEAR(price_european(kFig, 0.0, 30.0), 12.34009801936573592, 1e-13);
  EXPECT_NEAR(price_european(kFig, 0.0, 30.0), 12.34, 5e-3);
  EXPECT_EQ(price_european(kFig, 0.0, 0.0), 0.0);
  EXPECT_THROW(price_european({100.0, 1.2, 1.1, 0.03}, 10.0, 0.0), Error);
  EXPECT_THROW(price_european(kFig, INFINITY, 0.0), Error);
  EXPECT_THROW(replicate(kFig, 0.0, NAN), Error);
  EXPECT_THROW(covered_hedge(kFig, NAN, 0.0), Error);
  EXPECT_THROW(martingale_identity_check(kFig, NAN, 10.0, 0.0), Error);
}

TEST(Replicate, Examples) {
  const ReplicationPlan call = replicate(kFig, 10.0, 0.0);
  EXPECT_NEAR(call.delta, 0.25, 1e-15);
  EXPECT_NEAR(call.bank, -19.40891067097016354, 1e-12);
  EXPECT_NEAR(call.cost, 5.59108932902983646, 1e-12);

  const ReplicationPlan flat = replicate(kFig, 5.0, 5.0);
  EXPECT_EQ(flat.delta, 0.0);
  EXPECT_NEAR(flat.bank, 5.0 * std::exp(-0.03), 1e-14);

  const ReplicationPlan put = replicate(kFig, 0.0, 30.0);
  EXPECT_NEAR(put.delta, -0.75, 1e-15);
  EXPECT_NEAR(put.bank, 87.34009801936573592, 1e-11);
  EXPECT_NEAR(put.cost, 12.34009801936573592, 1e-11);
}

TEST(Replicate, PlanReproducesPayoffs) {
  const ReplicationPlan p = replicate(kFig, 10.0, 0.0);
  EXPECT_NEAR(p.delta * 120.0 + std::exp(0.03) * p.bank, 10.0, 1e-10);
  EXPECT_NEAR(p.delta * 80.0 + std::exp(0.03) * p.bank, 0.0, 1e-10);
}

TEST(CoveredHedge, Examples) {
  const HedgeQuote h = covered_hedge(kFig, 10.0, 0.0);
  EXPECT_NEAR(h.delta, 0.25, 1e-15);
  EXPECT_NEAR(h.price, 5.5911, 5e-5);
  const HedgeQuote flat = covered_hedge(kFig, 7.0, 7.0);
  EXPECT_EQ(flat.delta, 0.0);
  EXPECT_NEAR(flat.price, 7.0 * std::exp(-0.03), 1e-14);
}

TEST(MartingaleIdentity, Examples) {
  EXPECT_NEAR(martingale_identity_check(kFig, 100.0, 120.0, 80.0), 0.0, 1e-10);
  EXPECT_NEAR(martingale_identity_check(kFig, 5.5911, 10.0, 0.0), 0.0, 1e-4);
  // e^0.03 (c0 - 6), the gap between the model price and a quote of 6.
  EXPECT_NEAR(martingale_identity_check(kFig, 6.0, 10.0, 0.0), -0.42136385488317974, 1e-12);
}

TEST(Properties, PricingEqualsReplicationEqualsHedge) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pay(0.0, 50.0), r(-0.05, 0.1), d(0.5, 0.99), spread(0.02, 0.8),
      s0(10.0, 200.0);
  int checked = 0;
  while (checked < 2000) {
    OnePeriodMarket m{s0(rng), 0.0, d(rng), r(rng)};
    m.u = m.d + spread(rng);
    if (!(m.d < std::exp(m.rate) && std::exp(m.rate) < m.u)) continue;
    const double up = pay(rng), down = pay(rng);
    const double price = price_european(m, up, down);
    const ReplicationPlan plan = replicate(m, up, down);
    const HedgeQuote hedge = covered_hedge(m, up, down);
    ASSERT_NEAR(plan.cost, price, 1e-10);
    ASSERT_NEAR(hedge.price, price, 1e-10);
    ASSERT_NEAR(hedge.delta, plan.delta, 1e-10);
    ASSERT_NEAR(martingale_identity_check(m, price, up, down), 0.0, 1e-10);
    EXPECT_LE(price_european(m, up, down), price_european(m, up + 1.0, down));
    EXPECT_LE(price_european(m, up, down), price_european(m, up, down + 1.0));
    ++checked;
  }
}

TEST(Crr, OneStepMatchesOnePeriodModel) {
  const double sigma = 0.2, t = 0.25, rate = 0.03, s0 = 100.0, k = 105.0;
  const double u = std::exp(sigma * std::sqrt(t));
  const OnePeriodMarket m{s0, u, 1.0 / u, rate * t};
  const double expected = price_european(m, std::max(s0 * u - k, 0.0), std::max(s0 / u - k, 0.0));
  EXPECT_NEAR(crr_lattice_price(s0, k, rate, sigma, t, 1, true), expected, 1e-12);
}

TEST(Crr, ConvergesToClosedForm) {
  const double bs = bsm::price_call(100.0, 110.0, 0.03, 0.2, 0.25);
  EXPECT_NEAR(bs, 1.09134398962750126, 1e-12);
  EXPECT_LT(std::abs(crr_lattice_price(100.0, 110.0, 0.03, 0.2, 0.25, 100, true) - bs), 0.05);
  EXPECT_LT(std::abs(crr_lattice_price(100.0, 110.0, 0.03, 0.2, 0.25, 1000, true) - bs), 0.01);
}

TEST(Crr, ZeroStrikeCallIsSpot) {
  for (int n : {1, 2, 7, 50, 300}) {
    EXPECT_NEAR(crr_lattice_price(100.0, 0.0, 0.03, 0.2, 0.25, n, true), 100.0, 1e-9) << n;
  }
}

TEST(Crr, ParityHoldsForAllSteps) {
  for (int n = 1; n <= 200; n += 7) {
    const double c = crr_lattice_price(100.0, 110.0, 0.03, 0.2, 0.25, n, true);
    const double p = crr_lattice_price(100.0, 110.0, 0.03, 0.2, 0.25, n, false);
    EXPECT_NEAR(put_call_parity_residual(c, p, 100.0, 110.0, 0.03, 0.25), 0.0, 1e-9) << n;
  }
}

TEST(Crr, RejectsNonViableSteps) {
  // Huge rate with tiny volatility: e^{r dt} > u.
  EXPECT_THROW(crr_lattice_price(100.0, 100.0, 2.0, 0.01, 1.0, 4, true), Error);
  EXPECT_THROW(crr_lattice_price(100.0, 100.0, 0.03, 0.2, 1.0, 0, true), Error);
}

TEST(Parity, Examples) {
  EXPECT_NEAR(put_call_parity_residual(5.5911, 12.34, 100.0, 110.0, 0.03, 1.0), 0.0, 1e-3);
  const double s0 = 110.0 * std::exp(-0.03);
  EXPECT_NEAR(put_call_parity_residual(4.0, 4.0, s0, 110.0, 0.03, 1.0), 0.0, 1e-13);
  EXPECT_NEAR(put_call_parity_residual(5.0, 4.0, s0, 110.0, 0.03, 1.0), 1.0, 1e-13);
}

}  // namespace
}  // namespace noarb::binomial

#include "raylab/profile.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using raylab::Interval;
using raylab::ScalarProfile;
using raylab::validate_profile;

namespace {

const Interval kDom{-1.0, 2.0, false, false};

TEST(Interval, ContainsRespectsOpenEnds) {
  Interval closed{0.0, 1.0, false, false};
  EXPECT_TRUE(closed.contains(0.0));
  EXPECT_TRUE(closed.contains(1.0));
  EXPECT_FALSE(closed.contains(-0.1));

  Interval open{0.0, 1.0, true, true};
  EXPECT_FALSE(open.contains(0.0));
  EXPECT_FALSE(open.contains(1.0));
  EXPECT_TRUE(open.contains(0.5));
}

TEST(Interval, InnerShrinksOnlyOpenEnds) {
  Interval half{0.0, 2.0, true, false};
  Interval in = half.inner(0.25);
  EXPECT_DOUBLE_EQ(in.lo, 0.5);
  EXPECT_DOUBLE_EQ(in.hi, 2.0);

  Interval closed{0.0, 2.0, false, false};
  Interval same = closed.inner(0.25);
  EXPECT_DOUBLE_EQ(same.lo, 0.0);
  EXPECT_DOUBLE_EQ(same.hi, 2.0);
}

TEST(Interval, ReversedSwapsEndsAndFlags) {
  Interval dom{0.0, 3.0, true, false};
  Interval rev = dom.reversed();
  EXPECT_DOUBLE_EQ(rev.lo, -3.0);
  EXPECT_DOUBLE_EQ(rev.hi, 0.0);
  EXPECT_FALSE(rev.open_lo);
  EXPECT_TRUE(rev.open_hi);
}

TEST(ScalarProfile, PowerDerivatives) {
  Interval dom{0.1, 4.0, false, false};
  ScalarProfile a = ScalarProfile::power(2.0, 1.5, dom);
  double t = 1.44;
  EXPECT_NEAR(a.value(t), 2.0 * std::pow(t, 1.5), 1e-14);
  EXPECT_NEAR(a.d1(t), 3.0 * std::pow(t, 0.5), 1e-13);
  EXPECT_NEAR(a.d2(t), 1.5 * std::pow(t, -0.5), 1e-13);
  EXPECT_LT(validate_profile(a), 1e-5);
}

TEST(ScalarProfile, ExponentialAndCoshAgreeWithClosedForms) {
  ScalarProfile e = ScalarProfile::exponential(3.0, -0.7, kDom);
  EXPECT_NEAR(e.value(0.5), 3.0 * std::exp(-0.35), 1e-14);
  EXPECT_NEAR(e.d1(0.5), -0.7 * 3.0 * std::exp(-0.35), 1e-14);
  EXPECT_NEAR(e.d2(0.5), 0.49 * 3.0 * std::exp(-0.35), 1e-14);

  ScalarProfile c = ScalarProfile::cosh_profile(2.0, kDom);
  EXPECT_NEAR(c.value(0.3), std::cosh(0.6), 1e-14);
  EXPECT_NEAR(c.d2(0.3), 4.0 * std::cosh(0.6), 1e-13);
  EXPECT_LT(validate_profile(e), 1e-5);
  EXPECT_LT(validate_profile(c), 1e-5);
}

TEST(ScalarProfile, SinhPowMatchesHandDerivative) {
  Interval dom{0.05, 3.0, false, false};
  ScalarProfile a = ScalarProfile::sinh_pow(2.0 / 3.0, 1.5, dom);
  double t = 0.8;
  double s = std::sinh(1.5 * t);
  double c = std::cosh(1.5 * t);
  EXPECT_NEAR(a.value(t), std::pow(s, 2.0 / 3.0), 1e-14);
  // d/dt sinh^{2/3}(3t/2) = cosh(3t/2) sinh^{-1/3}(3t/2)
  EXPECT_NEAR(a.d1(t), c * std::pow(s, -1.0 / 3.0), 1e-13);
  EXPECT_LT(validate_profile(a), 1e-4);
}

TEST(ScalarProfile, PolynomialAndSinusoid) {
  ScalarProfile p = ScalarProfile::polynomial({1.0, -2.0, 0.5}, kDom);
  EXPECT_NEAR(p.value(1.5), 1.0 - 3.0 + 0.5 * 2.25, 1e-14);
  EXPECT_NEAR(p.d1(1.5), -2.0 + 1.5, 1e-14);
  EXPECT_NEAR(p.d2(1.5), 1.0, 1e-14);

  ScalarProfile s = ScalarProfile::sinusoid(0.5, 0.2, 3.0, kDom);
  EXPECT_NEAR(s.value(0.4), 0.5 + 0.2 * std::sin(1.2), 1e-14);
  EXPECT_NEAR(s.d1(0.4), 0.6 * std::cos(1.2), 1e-14);
  EXPECT_NEAR(s.d2(0.4), -1.8 * std::sin(1.2), 1e-14);
  EXPECT_LT(validate_profile(p), 1e-6);
  EXPECT_LT(validate_profile(s), 1e-6);
}

TEST(ScalarProfile, SumProductScaledComposeDerivatives) {
  ScalarProfile a = ScalarProfile::sinusoid(0.0, 1.0, 2.0, kDom);
  ScalarProfile b = ScalarProfile::exponential(1.0, 0.5, kDom);
  ScalarProfile s = ScalarProfile::sum(a, b);
  ScalarProfile p = ScalarProfile::product(a, b);
  ScalarProfile k = ScalarProfile::scaled(b, -2.0);
  double t = 0.7;
  EXPECT_NEAR(s.value(t), a.value(t) + b.value(t), 1e-14);
  EXPECT_NEAR(s.d2(t), a.d2(t) + b.d2(t), 1e-14);
  EXPECT_NEAR(p.d1(t), a.d1(t) * b.value(t) + a.value(t) * b.d1(t), 1e-14);
  EXPECT_NEAR(p.d2(t),
              a.d2(t) * b.value(t) + 2.0 * a.d1(t) * b.d1(t) + a.value(t) * b.d2(t), 1e-14);
  EXPECT_NEAR(k.d1(t), -2.0 * b.d1(t), 1e-14);
  EXPECT_LT(validate_profile(p), 1e-5);
}

TEST(ScalarProfile, NegLogChainRule) {
  Interval dom{0.0, 2.0, false, false};
  ScalarProfile phi = ScalarProfile::exponential(2.0, -0.5, dom);
  ScalarProfile f = ScalarProfile::neg_log_of(phi);
  double t = 1.3;
  EXPECT_NEAR(f.value(t), -std::log(2.0) + 0.5 * t, 1e-14);
  EXPECT_NEAR(f.d1(t), 0.5, 1e-14);
  EXPECT_NEAR(f.d2(t), 0.0, 1e-14);
  EXPECT_LT(validate_profile(f), 1e-6);
}

TEST(ScalarProfile, FromCallableUsesCentralDifferences) {
  ScalarProfile g = ScalarProfile::from_callable(
      "gauss", [](double t) { return std::exp(-t * t); }, kDom);
  double t = 0.6;
  EXPECT_NEAR(g.d1(t), -2.0 * t * std::exp(-t * t), 1e-7);
  EXPECT_NEAR(g.d2(t), (4.0 * t * t - 2.0) * std::exp(-t * t), 1e-4);
  EXPECT_FALSE(g.analytic_derivatives());
}

TEST(ScalarProfile, TimeReversedFlipsDomainAndOddDerivatives) {
  Interval dom{0.0, 2.0, true, false};
  ScalarProfile a = ScalarProfile::sinusoid(1.0, 0.3, 2.0, dom);
  ScalarProfile r = a.time_reversed();
  EXPECT_DOUBLE_EQ(r.domain().lo, -2.0);
  EXPECT_DOUBLE_EQ(r.domain().hi, 0.0);
  EXPECT_TRUE(r.domain().open_hi);
  EXPECT_FALSE(r.domain().open_lo);
  double t = -0.9;
  EXPECT_NEAR(r.value(t), a.value(-t), 1e-15);
  EXPECT_NEAR(r.d1(t), -a.d1(-t), 1e-15);
  EXPECT_NEAR(r.d2(t), a.d2(-t), 1e-15);
}

TEST(ScalarProfile, SampledExtremaBracketTrueExtrema) {
  ScalarProfile s = ScalarProfile::sinusoid(0.5, 0.2, 3.0, kDom);
  EXPECT_NEAR(s.sampled_max(), 0.7, 1e-4);
  EXPECT_NEAR(s.sampled_min(), 0.3, 1e-4);
  EXPECT_NEAR(s.sampled_max_abs_d1(), 0.6, 1e-3);
  EXPECT_LE(s.sampled_max(), 0.7 + 1e-12);
  EXPECT_GE(s.sampled_min(), 0.3 - 1e-12);
}

TEST(ScalarProfile, ValidateFlagsLyingDerivative) {
  ScalarProfile bad = ScalarProfile::analytic(
      "bad", [](double t) { return t * t; }, [](double) { return 0.0; },
      [](double) { return 2.0; }, kDom);
  EXPECT_GT(validate_profile(bad), 1e-2);
}

}  // namespace

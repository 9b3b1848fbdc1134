#pragma once

#include <cmath>
#include <random>

#include "raylab/geometry.hpp"

// Closed-form cosmologies reused across the suite.  Every expected value
// quoted next to these builders was computed by hand from the scale factor
// before the library code existed.
namespace test_models {

using raylab::CausalDir;
using raylab::Interval;
using raylab::ScalarProfile;
using raylab::SpaceForm;
using raylab::WarpedSpacetime;
using raylab::WeightProfile;

// Matter-dominated flat expansion, a(t) = t^{2/3} on (0, hi].
inline WarpedSpacetime matter_flat(double hi = 4.0) {
  Interval dom{0.0, hi, true, false};
  return WarpedSpacetime(4, SpaceForm::Flat, ScalarProfile::power(1.0, 2.0 / 3.0, dom), dom);
}

// Flat expansion with a positive cosmological constant, a = sinh^{2/3}(3t/2).
inline WarpedSpacetime lambda_matter_flat(double hi = 3.0) {
  Interval dom{0.0, hi, true, false};
  return WarpedSpacetime(4, SpaceForm::Flat, ScalarProfile::sinh_pow(2.0 / 3.0, 1.5, dom), dom);
}

// Static spherical universe, a identically 1.
inline WarpedSpacetime static_spherical(Interval dom = {-2.0, 2.0, false, false}) {
  return WarpedSpacetime(4, SpaceForm::Spherical, ScalarProfile::constant(1.0, dom), dom);
}

// Static flat product, a identically 1.
inline WarpedSpacetime static_flat(Interval dom = {-2.0, 2.0, false, false}) {
  return WarpedSpacetime(4, SpaceForm::Flat, ScalarProfile::constant(1.0, dom), dom);
}

// Exponential contraction a = e^{-t}.
inline WarpedSpacetime exp_contracting(Interval dom = {-1.0, 3.0, false, false}) {
  return WarpedSpacetime(4, SpaceForm::Flat, ScalarProfile::exponential(1.0, -1.0, dom), dom);
}

// a = exp(p(t)) with p an explicit polynomial-plus-sine, derivatives by chain rule.
inline ScalarProfile exp_of(double c0, double c1, double c2, double amp, double freq,
                            Interval dom) {
  auto p = [=](double t) { return c0 + c1 * t + c2 * t * t + amp * std::sin(freq * t); };
  auto p1 = [=](double t) { return c1 + 2.0 * c2 * t + amp * freq * std::cos(freq * t); };
  auto p2 = [=](double t) { return 2.0 * c2 - amp * freq * freq * std::sin(freq * t); };
  return ScalarProfile::analytic(
      "exp_of", [=](double t) { return std::exp(p(t)); },
      [=](double t) { return p1(t) * std::exp(p(t)); },
      [=](double t) { return (p2(t) + p1(t) * p1(t)) * std::exp(p(t)); }, dom);
}

// Collapsing power-law a = (T - t)^q on [lo, T).  For q in (0, 1] both the
// normal-normal curvature 3q(1-q)/(T-t)^2 and its boost slope 2q/(T-t)^2 are
// nonnegative, so the unweighted energy condition holds for free.
inline WarpedSpacetime collapsing_power(double T, double q, double lo = 0.0) {
  Interval dom{lo, T, false, true};
  auto a = [=](double t) { return std::pow(T - t, q); };
  auto a1 = [=](double t) { return -q * std::pow(T - t, q - 1.0); };
  auto a2 = [=](double t) { return q * (q - 1.0) * std::pow(T - t, q - 2.0); };
  return WarpedSpacetime(4, SpaceForm::Flat,
                         ScalarProfile::analytic("collapse", a, a1, a2, dom), dom);
}

inline WeightProfile zero_weight(const WarpedSpacetime& M) {
  return WeightProfile::zero(M.tdomain);
}

// Small sinusoidal weight with its sampled sup declared.
inline WeightProfile wiggle_weight(double base, double amp, double freq, Interval dom) {
  ScalarProfile f = ScalarProfile::sinusoid(base, amp, freq, dom);
  double sup = f.sampled_max();
  return WeightProfile(std::move(f), sup, CausalDir::None);
}

}  // namespace test_models

#pragma once

// Closed-form curvature of warped-product spacetimes g = -dt^2 + a(t)^2 h,
// where (S, h) is a compact space form of sectional curvature kappa, together
// with the weighted (Bakry-Emery) Ricci tensor Ric_f = Ric + Hess f for
// weights f = f(t).  Observables are evaluated along boosted unit timelike
// directions X(beta) = cosh(beta) nu + sinh(beta) e, nu the future normal of
// the t-slices and e any unit slice vector; homogeneity makes the choice of e
// irrelevant.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "raylab/profile.hpp"

namespace raylab {

enum class SpaceForm : int { Hyperbolic = -1, Flat = 0, Spherical = 1 };

enum class CausalDir { Future, Past, None };

inline const char* to_string(CausalDir d) {
  switch (d) {
    case CausalDir::Future: return "future";
    case CausalDir::Past: return "past";
    default: return "none";
  }
}

struct WarpedSpacetime {
  int n = 4;             // spacetime dimension, slices have dimension n-1
  SpaceForm kappa = SpaceForm::Flat;
  ScalarProfile a;       // warping factor, positive on tdomain
  Interval tdomain;

  WarpedSpacetime() = default;
  WarpedSpacetime(int n_, SpaceForm k_, ScalarProfile a_, Interval dom)
      : n(n_), kappa(k_), a(std::move(a_)), tdomain(dom) {
    if (n < 2) throw std::invalid_argument("WarpedSpacetime: dimension must be >= 2");
    if (tdomain.empty() || !(tdomain.lo < tdomain.hi))
      throw std::invalid_argument("WarpedSpacetime: empty time domain");
    Interval in = tdomain.inner();
    for (int i = 0; i <= 512; ++i) {
      double t = in.lo + (in.hi - in.lo) * i / 512.0;
      if (!(a.value(t) > 0.0))
        throw std::invalid_argument("WarpedSpacetime: scale factor not positive at t=" +
                                    std::to_string(t));
    }
  }

  double kappa_value() const { return static_cast<double>(static_cast<int>(kappa)); }

  WarpedSpacetime time_reversed() const {
    WarpedSpacetime m;
    m.n = n;
    m.kappa = kappa;
    m.a = a.time_reversed();
    m.tdomain = tdomain.reversed();
    return m;
  }
};

// Weight f(t) plus the model-level assertions the theorems consume: an
// optional declared upper bound and the causal character of grad f.
struct WeightProfile {
  ScalarProfile f;
  std::optional<double> sup_bound;   // declared k with f <= k on tdomain
  CausalDir grad_causal = CausalDir::None;

  WeightProfile() = default;
  explicit WeightProfile(ScalarProfile f_, std::optional<double> k = std::nullopt,
                         CausalDir gc = CausalDir::None)
      : f(std::move(f_)), sup_bound(k), grad_causal(gc) {
    if (sup_bound && f.sampled_max() > *sup_bound + 1e-12 * std::max(1.0, std::fabs(*sup_bound)))
      throw std::invalid_argument("WeightProfile: declared sup bound violated by f");
    // grad f = -f'(t) d/dt, so future-causal grad f means f' <= 0.
    double tol = 1e-12 * std::max(1.0, f.sampled_max_abs_d1());
    if (grad_causal == CausalDir::Future || grad_causal == CausalDir::Past) {
      Interval in = f.domain().inner();
      for (int i = 0; i <= 512; ++i) {
        double t = in.lo + (in.hi - in.lo) * i / 512.0;
        double d = f.d1(t);
        if (grad_causal == CausalDir::Future && d > tol)
          throw std::invalid_argument("WeightProfile: grad_causal=future requires f' <= 0");
        if (grad_causal == CausalDir::Past && d < -tol)
          throw std::invalid_argument("WeightProfile: grad_causal=past requires f' >= 0");
      }
    }
  }

  static WeightProfile zero(Interval dom) {
    return WeightProfile(ScalarProfile::constant(0.0, dom), 0.0, CausalDir::Future);
  }

  bool gradient_vanishes() const { return f.sampled_max_abs_d1() == 0.0; }

  // A vanishing gradient is causal in either sense.
  bool grad_causal_satisfies(CausalDir needed) const {
    if (needed == CausalDir::None) return true;
    if (gradient_vanishes()) return true;
    return grad_causal == needed;
  }

  WeightProfile time_reversed() const {
    WeightProfile w;
    w.f = f.time_reversed();
    w.sup_bound = sup_bound;
    if (gradient_vanishes())
      w.grad_causal = grad_causal;
    else if (grad_causal == CausalDir::Future)
      w.grad_causal = CausalDir::Past;
    else if (grad_causal == CausalDir::Past)
      w.grad_causal = CausalDir::Future;
    else
      w.grad_causal = CausalDir::None;
    return w;
  }
};

// Unit timelike direction at (t, beta); g(X,X) = -cosh^2 + sinh^2 = -1.
struct Observer {
  double t = 0.0;
  double beta = 0.0;
  double norm() const {
    double c = std::cosh(beta), s = std::sinh(beta);
    return -c * c + s * s;
  }
};

namespace detail {
inline void require_in_domain(const WarpedSpacetime& M, double t, const char* op) {
  if (!M.tdomain.contains(t))
    throw std::domain_error(std::string(op) + ": t=" + std::to_string(t) +
                            " outside the model time domain");
}
}  // namespace detail

// Ric(nu,nu) = -(n-1) a''/a for the slice normal.
inline double ricci_normal(const WarpedSpacetime& M, double t) {
  detail::require_in_domain(M, t, "ricci_normal");
  return -(M.n - 1) * M.a.d2(t) / M.a.value(t);
}

// Ric(e,e) = a''/a + (n-2)((a')^2 + kappa)/a^2 for unit slice vectors.
inline double ricci_spatial(const WarpedSpacetime& M, double t) {
  detail::require_in_domain(M, t, "ricci_spatial");
  double a = M.a.value(t), a1 = M.a.d1(t), a2 = M.a.d2(t);
  return a2 / a + (M.n - 2) * (a1 * a1 + M.kappa_value()) / (a * a);
}

namespace detail {
// Boost combinations parameterised by s2 = sinh^2(beta); cosh^2 = 1 + s2.
inline double ricci_obs_s2(const WarpedSpacetime& M, double t, double s2) {
  return (1.0 + s2) * ricci_normal(M, t) + s2 * ricci_spatial(M, t);
}
inline double hess_f_obs_s2(const WarpedSpacetime& M, const WeightProfile& w, double t,
                            double s2) {
  double hub = M.a.d1(t) / M.a.value(t);
  return (1.0 + s2) * w.f.d2(t) - s2 * hub * w.f.d1(t);
}
}  // namespace detail

// Ric(X,X) along X(beta).  Cross terms Ric(nu,e) vanish by homogeneity.
inline double ricci_obs(const WarpedSpacetime& M, double t, double beta) {
  double s = std::sinh(beta);
  return detail::ricci_obs_s2(M, t, s * s);
}

// Hess f(X,X) = cosh^2(beta) f'' - sinh^2(beta) (a'/a) f' for f = f(t).
// The spatial part is -(a'/a) f' because grad f = -f' d/dt and
// nabla_e e = (a'/a) a^2 h(e,e) d/dt picks up the warping.
inline double hess_f_obs(const WarpedSpacetime& M, const WeightProfile& w, double t,
                         double beta) {
  detail::require_in_domain(M, t, "hess_f_obs");
  double s = std::sinh(beta);
  return detail::hess_f_obs_s2(M, w, t, s * s);
}

// Bakry-Emery combination Ric_f(X,X) = Ric(X,X) + Hess f(X,X).
inline double ric_f_obs(const WarpedSpacetime& M, const WeightProfile& w, double t,
                        double beta) {
  return ricci_obs(M, t, beta) + hess_f_obs(M, w, t, beta);
}

// Second fundamental form of the t-slices is pure trace: K = (a'/a) h.
// Mean curvature H = (n-1) a'/a, so expansion means H > 0.
inline double shape_operator_coeff(const WarpedSpacetime& M, double t) {
  detail::require_in_domain(M, t, "shape_operator_coeff");
  return M.a.d1(t) / M.a.value(t);
}

inline double mean_curvature(const WarpedSpacetime& M, double t) {
  detail::require_in_domain(M, t, "mean_curvature");
  return (M.n - 1) * M.a.d1(t) / M.a.value(t);
}

// Weighted mean curvature H_f = H - f' (the f-expansion of the slices).
inline double f_mean_curvature(const WarpedSpacetime& M, const WeightProfile& w, double t) {
  return mean_curvature(M, t) - w.f.d1(t);
}

// Independent recomputation of ricci_obs and hess_f_obs from value-only
// samples of the metric coefficient A(t) = a(t)^2 and the weight, assembled
// through the Gaussian-normal-coordinate curvature formulas
//   R_tt   = -d (A''/(2A) - (A')^2/(4A^2))
//   R_ee   = [ (d-1) kappa + A''/2 + (d-2) (A')^2/(4A) ] / A
//   Hess f = cosh^2 f'' - sinh^2 (A'/(2A)) f'
// with A', A'' by second-order central differences, Richardson-extrapolated
// over steps h and h/2.  Returns the worst relative discrepancy.
inline double fd_validate(const WarpedSpacetime& M, const WeightProfile& w, double t,
                          double beta, double h = 1e-3) {
  detail::require_in_domain(M, t, "fd_validate");
  if (!(h > 0.0) || !M.tdomain.contains(t - h) || !M.tdomain.contains(t + h))
    throw std::domain_error("fd_validate: finite-difference stencil leaves the time domain");

  auto A = [&M](double s) { double v = M.a.value(s); return v * v; };
  auto F = [&w](double s) { return w.f.value(s); };
  int d = M.n - 1;
  double kap = M.kappa_value();
  double s2 = std::sinh(beta) * std::sinh(beta);

  struct Obs { double ric, hess; };
  auto assemble = [&](double step) -> Obs {
    double A0 = A(t), Ap = (A(t + step) - A(t - step)) / (2.0 * step);
    double App = (A(t + step) - 2.0 * A0 + A(t - step)) / (step * step);
    double f1 = (F(t + step) - F(t - step)) / (2.0 * step);
    double f2 = (F(t + step) - 2.0 * F(t) + F(t - step)) / (step * step);
    double rtt = -d * (App / (2.0 * A0) - Ap * Ap / (4.0 * A0 * A0));
    double ree = ((d - 1) * kap + App / 2.0 + (d - 2) * Ap * Ap / (4.0 * A0)) / A0;
    Obs o;
    o.ric = (1.0 + s2) * rtt + s2 * ree;
    o.hess = (1.0 + s2) * f2 - s2 * (Ap / (2.0 * A0)) * f1;
    return o;
  };

  Obs ch = assemble(h), ch2 = assemble(h / 2.0);
  // central differences are O(h^2): Richardson combine
  double ric_fd = (4.0 * ch2.ric - ch.ric) / 3.0;
  double hess_fd = (4.0 * ch2.hess - ch.hess) / 3.0;

  double ric_cf = ricci_obs(M, t, beta);
  double hess_cf = hess_f_obs(M, w, t, beta);
  double e1 = std::fabs(ric_fd - ric_cf) / std::max(1.0, std::fabs(ric_cf));
  double e2 = std::fabs(hess_fd - hess_cf) / std::max(1.0, std::fabs(hess_cf));
  return std::max(e1, e2);
}

}  // namespace raylab

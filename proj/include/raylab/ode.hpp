#pragma once

// Embedded Dormand-Prince 5(4) pair with proportional step control.  Small
// fixed-size states only; the laboratory never integrates more than four
// coupled scalars.  A fixed-step mode (error estimate ignored) backs the
// convergence-order tests.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>

namespace raylab {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double hmin = 1e-12;          // step floor; controller never goes below
  double hmax = std::numeric_limits<double>::infinity();
  double h0 = 0.0;              // initial step, 0 = auto
  double fixed_step = 0.0;      // > 0 disables adaptivity
};

template <std::size_t N>
using OdeState = std::array<double, N>;

namespace ode_detail {

template <std::size_t N>
inline OdeState<N> axpy(const OdeState<N>& y, double h, const OdeState<N>& k) {
  OdeState<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h * k[i];
  return r;
}

}  // namespace ode_detail

// One DP5(4) step from (t, y) with step h.  Returns the 5th-order solution
// and the embedded error estimate.  FSAL is not exploited; clarity wins at
// this problem size.
template <std::size_t N, class F>
bool dp45_step(const F& f, double t, const OdeState<N>& y, double h, OdeState<N>& y_out,
               double& err_norm, const OdeOptions& opts) {
  using ode_detail::axpy;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  OdeState<N> k1 = f(t, y);
  OdeState<N> k2 = f(t + c2 * h, axpy(y, h * (1.0 / 5), k1));
  OdeState<N> y3;
  for (std::size_t i = 0; i < N; ++i)
    y3[i] = y[i] + h * (3.0 / 40 * k1[i] + 9.0 / 40 * k2[i]);
  OdeState<N> k3 = f(t + c3 * h, y3);
  OdeState<N> y4;
  for (std::size_t i = 0; i < N; ++i)
    y4[i] = y[i] + h * (44.0 / 45 * k1[i] - 56.0 / 15 * k2[i] + 32.0 / 9 * k3[i]);
  OdeState<N> k4 = f(t + c4 * h, y4);
  OdeState<N> y5;
  for (std::size_t i = 0; i < N; ++i)
    y5[i] = y[i] + h * (19372.0 / 6561 * k1[i] - 25360.0 / 2187 * k2[i] +
                        64448.0 / 6561 * k3[i] - 212.0 / 729 * k4[i]);
  OdeState<N> k5 = f(t + c5 * h, y5);
  OdeState<N> y6;
  for (std::size_t i = 0; i < N; ++i)
    y6[i] = y[i] + h * (9017.0 / 3168 * k1[i] - 355.0 / 33 * k2[i] + 46732.0 / 5247 * k3[i] +
                        49.0 / 176 * k4[i] - 5103.0 / 18656 * k5[i]);
  OdeState<N> k6 = f(t + h, y6);
  OdeState<N> y7;
  for (std::size_t i = 0; i < N; ++i)
    y7[i] = y[i] + h * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] + 125.0 / 192 * k4[i] -
                        2187.0 / 6784 * k5[i] + 11.0 / 84 * k6[i]);
  OdeState<N> k7 = f(t + h, y7);

  // 4th-order comparison solution
  err_norm = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double y4th = y[i] + h * (5179.0 / 57600 * k1[i] + 7571.0 / 16695 * k3[i] +
                              393.0 / 640 * k4[i] - 92097.0 / 339200 * k5[i] +
                              187.0 / 2100 * k6[i] + 1.0 / 40 * k7[i]);
    double sc = opts.atol + opts.rtol * std::max(std::fabs(y[i]), std::fabs(y7[i]));
    double e = (y7[i] - y4th) / sc;
    err_norm += e * e;
    if (!std::isfinite(y7[i])) return false;
  }
  err_norm = std::sqrt(err_norm / N);
  y_out = y7;
  return std::isfinite(err_norm);
}

// Adaptive driver from t0 to t1 (t1 > t0).  The observer is called with
// (t, y) after every accepted step, including the initial state.  Returns
// false if the right-hand side went non-finite; the state arguments then
// hold the last valid point.
template <std::size_t N, class F, class Obs>
bool integrate_adaptive(const F& f, double t0, double t1, OdeState<N> y0, const OdeOptions& opts,
                        Obs&& observer, double* t_reached = nullptr, OdeState<N>* y_final = nullptr) {
  double t = t0;
  OdeState<N> y = y0;
  observer(t, y);
  double h = opts.fixed_step > 0.0 ? opts.fixed_step
                                   : (opts.h0 > 0.0 ? opts.h0 : (t1 - t0) / 100.0);
  h = std::min(h, opts.hmax);
  bool ok = true;
  while (t < t1) {
    h = std::min(h, t1 - t);
    if (opts.fixed_step <= 0.0) h = std::max(h, opts.hmin);
    OdeState<N> y_next;
    double err;
    if (!dp45_step<N>(f, t, y, h, y_next, err, opts)) {
      ok = false;
      break;
    }
    if (opts.fixed_step > 0.0 || err <= 1.0 || h <= opts.hmin) {
      t += h;
      y = y_next;
      observer(t, y);
      if (opts.fixed_step <= 0.0) {
        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h = std::min(opts.hmax, h * std::clamp(fac, 0.2, 5.0));
      }
    } else {
      double fac = 0.9 * std::pow(err, -0.2);
      h = std::max(opts.hmin, h * std::clamp(fac, 0.2, 1.0));
    }
  }
  if (t_reached) *t_reached = t;
  if (y_final) *y_final = y;
  return ok;
}

}  // namespace raylab

#pragma once

// Comoving-congruence focusing.  The slice normals of a warped product are
// shear- and vorticity-free, so the expansion obeys the scalar Riccati
// equation H' = -Ric(nu,nu) - H^2/(n-1).  We track the normalized weighted
// expansion x = H_f/(n-1) = (H - f')/(n-1), detect finite-time blow-up, and
// compare trajectories against the closed-form focusing deadlines.
//
// Near a pole the integrator switches to u = 1/x, which crosses zero with
// unit slope where x diverges; the first time |x| reaches the blow-up
// threshold is then refined by bisection with local re-integration.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "raylab/geometry.hpp"
#include "raylab/ode.hpp"

namespace raylab {

struct CongruenceSample {
  double t, H, H_f, x, f, fprime;
};

enum class TrajectoryStatus { ReachedTmax, ReachedDomainEdge, BlowUp, RhsNonFinite };

struct BlowUpInfo {
  double t_blow = 0.0;
  bool detected = false;
};

struct CongruenceTrajectory {
  int n = 4;
  std::vector<CongruenceSample> samples;
  std::optional<BlowUpInfo> blowup;
  TrajectoryStatus status = TrajectoryStatus::ReachedTmax;

  void to_csv(std::ostream& os) const {
    os << "t,H,H_f,x,f,fprime\n";
    char buf[256];
    for (const auto& s : samples) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.H, s.H_f,
                    s.x, s.f, s.fprime);
      os << buf;
    }
  }
};

struct RayOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double hmin = 1e-12;
  double max_step = 0.0;        // 0 = (t_end - t0)/256
  double fixed_step = 0.0;      // > 0 disables adaptivity
  double x_blowup = 1e8;        // |x| threshold declaring blow-up
  double refine_res = 1e-8;     // bisection resolution for t_blow
};

namespace focusing_detail {

enum class Form { H, U };  // integrate H itself, or u = 1/x near a pole

struct RayState {
  double t = 0.0;
  double y = 0.0;  // H in Form::H, u in Form::U
  Form form = Form::H;
};

class RayIntegrator {
 public:
  RayIntegrator(const WarpedSpacetime& M, const WeightProfile& w, const RayOptions& opts)
      : M_(M), w_(w), opts_(opts), n1_(M.n - 1) {}

  double x_of(const RayState& s) const {
    if (s.form == Form::U) return 1.0 / s.y;
    return (s.y - w_.f.d1(s.t)) / n1_;
  }
  double H_of(const RayState& s) const {
    if (s.form == Form::U) return n1_ / s.y + w_.f.d1(s.t);
    return s.y;
  }

  // dH/dt and dx/dt
  double rhs_H(double t, double H) const {
    return -ricci_normal(M_, t) - H * H / n1_;
  }
  double rhs_x(double t, double H) const { return (rhs_H(t, H) - w_.f.d2(t)) / n1_; }

  // Advance st toward t_target.  Returns true if the |x| >= threshold
  // region was entered; st then holds the state at the end of the tripping
  // step and *bracket_lo the last state before it.
  bool advance(double t_target, RayState& st, std::vector<CongruenceSample>* rec,
               RayState* bracket_lo, bool* nonfinite) {
    *nonfinite = false;
    double h = opts_.fixed_step > 0.0 ? opts_.fixed_step : suggest_h_;
    while (st.t < t_target - 1e-14 * std::max(1.0, std::fabs(t_target))) {
      h = std::min(h, t_target - st.t);
      RayState prev = st;
      double err = 0.0;
      double y_next;
      bool finite = step_once(st, h, y_next, err);
      if (!finite) {
        if (h > opts_.hmin * 4.0) {
          h *= 0.25;
          continue;
        }
        *nonfinite = true;
        return false;
      }
      bool accept = opts_.fixed_step > 0.0 || err <= 1.0 || h <= opts_.hmin;
      if (!accept) {
        h = std::max(opts_.hmin, h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0));
        continue;
      }
      st.t = prev.t + h;
      st.y = y_next;
      if (opts_.fixed_step <= 0.0) {
        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        suggest_h_ = std::min(max_step_, h * std::clamp(fac, 0.2, 5.0));
        h = suggest_h_;
      }
      double x = x_of(st);
      if (rec) rec->push_back(make_sample(st));
      if (tripped(st, x)) {
        if (bracket_lo) *bracket_lo = prev;
        return true;
      }
      maybe_switch(st, x);
    }
    return false;
  }

  CongruenceSample make_sample(const RayState& s) const {
    double H = H_of(s);
    double f1 = w_.f.d1(s.t);
    return {s.t, H, H - f1, (H - f1) / n1_, w_.f.value(s.t), f1};
  }

  void set_max_step(double ms) {
    max_step_ = ms;
    suggest_h_ = ms / 4.0;
  }

 private:
  bool tripped(const RayState& s, double x) const {
    if (s.form == Form::U) return s.y >= -1.0 / opts_.x_blowup;  // covers crossing past the pole
    return std::fabs(x) >= opts_.x_blowup;
  }

  void maybe_switch(RayState& s, double x) {
    if (s.form == Form::H && x <= -2.0) {
      s.y = 1.0 / x;
      s.form = Form::U;
    } else if (s.form == Form::U && x >= -1.5) {
      s.y = H_of(s);
      s.form = Form::H;
    }
  }

  bool step_once(const RayState& s, double h, double& y_next, double& err) {
    OdeOptions o;
    o.rtol = opts_.rtol;
    o.atol = opts_.atol;
    OdeState<1> y{s.y}, out;
    bool fin;
    if (s.form == Form::H) {
      auto f = [this](double t, const OdeState<1>& v) -> OdeState<1> {
        return {rhs_H(t, v[0])};
      };
      fin = dp45_step<1>(f, s.t, y, h, out, err, o);
    } else {
      auto f = [this](double t, const OdeState<1>& v) -> OdeState<1> {
        double u = v[0];
        double H = n1_ / u + w_.f.d1(t);
        return {-u * u * rhs_x(t, H)};
      };
      fin = dp45_step<1>(f, s.t, y, h, out, err, o);
    }
    y_next = out[0];
    return fin;
  }

  const WarpedSpacetime& M_;
  const WeightProfile& w_;
  RayOptions opts_;
  double n1_;
  double max_step_ = 1.0;
  double suggest_h_ = 0.01;
};

}  // namespace focusing_detail

inline CongruenceTrajectory integrate_raychaudhuri(const WarpedSpacetime& M,
                                                   const WeightProfile& w, double t0,
                                                   double tmax,
                                                   std::optional<double> H0 = std::nullopt,
                                                   const RayOptions& opts = {}) {
  using namespace focusing_detail;
  if (!M.tdomain.contains(t0))
    throw std::domain_error("integrate_raychaudhuri: t0 outside the model time domain");
  if (!(tmax > t0)) throw std::invalid_argument("integrate_raychaudhuri: tmax must exceed t0");

  double edge = M.tdomain.open_hi ? M.tdomain.inner().hi : M.tdomain.hi;
  double t_end = std::min(tmax, edge);

  RayIntegrator integ(M, w, opts);
  integ.set_max_step(opts.fixed_step > 0.0
                         ? opts.fixed_step
                         : (opts.max_step > 0.0 ? opts.max_step : (t_end - t0) / 256.0));

  RayState st;
  st.t = t0;
  st.y = H0 ? *H0 : mean_curvature(M, t0);
  st.form = Form::H;
  double x0 = integ.x_of(st);
  if (x0 <= -2.0) {
    st.y = 1.0 / x0;
    st.form = Form::U;
  }

  CongruenceTrajectory traj;
  traj.n = M.n;
  traj.samples.push_back(integ.make_sample(st));

  RayState bracket_lo = st;
  bool nonfinite = false;
  bool trip = integ.advance(t_end, st, &traj.samples, &bracket_lo, &nonfinite);

  if (nonfinite) {
    traj.status = TrajectoryStatus::RhsNonFinite;
    return traj;
  }
  if (!trip) {
    traj.status = t_end < tmax ? TrajectoryStatus::ReachedDomainEdge
                               : TrajectoryStatus::ReachedTmax;
    return traj;
  }

  // Bisect for the first time |x| reaches the threshold: keep a state known
  // to be below threshold at lo, re-integrate to midpoints.
  double lo = bracket_lo.t, hi = st.t;
  RayState lo_state = bracket_lo;
  while (hi - lo > opts.refine_res) {
    double mid = 0.5 * (lo + hi);
    RayState probe = lo_state;
    bool nf = false;
    bool tr = integ.advance(mid, probe, nullptr, nullptr, &nf);
    if (nf) break;
    if (tr) {
      hi = probe.t;
    } else {
      lo = mid;
      lo_state = probe;
    }
  }
  double t_blow = 0.5 * (lo + hi);
  // drop samples past the refined blow-up time, then close with it
  while (!traj.samples.empty() && traj.samples.back().t >= t_blow)
    traj.samples.pop_back();
  CongruenceSample last = integ.make_sample(lo_state);
  if (traj.samples.empty() || traj.samples.back().t < last.t) traj.samples.push_back(last);
  traj.blowup = BlowUpInfo{t_blow, true};
  traj.status = TrajectoryStatus::BlowUp;
  return traj;
}

// Focusing deadlines.  Kind tags name the two bound shapes: a simple-pole
// bound -1/(t_p - t) under the nonnegative energy condition, and a coth
// bound under the -(n-1) condition.
struct FocusingBound {
  enum class Kind { L21, L22 };
  Kind kind = Kind::L21;
  double t_p = 0.0;
  double delta = 0.0;
  double k = 0.0;
  double f0 = 0.0;
  int n = 4;
  // optional multiplicative factor turning the normalized L22 bound into the
  // unnormalized x-bound, exp(2(k - f(t0+s))/(n-1))
  std::function<double(double)> weight_factor;

  double bound(double s) const {
    if (!(s >= 0.0) || !(s < t_p))
      throw std::domain_error("FocusingBound: argument outside [0, t_p)");
    double base;
    if (kind == Kind::L21)
      base = -1.0 / (t_p - s);
    else
      base = -1.0 / std::tanh(t_p - s);
    if (weight_factor) base *= weight_factor(s);
    return base;
  }
};

// Deadline under Ric_f(nu,nu) >= 0 with f <= k and f(t_S) = f0:
// t_p = (1/delta) exp(2(k - f0)/(n-1)), bound -1/(t_p - t).
inline FocusingBound lemma21_deadline(double delta, double k, double f0, int n) {
  if (!(delta > 0.0)) throw std::invalid_argument("lemma21_deadline: delta must be positive");
  if (n < 2) throw std::invalid_argument("lemma21_deadline: n must be >= 2");
  if (k < f0 - 1e-12 * std::max(1.0, std::fabs(f0)))
    throw std::invalid_argument("lemma21_deadline: k must dominate f0");
  FocusingBound b;
  b.kind = FocusingBound::Kind::L21;
  b.delta = delta;
  b.k = k;
  b.f0 = f0;
  b.n = n;
  b.t_p = (1.0 / delta) * std::exp(2.0 * (k - f0) / (n - 1));
  return b;
}

// Deadline under Ric_f(nu,nu) >= -(n-1) with x(0) <= -(1+delta) in the
// normalized variable: t_p = arctanh(1/(1+delta)), bound -coth(t_p - t).
inline FocusingBound lemma22_deadline(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("lemma22_deadline: delta must be positive");
  FocusingBound b;
  b.kind = FocusingBound::Kind::L22;
  b.delta = delta;
  b.t_p = std::atanh(1.0 / (1.0 + delta));
  return b;
}

// Unnormalized x-bound carrying the weight along the trajectory that starts
// at absolute time t0: bound(s) = -exp(2(k - f(t0+s))/(n-1)) coth(t_p - s).
inline FocusingBound with_weight(FocusingBound b, const WeightProfile& w, double k, int n,
                                 double t0) {
  if (b.kind != FocusingBound::Kind::L22)
    throw std::invalid_argument("with_weight: only the coth bound carries a weight factor");
  ScalarProfile f = w.f;
  b.k = k;
  b.n = n;
  b.weight_factor = [f, k, n, t0](double s) {
    return std::exp(2.0 * (k - f.value(t0 + s)) / (n - 1));
  };
  return b;
}

struct ComparisonReport {
  double max_violation = -std::numeric_limits<double>::infinity();
  double argmax_t = 0.0;
  std::size_t n_checked = 0;
  bool passed = false;
};

// Max over samples of x - bound, in the trajectory's own proper time
// (s = t - t_first).  Samples at or beyond the deadline count as infinite
// violation: the bound asserts blow-up strictly before t_p.
inline ComparisonReport check_comparison(const CongruenceTrajectory& traj,
                                         const FocusingBound& b, double tol = 1e-8) {
  if (traj.samples.empty())
    throw std::invalid_argument("check_comparison: empty trajectory");
  ComparisonReport rep;
  double t_first = traj.samples.front().t;
  double pole_pad = 1e-13 * std::max(1.0, b.t_p);
  for (const auto& s : traj.samples) {
    double rel = s.t - t_first;
    double v;
    if (rel >= b.t_p)
      v = std::numeric_limits<double>::infinity();
    else if (rel > b.t_p - pole_pad)
      continue;  // bound numerically -inf here; nothing to check
    else
      v = s.x - b.bound(rel);
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.argmax_t = s.t;
    }
    ++rep.n_checked;
  }
  rep.passed = rep.max_violation <= tol;
  return rep;
}

}  // namespace raylab

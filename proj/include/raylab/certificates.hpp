#pragma once

// Singularity and rigidity certificates.  Each checker evaluates the
// hypotheses of one incompleteness (or splitting) criterion on a slice of a
// warped model, records a pass/fail witness per hypothesis, and when
// everything holds emits the proper-time bound promised by that criterion.
// Past-directed statements run through time reversal and carry their own
// tags (T4.1, T4.2i, T4.2ii); a non-Cauchy slice weakens the conclusion from
// "every" to "some" geodesic and routes the first checker to its T2.5 tag.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "raylab/geometry.hpp"

namespace raylab {

namespace detail {

inline std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return std::string(buf);
}

inline double sample_sup(const ScalarProfile& p, double lo, double hi, int n = 512) {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) m = std::max(m, p.value(lo + (hi - lo) * i / n));
  return m;
}

}  // namespace detail

enum class Direction { Future, Past };

inline const char* to_string(Direction d) { return d == Direction::Future ? "future" : "past"; }

enum class Verdict { FIRES, FAILS, RIGID };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::FIRES: return "FIRES";
    case Verdict::FAILS: return "FAILS";
    default: return "RIGID";
  }
}

struct Hypothesis {
  std::string name;
  bool pass = false;
  std::string witness;
};

struct Certificate {
  std::string theorem;
  std::string direction;  // "future" or "past"
  Verdict verdict = Verdict::FAILS;
  std::vector<Hypothesis> hypotheses;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double t_bound = std::numeric_limits<double>::quiet_NaN();
  std::string conclusion = "no conclusion";

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["theorem"] = theorem;
    j["direction"] = direction;
    j["verdict"] = to_string(verdict);
    auto hyps = nlohmann::ordered_json::array();
    for (const auto& h : hypotheses) {
      nlohmann::ordered_json hj;
      hj["name"] = h.name;
      hj["pass"] = h.pass;
      hj["witness"] = h.witness;
      hyps.push_back(hj);
    }
    j["hypotheses"] = hyps;
    if (std::isfinite(delta))
      j["delta"] = delta;
    else
      j["delta"] = nullptr;
    if (std::isfinite(t_bound))
      j["t_bound"] = t_bound;
    else
      j["t_bound"] = nullptr;
    j["conclusion"] = conclusion;
    return j;
  }
};

inline void write_certificates_jsonl(const std::vector<Certificate>& certs, std::ostream& os) {
  for (const auto& c : certs) os << c.to_json().dump() << "\n";
}

// Slice data fed to the checkers.  H_f_inf/H_f_sup bracket the weighted mean
// curvature over the slice (equal for homogeneous models), N is the infimum
// of the weight there.  compact and cauchy are caller assertions about the
// global structure; phi0/phi1 carry scalar-field bounds for the
// scalar-tensor thresholds.
struct SurfaceData {
  double t_S = 0.0;
  bool compact = true;
  bool cauchy = true;
  double H_f_inf = 0.0;
  double H_f_sup = 0.0;
  double N = 0.0;
  std::optional<double> phi0, phi1;

  static SurfaceData homogeneous(const WarpedSpacetime& M, const WeightProfile& w, double t_S,
                                 bool cauchy = true, bool compact = true) {
    SurfaceData s;
    s.t_S = t_S;
    s.H_f_inf = s.H_f_sup = f_mean_curvature(M, w, t_S);
    s.N = w.f.value(t_S);
    s.cauchy = cauchy;
    s.compact = compact;
    return s;
  }
};

enum class KScope { Global, Causal };

struct CertOptions {
  KScope k_scope = KScope::Global;
  double ec_tol = 1e-10;        // slack when testing grid energy-condition margins
  double strict_margin = 1e-10; // strictness required of contraction inequalities
  double rigid_tol = 1e-10;     // tolerance for the identities a rigid case must satisfy
  double rigid_window = 0.5;    // slab length past the slice probed for rigidity
  int grid_nt = 257;
  int grid_nbeta = 9;
  double beta_max = 3.0;
};

struct GridMinResult {
  double margin = std::numeric_limits<double>::infinity();
  double argmin_t = 0.0;
  bool beta_bounded = true;  // false if some slice lets the margin diverge to -inf in boost
};

// Coefficient of sinh^2(beta) in Ric_f(X,X) along boosted observers.  When
// nonnegative the infimum over boosts sits at beta = 0; when negative the
// infimum is -infinity.
inline double ric_f_beta_slope(const WarpedSpacetime& M, const WeightProfile& w, double t) {
  double a = M.a.value(t), a1 = M.a.d1(t);
  return ricci_normal(M, t) + ricci_spatial(M, t) + w.f.d2(t) - (a1 / a) * w.f.d1(t);
}

// min over a (t, beta) grid of Ric_f(X,X) - c, with the analytic minimum
// over beta folded in: the margin is affine in sinh^2(beta), so a negative
// slope means -infinity (clamped to -1e300 to stay JSON-finite) and a
// nonnegative slope puts the minimum at beta = 0.
inline GridMinResult theorem_grid_min(const WarpedSpacetime& M, const WeightProfile& w, double c,
                                      const CertOptions& opts = {}) {
  GridMinResult res;
  Interval dom = M.tdomain.inner();
  int nt = std::max(2, opts.grid_nt);
  for (int i = 0; i < nt; ++i) {
    double t = dom.lo + (dom.hi - dom.lo) * i / (nt - 1);
    double c0 = ric_f_obs(M, w, t, 0.0);
    double slope = ric_f_beta_slope(M, w, t);
    double scale = std::max({1.0, std::fabs(c0), std::fabs(ricci_spatial(M, t))});
    double m;
    if (slope < -1e-12 * scale) {
      m = -1e300;
      res.beta_bounded = false;
    } else {
      m = c0 - c;
      for (int j = 1; j < opts.grid_nbeta; ++j) {
        double beta = opts.beta_max * j / (opts.grid_nbeta - 1);
        m = std::min(m, ric_f_obs(M, w, t, beta) - c);
      }
    }
    if (m < res.margin) {
      res.margin = m;
      res.argmin_t = t;
    }
  }
  return res;
}

namespace cert_detail {

struct Frame {
  WarpedSpacetime M;
  WeightProfile w;
  SurfaceData S;
};

// Map everything to the future-directed picture: past statements about
// (M, w) are future statements about the time reversal.
inline Frame oriented(const WarpedSpacetime& M, const WeightProfile& w, const SurfaceData& S,
                      Direction dir) {
  if (dir == Direction::Future) return {M, w, S};
  SurfaceData Sr = S;
  Sr.t_S = -S.t_S;
  Sr.H_f_inf = -S.H_f_sup;
  Sr.H_f_sup = -S.H_f_inf;
  return {M.time_reversed(), w.time_reversed(), Sr};
}

// Effective weight bound: the declared global sup by default, or a sampled
// sup over the slab the geodesics actually explore (ahead of the slice in
// the oriented frame) when causal scope is selected.
inline std::optional<double> effective_k(const Frame& fr, const CertOptions& opts) {
  if (!fr.w.sup_bound) return std::nullopt;
  if (opts.k_scope == KScope::Global) return fr.w.sup_bound;
  Interval dom = fr.M.tdomain.inner();
  double lo = std::max(dom.lo, fr.S.t_S);
  if (lo >= dom.hi) return fr.w.sup_bound;
  return std::min(*fr.w.sup_bound, detail::sample_sup(fr.w.f, lo, dom.hi));
}

inline Hypothesis ec_hypothesis(const Frame& fr, double c, const CertOptions& opts) {
  GridMinResult g = theorem_grid_min(fr.M, fr.w, c, opts);
  Hypothesis h;
  h.name = detail::strf("ric_f_ge_%g", c);
  h.pass = g.margin >= -opts.ec_tol;
  h.witness = g.beta_bounded
                  ? detail::strf("min margin %.9g at t=%.9g", g.margin, g.argmin_t)
                  : detail::strf("unbounded below in boost at t=%.9g", g.argmin_t);
  return h;
}

inline bool all_pass(const std::vector<Hypothesis>& hs) {
  for (const auto& h : hs)
    if (!h.pass) return false;
  return true;
}

inline void conclude_incomplete(Certificate& cert, const SurfaceData& S, double delta,
                                double t_bound) {
  cert.verdict = Verdict::FIRES;
  cert.delta = delta;
  cert.t_bound = t_bound;
  cert.conclusion =
      S.cauchy ? "every timelike geodesic incomplete" : "some timelike geodesic incomplete";
}

}  // namespace cert_detail

// Nonnegative weighted energy, bounded weight, strictly contracting compact
// slice: incompleteness within (1/delta) exp(2(k - N)/(n-1)) with
// delta = |H_f_sup|/(n-1).
inline Certificate check_t11(const WarpedSpacetime& M, const WeightProfile& w,
                             const SurfaceData& S, Direction dir, const CertOptions& opts = {}) {
  if (!S.compact)
    throw std::invalid_argument("check_t11: slice must be compact (hypothesis of the theorem)");
  auto fr = cert_detail::oriented(M, w, S, dir);
  int n = M.n;

  Certificate cert;
  cert.theorem = S.cauchy ? (dir == Direction::Future ? "T1.1" : "T4.1") : "T2.5";
  cert.direction = to_string(dir);

  cert.hypotheses.push_back(cert_detail::ec_hypothesis(fr, 0.0, opts));

  auto k = cert_detail::effective_k(fr, opts);
  Hypothesis hb;
  hb.name = "weight_bounded";
  hb.pass = k.has_value();
  hb.witness = k ? detail::strf("f <= %.9g", *k) : "no declared sup for f";
  cert.hypotheses.push_back(hb);

  Hypothesis hc;
  hc.name = "slice_contracting";
  hc.pass = fr.S.H_f_sup <= -opts.strict_margin;
  hc.witness = detail::strf("H_f in [%.9g, %.9g]", fr.S.H_f_inf, fr.S.H_f_sup);
  cert.hypotheses.push_back(hc);

  if (cert_detail::all_pass(cert.hypotheses)) {
    double delta = -fr.S.H_f_sup / (n - 1);
    double t_bound = (1.0 / delta) * std::exp(2.0 * (*k - fr.S.N) / (n - 1));
    cert_detail::conclude_incomplete(cert, S, delta, t_bound);
  }
  return cert;
}

enum class T12Case { I, II };

// Energy bounded below by -(n-1) plus either (i) a bounded weight with
// contraction strong enough to beat the weight factor, or (ii) a causal
// weight gradient with contraction beating -(n-1) directly; both give
// incompleteness within arctanh(1/(1+delta)).
inline Certificate check_t12(const WarpedSpacetime& M, const WeightProfile& w,
                             const SurfaceData& S, Direction dir, T12Case which,
                             const CertOptions& opts = {}) {
  if (!S.compact)
    throw std::invalid_argument("check_t12: slice must be compact (hypothesis of the theorem)");
  auto fr = cert_detail::oriented(M, w, S, dir);
  int n = M.n;

  Certificate cert;
  if (which == T12Case::I)
    cert.theorem = dir == Direction::Future ? "T1.2i" : "T4.2i";
  else
    cert.theorem = dir == Direction::Future ? "T1.2ii" : "T4.2ii";
  cert.direction = to_string(dir);

  cert.hypotheses.push_back(cert_detail::ec_hypothesis(fr, -(double)(n - 1), opts));

  double delta = std::numeric_limits<double>::quiet_NaN();
  if (which == T12Case::I) {
    auto k = cert_detail::effective_k(fr, opts);
    Hypothesis hb;
    hb.name = "weight_bounded";
    hb.pass = k.has_value();
    hb.witness = k ? detail::strf("f <= %.9g", *k) : "no declared sup for f";
    cert.hypotheses.push_back(hb);

    Hypothesis hc;
    hc.name = "weighted_contraction_exceeds_unity";
    if (k) {
      delta = (-fr.S.H_f_sup / (n - 1)) * std::exp(-2.0 * (*k - fr.S.N) / (n - 1)) - 1.0;
      hc.pass = delta >= opts.strict_margin;
      hc.witness = detail::strf("H_f_sup = %.9g => delta = %.9g", fr.S.H_f_sup, delta);
    } else {
      hc.pass = false;
      hc.witness = "needs a weight bound";
    }
    cert.hypotheses.push_back(hc);
  } else {
    Hypothesis hg;
    hg.name = "grad_f_causal";
    hg.pass = fr.w.grad_causal_satisfies(CausalDir::Future);
    hg.witness = fr.w.gradient_vanishes()
                     ? "gradient vanishes"
                     : detail::strf("declared %s-causal",
                                    fr.w.grad_causal == CausalDir::Future ? "future"
                                    : fr.w.grad_causal == CausalDir::Past ? "past"
                                                                          : "non");
    cert.hypotheses.push_back(hg);

    delta = -fr.S.H_f_sup / (n - 1) - 1.0;
    Hypothesis hc;
    hc.name = "contraction_exceeds_unity";
    hc.pass = delta >= opts.strict_margin;
    hc.witness = detail::strf("H_f_sup = %.9g => delta = %.9g", fr.S.H_f_sup, delta);
    cert.hypotheses.push_back(hc);
  }

  if (cert_detail::all_pass(cert.hypotheses))
    cert_detail::conclude_incomplete(cert, S, delta, std::atanh(1.0 / (1.0 + delta)));
  return cert;
}

namespace cert_detail {

struct WindowCheck {
  bool ok = false;
  double max_dev = 0.0;
  std::string witness;
};

// Max |g(t) - 0| over a window ahead of (or behind) the slice.
template <class G>
WindowCheck window_max_dev(const WarpedSpacetime& M, double t_S, double len, bool forward,
                           double tol, G&& g) {
  Interval dom = M.tdomain.inner();
  double lo, hi;
  if (forward) {
    lo = t_S;
    hi = std::min(dom.hi, t_S + len);
  } else {
    lo = std::max(dom.lo, t_S - len);
    hi = t_S;
  }
  WindowCheck wc;
  if (hi - lo < 1e-3) {
    wc.witness = "window collapsed at domain edge";
    return wc;
  }
  const int N = 64;
  for (int i = 0; i <= N; ++i) {
    double t = lo + (hi - lo) * i / N;
    wc.max_dev = std::max(wc.max_dev, std::fabs(g(t)));
  }
  wc.ok = wc.max_dev <= tol;
  wc.witness = detail::strf("max deviation %.3g on [%.6g, %.6g]", wc.max_dev, lo, hi);
  return wc;
}

}  // namespace cert_detail

// Rigidity classification at a slice, in the oriented (dir-facing) picture.
// Product case: nonnegative weighted energy, bounded weight, H_f identically
// zero ahead of the slice; the model must then actually be static there
// (a' = 0 and f' = 0), which is verified rather than assumed, and when the
// same holds behind a Cauchy slice the two-sided tag C1.4 applies.  Warped
// case: energy bounded by -(n-1), causal weight gradient, H_f identically
// -(n-1); the scale factor must match a pure falling exponential and the
// weight must be constant.  Completeness cannot be decided numerically and
// enters as a caller assertion.
inline Certificate classify_rigidity(const WarpedSpacetime& M, const WeightProfile& w,
                                     const SurfaceData& S, Direction dir, bool complete_asserted,
                                     const CertOptions& opts = {}) {
  using cert_detail::window_max_dev;
  auto fr = cert_detail::oriented(M, w, S, dir);
  int n = M.n;
  Certificate cert;
  cert.direction = to_string(dir);

  Hypothesis hcomp;
  hcomp.name = "timelike_complete";
  hcomp.pass = complete_asserted;
  hcomp.witness = "caller-asserted";

  // product branch
  auto hf_zero_fwd =
      window_max_dev(fr.M, fr.S.t_S, opts.rigid_window, true, opts.rigid_tol,
                     [&](double t) { return f_mean_curvature(fr.M, fr.w, t); });
  if (hf_zero_fwd.ok) {
    cert.theorem = "T1.3";
    cert.hypotheses.push_back(cert_detail::ec_hypothesis(fr, 0.0, opts));
    Hypothesis hb;
    hb.name = "weight_bounded";
    hb.pass = fr.w.sup_bound.has_value();
    hb.witness =
        fr.w.sup_bound ? detail::strf("f <= %.9g", *fr.w.sup_bound) : "no declared sup for f";
    cert.hypotheses.push_back(hb);
    Hypothesis hz;
    hz.name = "H_f_vanishes_ahead";
    hz.pass = true;
    hz.witness = hf_zero_fwd.witness;
    cert.hypotheses.push_back(hz);
    cert.hypotheses.push_back(hcomp);

    if (cert_detail::all_pass(cert.hypotheses)) {
      auto va = window_max_dev(fr.M, fr.S.t_S, opts.rigid_window, true, opts.rigid_tol,
                               [&](double t) { return fr.M.a.d1(t); });
      auto vf = window_max_dev(fr.M, fr.S.t_S, opts.rigid_window, true, opts.rigid_tol,
                               [&](double t) { return fr.w.f.d1(t); });
      Hypothesis hv;
      hv.name = "verified_static_slab";
      hv.pass = va.ok && vf.ok;
      hv.witness = detail::strf("|a'|: %s; |f'|: %s", va.witness.c_str(), vf.witness.c_str());
      cert.hypotheses.push_back(hv);
      if (hv.pass) {
        cert.verdict = Verdict::RIGID;
        cert.conclusion = "splits (product)";
        auto hf_zero_bwd =
            window_max_dev(fr.M, fr.S.t_S, opts.rigid_window, false, opts.rigid_tol,
                           [&](double t) { return f_mean_curvature(fr.M, fr.w, t); });
        auto va_b = window_max_dev(fr.M, fr.S.t_S, opts.rigid_window, false, opts.rigid_tol,
                                   [&](double t) { return fr.M.a.d1(t); });
        if (S.cauchy && hf_zero_bwd.ok && va_b.ok) cert.theorem = "C1.4";
      }
    }
    return cert;
  }

  // warped branch
  auto hf_warp =
      window_max_dev(fr.M, fr.S.t_S, opts.rigid_window, true, opts.rigid_tol,
                     [&](double t) { return f_mean_curvature(fr.M, fr.w, t) + (n - 1); });
  if (hf_warp.ok) {
    cert.theorem = "T1.5";
    cert.hypotheses.push_back(cert_detail::ec_hypothesis(fr, -(double)(n - 1), opts));
    Hypothesis hg;
    hg.name = "grad_f_causal";
    hg.pass = fr.w.grad_causal_satisfies(CausalDir::Future);
    hg.witness = fr.w.gradient_vanishes() ? "gradient vanishes" : "declared causal character";
    cert.hypotheses.push_back(hg);
    Hypothesis hz;
    hz.name = "H_f_constant_ahead";
    hz.pass = true;
    hz.witness = hf_warp.witness;
    cert.hypotheses.push_back(hz);
    cert.hypotheses.push_back(hcomp);

    if (cert_detail::all_pass(cert.hypotheses)) {
      double a0 = fr.M.a.value(fr.S.t_S);
      auto va = window_max_dev(
          fr.M, fr.S.t_S, opts.rigid_window, true, opts.rigid_tol * a0,
          [&](double t) { return fr.M.a.value(t) - a0 * std::exp(-(t - fr.S.t_S)); });
      auto vf = window_max_dev(fr.M, fr.S.t_S, opts.rigid_window, true, opts.rigid_tol,
                               [&](double t) { return fr.w.f.d1(t); });
      Hypothesis hv;
      hv.name = "verified_exponential_slab";
      hv.pass = va.ok && vf.ok;
      hv.witness =
          detail::strf("|a - a0 e^{-s}|: %s; |f'|: %s", va.witness.c_str(), vf.witness.c_str());
      cert.hypotheses.push_back(hv);
      if (hv.pass) {
        cert.verdict = Verdict::RIGID;
        cert.conclusion = "splits (warped e^{-2t})";
      }
    }
    return cert;
  }

  cert.theorem = "T1.3";
  Hypothesis hz;
  hz.name = "H_f_vanishes_ahead";
  hz.pass = false;
  hz.witness = hf_zero_fwd.witness;
  cert.hypotheses.push_back(hz);
  Hypothesis hw;
  hw.name = "H_f_constant_ahead";
  hw.pass = false;
  hw.witness = hf_warp.witness;
  cert.hypotheses.push_back(hw);
  cert.hypotheses.push_back(hcomp);
  return cert;
}

}  // namespace raylab

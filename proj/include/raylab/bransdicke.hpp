#pragma once

// Scalar-tensor layer.  A Brans-Dicke model on a warped product carries a
// positive scalar phi(t), a potential V(phi), a coupling omega, and a
// comoving perfect fluid.  Setting f = -log(phi) turns the Jordan-frame
// field equations into weighted energy conditions on (g, f), so the
// singularity checkers upstream apply verbatim; this header supplies the
// dictionary, the scalar-tensor checkers that delegate to them, the
// Einstein-frame companion model, field-equation residuals, and a
// synthesizer that integrates the reduced homogeneous system.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "raylab/certificates.hpp"
#include "raylab/geometry.hpp"
#include "raylab/ode.hpp"
#include "raylab/profile.hpp"

namespace raylab {

inline constexpr double kEightPi = 8.0 * 3.14159265358979323846;

// Homogeneous scalar-tensor model: geometry, scalar, potential, and a
// comoving perfect fluid (rho, p as functions of t; zero profiles for
// vacuum).  The potential is a function of phi and must cover the range the
// scalar actually takes.  omega > -3/2 keeps the scalar kinetic term
// nondegenerate; omega < -1 is representable but the checkers will record
// the failed coupling hypothesis rather than fire.
struct BDModel {
  double omega = 0.0;
  WarpedSpacetime geom;
  ScalarProfile phi;   // of t, positive on the time domain
  ScalarProfile V;     // of phi
  ScalarProfile rho;   // of t
  ScalarProfile p;     // of t

  BDModel() = default;
  BDModel(double omega_, WarpedSpacetime geom_, ScalarProfile phi_, ScalarProfile V_,
          ScalarProfile rho_, ScalarProfile p_)
      : omega(omega_),
        geom(std::move(geom_)),
        phi(std::move(phi_)),
        V(std::move(V_)),
        rho(std::move(rho_)),
        p(std::move(p_)) {
    if (geom.n != 4)
      throw std::invalid_argument("BDModel: scalar-tensor checkers need four spacetime dimensions");
    if (!(omega > -1.5))
      throw std::invalid_argument("BDModel: omega must exceed -3/2");
    Interval in = geom.tdomain.inner();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i <= 512; ++i) {
      double t = in.lo + (in.hi - in.lo) * i / 512.0;
      double v = phi.value(t);
      if (!(v > 0.0))
        throw std::domain_error("BDModel: scalar field not positive at t=" + std::to_string(t));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double pad = 1e-9 * std::max(1.0, hi);
    if (!V.domain().contains(lo + pad) || !V.domain().contains(hi - pad))
      throw std::invalid_argument("BDModel: potential domain does not cover the scalar range");
  }

  static BDModel vacuum(double omega_, WarpedSpacetime geom_, ScalarProfile phi_,
                        ScalarProfile V_) {
    Interval dom = geom_.tdomain;
    return BDModel(omega_, std::move(geom_), std::move(phi_), std::move(V_),
                   ScalarProfile::constant(0.0, dom), ScalarProfile::constant(0.0, dom));
  }

  // Sampled range of the scalar over the time domain.
  std::pair<double, double> phi_range() const {
    return {phi.sampled_min(), phi.sampled_max()};
  }
};

// The weight that makes the scalar-tensor equations Bakry-Emery: f = -log(phi).
// The bound k = sup f is -log(inf phi); the gradient is causal whenever phi
// is monotone (phi' >= 0 gives a future-causal grad f and vice versa).
inline WeightProfile weight_from_scalar(const ScalarProfile& phi) {
  Interval in = phi.domain().inner();
  for (int i = 0; i <= 512; ++i) {
    double t = in.lo + (in.hi - in.lo) * i / 512.0;
    if (!(phi.value(t) > 0.0))
      throw std::domain_error("weight_from_scalar: scalar field not positive at t=" +
                              std::to_string(t));
  }
  ScalarProfile f = ScalarProfile::neg_log_of(phi);
  double k = f.sampled_max();
  // Classify the sign of f' with the same sweep the weight constructor uses,
  // so the declaration is accepted by construction.
  double tol = 1e-12 * std::max(1.0, f.sampled_max_abs_d1());
  bool le = true, ge = true;
  for (int i = 0; i <= 512; ++i) {
    double t = in.lo + (in.hi - in.lo) * i / 512.0;
    double d = f.d1(t);
    if (d > tol) le = false;
    if (d < -tol) ge = false;
  }
  CausalDir dir = le ? CausalDir::Future : (ge ? CausalDir::Past : CausalDir::None);
  return WeightProfile(std::move(f), k, dir);
}

// Superpotential pair W(f) = -(1/6) e^f V(e^-f) and the effective constant
// Lambda, computed both from (W, W') and directly from (V, V'); the two are
// one algebraic rewrite apart, so disagreement flags an inconsistent V/V'.
struct PotentialFunctionals {
  double W = 0.0;
  double Wprime = 0.0;
  double Lambda = 0.0;
};

inline PotentialFunctionals potential_functionals(const BDModel& m, double f) {
  double phi = std::exp(-f);
  if (!m.V.domain().contains(phi))
    throw std::domain_error("potential_functionals: e^-f outside the potential domain");
  double V = m.V.value(phi), V1 = m.V.d1(phi);
  double den = 3.0 + 2.0 * m.omega;
  PotentialFunctionals out;
  out.W = -V / (6.0 * phi);
  out.Wprime = out.W + V1 / 6.0;
  out.Lambda = (6.0 * (1.0 + m.omega) * out.W - 3.0 * out.Wprime) / den;
  double direct = -(V1 + (1.0 + 2.0 * m.omega) * V / phi) / (2.0 * den);
  if (std::fabs(out.Lambda - direct) > 1e-10 * std::max(1.0, std::fabs(out.Lambda)))
    throw std::runtime_error("potential_functionals: superpotential and potential forms disagree");
  return out;
}

// Margin of the coupling-weighted energy condition along X(beta):
// T(X,X) + (1+omega)/(3+2omega) tr T, affine in sinh^2(beta) with slope rho + p.
inline double omega_energy_margin(const BDModel& m, double t, double beta) {
  detail::require_in_domain(m.geom, t, "omega_energy_margin");
  double rho = m.rho.value(t), p = m.p.value(t);
  double s = std::sinh(beta), s2 = s * s;
  double txx = rho * (1.0 + s2) + p * s2;
  return txx + (1.0 + m.omega) / (3.0 + 2.0 * m.omega) * (3.0 * p - rho);
}

// Strong-energy margin T(X,X) - (1/2) g(X,X) tr T = T(X,X) + (1/2) tr T.
// The combination is conformally invariant for unit timelike X, which is
// what lets the Einstein-frame checker read it off Jordan-frame data.
inline double sec_margin(const BDModel& m, double t, double beta) {
  detail::require_in_domain(m.geom, t, "sec_margin");
  double rho = m.rho.value(t), p = m.p.value(t);
  double s = std::sinh(beta), s2 = s * s;
  double txx = rho * (1.0 + s2) + p * s2;
  return txx + 0.5 * (3.0 * p - rho);
}

namespace bd_detail {

// Shared (t, beta) grid minimiser for fluid energy margins.  Both margins
// are affine in sinh^2(beta) with slope rho + p, so a negative slope means
// the margin is unbounded below in boost (clamped like theorem_grid_min).
template <class MarginFn>
inline GridMinResult fluid_grid_min(const BDModel& m, MarginFn&& margin,
                                    const CertOptions& opts) {
  GridMinResult res;
  Interval dom = m.geom.tdomain.inner();
  int nt = std::max(2, opts.grid_nt);
  for (int i = 0; i < nt; ++i) {
    double t = dom.lo + (dom.hi - dom.lo) * i / (nt - 1);
    double rho = m.rho.value(t), p = m.p.value(t);
    double scale = std::max({1.0, std::fabs(rho), std::fabs(p)});
    double v;
    if (rho + p < -1e-12 * scale) {
      v = -1e300;
      res.beta_bounded = false;
    } else {
      v = margin(t, 0.0);
      for (int j = 1; j < opts.grid_nbeta; ++j) {
        double beta = opts.beta_max * j / (opts.grid_nbeta - 1);
        v = std::min(v, margin(t, beta));
      }
    }
    if (v < res.margin) {
      res.margin = v;
      res.argmin_t = t;
    }
  }
  return res;
}

inline GridMinResult omega_ec_grid_min(const BDModel& m, const CertOptions& opts) {
  return fluid_grid_min(
      m, [&m](double t, double beta) { return omega_energy_margin(m, t, beta); }, opts);
}

inline GridMinResult sec_grid_min(const BDModel& m, const CertOptions& opts) {
  return fluid_grid_min(m, [&m](double t, double beta) { return sec_margin(m, t, beta); }, opts);
}

}  // namespace bd_detail

// Lower bound on Ric_f implied by the shape of the potential: with the
// coupling energy condition in force, sup Q <= 0 gives Ric_f >= 0 and
// sup Q <= 6(3+2omega) gives Ric_f >= -3, where Q(phi) = V'+(1+2omega)V/phi.
enum class ECLevel { Ge0, GeMinus3, None };

inline const char* to_string(ECLevel l) {
  switch (l) {
    case ECLevel::Ge0: return "ric_f >= 0";
    case ECLevel::GeMinus3: return "ric_f >= -3";
    default: return "no bound";
  }
}

struct Lemma44Result {
  ECLevel level = ECLevel::None;
  double sup_Q = 0.0;
  double phi_lo = 0.0, phi_hi = 0.0;
};

inline Lemma44Result lemma44_level(const BDModel& m) {
  Lemma44Result out;
  auto [plo, phi_hi] = m.phi_range();
  out.phi_lo = plo;
  out.phi_hi = phi_hi;
  double sup = -std::numeric_limits<double>::infinity();
  int nsamp = 512;
  for (int i = 0; i <= nsamp; ++i) {
    double phi = plo + (phi_hi - plo) * i / nsamp;
    double q = m.V.d1(phi) + (1.0 + 2.0 * m.omega) * m.V.value(phi) / phi;
    sup = std::max(sup, q);
  }
  out.sup_Q = sup;
  double tol = 1e-12 * std::max(1.0, std::fabs(sup));
  if (sup <= tol)
    out.level = ECLevel::Ge0;
  else if (sup <= 6.0 * (3.0 + 2.0 * m.omega) + tol)
    out.level = ECLevel::GeMinus3;
  else
    out.level = ECLevel::None;
  return out;
}

// Mean-curvature thresholds that translate "H_f(S) large enough" back into
// scalar-tensor data.  All three share the base -(1/phi) grad_nu phi; the
// weighted variant needs the scalar bounds phi0 = inf over the slice's past
// and phi1 = sup over the slice, carried on the surface record.
enum class L45Which { Eq410, Eq411, Eq412 };

inline double lemma45_threshold(const BDModel& m, const SurfaceData& S, L45Which which) {
  detail::require_in_domain(m.geom, S.t_S, "lemma45_threshold");
  double base = -m.phi.d1(S.t_S) / m.phi.value(S.t_S);
  switch (which) {
    case L45Which::Eq410:
      return base;
    case L45Which::Eq412:
      return base + 3.0;
    default:
      break;
  }
  if (!S.phi0 || !S.phi1)
    throw std::invalid_argument("lemma45_threshold: weighted threshold needs phi0/phi1 bounds");
  if (!(*S.phi0 > 0.0))
    throw std::domain_error("lemma45_threshold: phi0 must be positive");
  return base + 3.0 * std::pow(*S.phi1 / *S.phi0, 2.0 / 3.0);
}

namespace bd_detail {

inline Hypothesis coupling_hypothesis(const BDModel& m) {
  Hypothesis h;
  h.name = "omega_ge_minus1";
  h.pass = m.omega >= -1.0;
  h.witness = detail::strf("omega = %.9g", m.omega);
  return h;
}

inline Hypothesis omega_ec_hypothesis(const BDModel& m, const CertOptions& opts) {
  GridMinResult g = omega_ec_grid_min(m, opts);
  Hypothesis h;
  h.name = "omega_energy_condition";
  h.pass = g.margin >= -opts.ec_tol;
  h.witness = g.beta_bounded
                  ? detail::strf("min margin %.9g at t=%.9g", g.margin, g.argmin_t)
                  : detail::strf("unbounded below in boost at t=%.9g", g.argmin_t);
  return h;
}

inline Hypothesis phi_positive_hypothesis(const BDModel& m) {
  double inf = m.phi.sampled_min();
  Hypothesis h;
  h.name = "phi_bounded_below";
  h.pass = inf > 0.0;
  h.witness = detail::strf("inf phi = %.9g", inf);
  return h;
}

// Threshold row shared by the scalar-tensor checkers: H(S) must clear the
// requested mean-curvature threshold strictly.  The witness records both the
// raw comparison and the weighted expansion it encodes.
inline Hypothesis threshold_hypothesis(const BDModel& m, const SurfaceData& S, double thr,
                                       const char* name, const CertOptions& opts) {
  double H = mean_curvature(m.geom, S.t_S);
  double base = -m.phi.d1(S.t_S) / m.phi.value(S.t_S);
  Hypothesis h;
  h.name = name;
  h.pass = H >= thr + opts.strict_margin;
  h.witness = detail::strf("H = %.9g, threshold = %.9g, H_f = %.9g", H, thr, H - base);
  return h;
}

inline void append(Certificate& cert, const Certificate& delegate) {
  cert.hypotheses.insert(cert.hypotheses.end(), delegate.hypotheses.begin(),
                         delegate.hypotheses.end());
}

inline void adopt_if_fired(Certificate& cert, const Certificate& delegate) {
  if (!cert_detail::all_pass(cert.hypotheses)) return;
  cert.verdict = Verdict::FIRES;
  cert.delta = delegate.delta;
  cert.t_bound = delegate.t_bound;
  cert.conclusion = delegate.conclusion;
}

}  // namespace bd_detail

// Past singularity from a nonnegative weighted energy condition: coupling
// at least -1, coupling energy condition, positive bounded scalar, potential
// slope Q <= 0, and an expanding compact Cauchy slice.  Delegates the firing
// logic to the weighted checker on (g, -log phi) and keeps both the
// scalar-tensor and weighted witnesses on the record.
inline Certificate check_t46(const BDModel& m, const SurfaceData& S,
                             const CertOptions& opts = {}) {
  if (!S.compact)
    throw std::invalid_argument("check_t46: slice must be compact (hypothesis of the theorem)");
  Certificate cert;
  cert.theorem = "T4.6";
  cert.direction = "past";

  cert.hypotheses.push_back(bd_detail::coupling_hypothesis(m));
  cert.hypotheses.push_back(bd_detail::omega_ec_hypothesis(m, opts));
  cert.hypotheses.push_back(bd_detail::phi_positive_hypothesis(m));

  Lemma44Result l44 = lemma44_level(m);
  Hypothesis hq;
  hq.name = "potential_slope_nonpositive";
  hq.pass = l44.level == ECLevel::Ge0;
  hq.witness = detail::strf("sup Q = %.9g over phi in [%.9g, %.9g]", l44.sup_Q, l44.phi_lo,
                            l44.phi_hi);
  cert.hypotheses.push_back(hq);

  cert.hypotheses.push_back(bd_detail::threshold_hypothesis(
      m, S, lemma45_threshold(m, S, L45Which::Eq410), "mean_curvature_above_threshold", opts));

  WeightProfile w = weight_from_scalar(m.phi);
  SurfaceData Sbe = SurfaceData::homogeneous(m.geom, w, S.t_S, S.cauchy, S.compact);
  Certificate del = check_t11(m.geom, w, Sbe, Direction::Past, opts);
  bd_detail::append(cert, del);
  bd_detail::adopt_if_fired(cert, del);
  return cert;
}

// Past singularity from the relaxed bound Ric_f >= -3: potential slope
// Q <= 6(3+2omega) plus either the weighted threshold (case I, scalar bounds
// over the slice's past) or a future-causal grad phi with the flat threshold
// (case II).  Delegation uses causal weight scope so the bound sup f is
// taken over the region the past-directed geodesics actually explore.
inline Certificate check_t47(const BDModel& m, const SurfaceData& S, T12Case which,
                             const CertOptions& opts = {}) {
  if (!S.compact)
    throw std::invalid_argument("check_t47: slice must be compact (hypothesis of the theorem)");
  Certificate cert;
  cert.theorem = "T4.7";
  cert.direction = "past";

  cert.hypotheses.push_back(bd_detail::coupling_hypothesis(m));
  cert.hypotheses.push_back(bd_detail::omega_ec_hypothesis(m, opts));

  Lemma44Result l44 = lemma44_level(m);
  double qbound = 6.0 * (3.0 + 2.0 * m.omega);
  Hypothesis hq;
  hq.name = "potential_slope_bounded";
  hq.pass = l44.level != ECLevel::None;
  hq.witness = detail::strf("sup Q = %.9g, bound = %.9g", l44.sup_Q, qbound);
  cert.hypotheses.push_back(hq);

  SurfaceData Sx = S;
  if (which == T12Case::I) {
    // Default the scalar bounds from the model when the caller left them out:
    // phi0 over [domain lo, t_S] (the slice's past), phi1 on the slice.
    Interval dom = m.geom.tdomain.inner();
    if (!Sx.phi0) {
      double inf = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 512; ++i) {
        double t = dom.lo + (std::min(S.t_S, dom.hi) - dom.lo) * i / 512.0;
        inf = std::min(inf, m.phi.value(t));
      }
      Sx.phi0 = inf;
    }
    if (!Sx.phi1) Sx.phi1 = m.phi.value(S.t_S);

    Hypothesis hp;
    hp.name = "phi_past_inf_positive";
    hp.pass = *Sx.phi0 > 0.0;
    hp.witness = detail::strf("inf phi over the slice's past = %.9g, sup on slice = %.9g",
                              *Sx.phi0, *Sx.phi1);
    cert.hypotheses.push_back(hp);

    cert.hypotheses.push_back(bd_detail::threshold_hypothesis(
        m, Sx, lemma45_threshold(m, Sx, L45Which::Eq411), "mean_curvature_above_weighted_threshold",
        opts));
  } else {
    // grad phi future causal means phi' <= 0 everywhere.
    Interval dom = m.phi.domain().inner();
    double tol = 1e-12 * std::max(1.0, m.phi.sampled_max_abs_d1());
    bool causal = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 512; ++i) {
      double t = dom.lo + (dom.hi - dom.lo) * i / 512.0;
      double d = m.phi.d1(t);
      worst = std::max(worst, d);
      if (d > tol) causal = false;
    }
    Hypothesis hg;
    hg.name = "grad_phi_future_causal";
    hg.pass = causal;
    hg.witness = detail::strf("max phi' = %.9g", worst);
    cert.hypotheses.push_back(hg);

    cert.hypotheses.push_back(bd_detail::threshold_hypothesis(
        m, Sx, lemma45_threshold(m, Sx, L45Which::Eq412), "mean_curvature_above_flat_threshold",
        opts));
  }

  WeightProfile w = weight_from_scalar(m.phi);
  SurfaceData Sbe = SurfaceData::homogeneous(m.geom, w, S.t_S, S.cauchy, S.compact);
  CertOptions causal_opts = opts;
  causal_opts.k_scope = KScope::Causal;
  Certificate del = check_t12(m.geom, w, Sbe, Direction::Past, which, causal_opts);
  bd_detail::append(cert, del);
  bd_detail::adopt_if_fired(cert, del);
  return cert;
}

// Jordan <-> Einstein frame companion.  The Einstein-frame metric is
// phi * g; on a warped product that is a new warped product with proper time
// dtau = sqrt(phi) dt and scale sqrt(phi) a, built here with exact chain-rule
// derivatives on top of a quadrature table for the clock map.
struct FramePair {
  WarpedSpacetime jordan;
  WarpedSpacetime einstein;
  ScalarProfile time_map;          // einstein time as a function of jordan time
  ScalarProfile inverse_time_map;  // jordan time as a function of einstein time
  std::string warning;             // nonempty if the conversion is degenerate somewhere
};

namespace bd_detail {

struct ClockNode {
  double t = 0.0;    // jordan time
  double tau = 0.0;  // einstein time
};

struct ClockTable {
  std::vector<ClockNode> nodes;
  ScalarProfile phi;

  double forward(double t) const {
    // Hermite interpolation with exact slopes sqrt(phi).
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                               [](double x, const ClockNode& n) { return x < n.t; });
    std::size_t j = it == nodes.begin() ? 1 : std::min<std::size_t>(it - nodes.begin(),
                                                                    nodes.size() - 1);
    const ClockNode &n0 = nodes[j - 1], &n1 = nodes[j];
    double h = n1.t - n0.t;
    double s = (t - n0.t) / h;
    double m0 = std::sqrt(phi.value(n0.t)) * h;
    double m1 = std::sqrt(phi.value(n1.t)) * h;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * n0.tau + h10 * m0 + h01 * n1.tau + h11 * m1;
  }

  double inverse(double tau) const {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), tau,
                               [](double x, const ClockNode& n) { return x < n.tau; });
    std::size_t j = it == nodes.begin() ? 1 : std::min<std::size_t>(it - nodes.begin(),
                                                                    nodes.size() - 1);
    double lo = nodes[j - 1].t, hi = nodes[j].t;
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 60; ++iter) {
      double r = forward(t) - tau;
      if (r > 0.0)
        hi = t;
      else
        lo = t;
      double step = r / std::sqrt(phi.value(t));
      double tn = t - step;
      if (!(tn > lo) || !(tn < hi)) tn = 0.5 * (lo + hi);
      if (std::fabs(tn - t) <= 1e-15 * std::max(1.0, std::fabs(t))) {
        t = tn;
        break;
      }
      t = tn;
    }
    return t;
  }
};

}  // namespace bd_detail

inline FramePair einstein_frame(const BDModel& m) {
  FramePair fp;
  fp.jordan = m.geom;

  auto table = std::make_shared<bd_detail::ClockTable>();
  table->phi = m.phi;
  Interval in = m.geom.tdomain.inner();

  // Quadrature of dtau/dt = sqrt(phi) over the time domain.  Capped steps
  // keep the node table dense enough for the inverse bracketing.
  OdeOptions qopts;
  qopts.rtol = 1e-12;
  qopts.atol = 1e-14;
  qopts.hmax = (in.hi - in.lo) / 64.0;
  auto rhs = [&m](double t, const OdeState<1>& yv) -> OdeState<1> {
    (void)yv;
    return {std::sqrt(m.phi.value(t))};
  };
  bool ok = integrate_adaptive<1>(rhs, in.lo, in.hi, {0.0}, qopts,
                                  [&table](double t, const OdeState<1>& yv) {
                                    table->nodes.push_back({t, yv[0]});
                                  });
  if (!ok || table->nodes.size() < 2)
    throw std::runtime_error("einstein_frame: clock quadrature failed");

  // Anchor the einstein clock at t = 0 when the domain contains it, so
  // constant scalars give the bare linear reparameterisation.
  double t_ref = in.contains(0.0) ? 0.0 : in.lo;
  double shift = table->forward(t_ref);
  for (auto& n : table->nodes) n.tau -= shift;

  if (m.phi.sampled_min() < 1e-8 * std::max(1.0, m.phi.sampled_max()))
    fp.warning = "scalar field not bounded away from zero; einstein clock degenerates";

  Interval jdom{in.lo, in.hi, false, false};
  fp.time_map = ScalarProfile::analytic(
      "einstein_clock", [table](double t) { return table->forward(t); },
      [table](double t) { return std::sqrt(table->phi.value(t)); },
      [table](double t) {
        return 0.5 * table->phi.d1(t) / std::sqrt(table->phi.value(t));
      },
      jdom);

  Interval edom{table->nodes.front().tau, table->nodes.back().tau, false, false};
  fp.inverse_time_map = ScalarProfile::analytic(
      "jordan_clock", [table](double tau) { return table->inverse(tau); },
      [table](double tau) { return 1.0 / std::sqrt(table->phi.value(table->inverse(tau))); },
      [table](double tau) {
        double t = table->inverse(tau);
        double phi = table->phi.value(t);
        return -0.5 * table->phi.d1(t) / (phi * phi);
      },
      edom);

  ScalarProfile a = m.geom.a, phi = m.phi;
  auto back = [table](double tau) { return table->inverse(tau); };
  ScalarProfile atilde = ScalarProfile::analytic(
      "einstein_scale",
      [back, a, phi](double tau) {
        double t = back(tau);
        return std::sqrt(phi.value(t)) * a.value(t);
      },
      [back, a, phi](double tau) {
        double t = back(tau);
        return 0.5 * phi.d1(t) * a.value(t) / phi.value(t) + a.d1(t);
      },
      [back, a, phi](double tau) {
        double t = back(tau);
        double ph = phi.value(t), p1 = phi.d1(t), p2 = phi.d2(t);
        double av = a.value(t), a1 = a.d1(t), a2 = a.d2(t);
        return ((p2 * av + p1 * a1) / (2.0 * ph) - p1 * p1 * av / (2.0 * ph * ph) + a2) /
               std::sqrt(ph);
      },
      edom);

  fp.einstein = WarpedSpacetime(4, m.geom.kappa, std::move(atilde), edom);
  return fp;
}

// Past singularity through the Einstein frame: strong energy condition for
// the fluid (frame-invariant margin), nonpositive potential, and an
// Einstein-frame expanding compact Cauchy slice.  Fires by delegating to the
// unweighted checker on the conformal model; the returned time bound is in
// Einstein-frame proper time.  A scalar bounded below lets the Jordan-frame
// geodesics inherit the incompleteness, recorded on the witness.
inline Certificate check_t48(const BDModel& m, const SurfaceData& S,
                             const CertOptions& opts = {}) {
  if (!S.compact)
    throw std::invalid_argument("check_t48: slice must be compact (hypothesis of the theorem)");
  Certificate cert;
  cert.theorem = "T4.8";
  cert.direction = "past";

  GridMinResult sec = bd_detail::sec_grid_min(m, opts);
  Hypothesis hs;
  hs.name = "strong_energy_condition";
  hs.pass = sec.margin >= -opts.ec_tol;
  hs.witness = sec.beta_bounded
                   ? detail::strf("min margin %.9g at t=%.9g", sec.margin, sec.argmin_t)
                   : detail::strf("unbounded below in boost at t=%.9g", sec.argmin_t);
  cert.hypotheses.push_back(hs);

  auto [plo, phi_hi] = m.phi_range();
  double supV = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 512; ++i) {
    double phi = plo + (phi_hi - plo) * i / 512.0;
    supV = std::max(supV, m.V.value(phi));
  }
  Hypothesis hv;
  hv.name = "potential_nonpositive";
  hv.pass = supV <= 1e-12 * std::max(1.0, std::fabs(supV));
  hv.witness = detail::strf("sup V = %.9g over phi in [%.9g, %.9g]", supV, plo, phi_hi);
  cert.hypotheses.push_back(hv);

  Hypothesis hp = bd_detail::phi_positive_hypothesis(m);
  hp.witness += hp.pass ? "; jordan-frame geodesics inherit the conclusion" : "";
  cert.hypotheses.push_back(hp);

  FramePair fp = einstein_frame(m);
  double tau_S = fp.time_map.value(S.t_S);
  double Ht = mean_curvature(fp.einstein, tau_S);
  double jordan_thr = -1.5 * m.phi.d1(S.t_S) / m.phi.value(S.t_S);
  Hypothesis he;
  he.name = "einstein_slice_expanding";
  he.pass = Ht >= opts.strict_margin;
  he.witness = detail::strf("einstein H = %.9g at tau=%.9g (jordan form: H = %.9g vs %.9g)", Ht,
                            tau_S, mean_curvature(m.geom, S.t_S), jordan_thr);
  cert.hypotheses.push_back(he);

  WeightProfile w0 = WeightProfile::zero(fp.einstein.tdomain);
  SurfaceData Se = SurfaceData::homogeneous(fp.einstein, w0, tau_S, S.cauchy, S.compact);
  Certificate del = check_t11(fp.einstein, w0, Se, Direction::Past, opts);
  bd_detail::append(cert, del);
  bd_detail::adopt_if_fired(cert, del);
  return cert;
}

// Residuals of the four field equations on homogeneous data, one number per
// component; all vanish on exact solutions.  The weighted pair (r47, r48)
// is an algebraic rewrite of the metric pair (r42, r43):
//   r47_nn = r42_nn/2 + 3 r42_ee/2 - r43/(2 phi)
//   r47_ee = r42_nn/2 -   r42_ee/2 + r43/(2 phi)
//   r48    = -r43/phi
// so the rewrite identity is testable on arbitrary non-solutions.
struct FieldResiduals {
  double r42_nn = 0.0, r42_ee = 0.0;
  double r43 = 0.0;
  double r47_nn = 0.0, r47_ee = 0.0;
  double r48 = 0.0;
  // Largest term magnitude entering each equation, floored at 1; relative
  // residuals stay meaningful on windows that close on a curvature
  // singularity where the raw terms blow up.
  double scale42 = 1.0, scale43 = 1.0, scale47 = 1.0, scale48 = 1.0;

  double r42() const { return std::max(std::fabs(r42_nn), std::fabs(r42_ee)); }
  double r47() const { return std::max(std::fabs(r47_nn), std::fabs(r47_ee)); }
  double rel42() const { return r42() / scale42; }
  double rel43() const { return std::fabs(r43) / scale43; }
  double rel47() const { return r47() / scale47; }
  double rel48() const { return std::fabs(r48) / scale48; }
  double worst_rel() const { return std::max({rel42(), rel43(), rel47(), rel48()}); }
};

inline FieldResiduals field_residuals(const BDModel& m, double t) {
  detail::require_in_domain(m.geom, t, "field_residuals");
  double a = m.geom.a.value(t), a1 = m.geom.a.d1(t), a2 = m.geom.a.d2(t);
  double phi = m.phi.value(t), phi1 = m.phi.d1(t), phi2 = m.phi.d2(t);
  double rho = m.rho.value(t), p = m.p.value(t);
  double V = m.V.value(phi), V1 = m.V.d1(phi);
  double kap = m.geom.kappa_value();
  double hb = a1 / a;
  double tr = 3.0 * p - rho;
  double den = 3.0 + 2.0 * m.omega;
  double wkin = m.omega * phi1 * phi1 / (2.0 * phi * phi);

  FieldResiduals r;
  double g_nn = 3.0 * (hb * hb + kap / (a * a));
  double g_ee = -2.0 * a2 / a - hb * hb - kap / (a * a);
  r.r42_nn = g_nn - V / (2.0 * phi) - (-3.0 * hb * phi1 / phi + kEightPi * rho / phi + wkin);
  r.r42_ee =
      g_ee + V / (2.0 * phi) - ((phi2 + 2.0 * hb * phi1) / phi + kEightPi * p / phi + wkin);
  r.r43 = (-phi2 - 3.0 * hb * phi1) - (kEightPi * tr + phi * V1 - 2.0 * V) / den;
  r.scale42 = std::max({1.0, std::fabs(g_nn), std::fabs(g_ee), std::fabs(V / (2.0 * phi)),
                        std::fabs(3.0 * hb * phi1 / phi), std::fabs(kEightPi * rho / phi),
                        std::fabs(kEightPi * p / phi),
                        std::fabs((phi2 + 2.0 * hb * phi1) / phi), std::fabs(wkin)});
  r.scale43 = std::max({1.0, std::fabs(phi2), std::fabs(3.0 * hb * phi1),
                        std::fabs(kEightPi * tr / den), std::fabs(phi * V1 / den),
                        std::fabs(2.0 * V / den)});

  double f1 = -phi1 / phi;
  double f2 = -phi2 / phi + (phi1 / phi) * (phi1 / phi);
  double ric_f_nn = -3.0 * a2 / a + f2;
  double ric_f_ee = a2 / a + 2.0 * (a1 * a1 + kap) / (a * a) - hb * f1;
  PotentialFunctionals pf = potential_functionals(m, -std::log(phi));
  double cw = (1.0 + m.omega) / den;
  r.r47_nn = (ric_f_nn - pf.Lambda) -
             (kEightPi * (rho + cw * tr) / phi + (1.0 + m.omega) * f1 * f1);
  r.r47_ee = (ric_f_ee + pf.Lambda) - kEightPi * (p - cw * tr) / phi;
  r.r48 = (-f2 - 3.0 * hb * f1 + f1 * f1) +
          (2.0 / den) * (3.0 * pf.Wprime + 3.0 * pf.W + 0.5 * kEightPi * tr / phi);
  r.scale47 = std::max({1.0, std::fabs(ric_f_nn), std::fabs(ric_f_ee), std::fabs(pf.Lambda),
                        std::fabs(kEightPi * (rho + cw * tr) / phi),
                        std::fabs(kEightPi * (p - cw * tr) / phi),
                        std::fabs((1.0 + m.omega) * f1 * f1)});
  r.scale48 = std::max({1.0, std::fabs(f2), std::fabs(3.0 * hb * f1), f1 * f1,
                        std::fabs(6.0 * pf.Wprime / den), std::fabs(6.0 * pf.W / den),
                        std::fabs(kEightPi * tr / (den * phi))});
  return r;
}

// Reduced homogeneous system synthesizer.  Integrates (a, a', phi, phi')
// from anchor data with the fluid scaling rho = rho0 (a0/a)^{3(1+w)}, the
// scalar equation closing phi'' and the pressure equation closing a''.  The
// normal-normal equation is first-order in this reduction; it fixes the
// initial expansion (expanding root by default) and is then monitored as a
// drift gauge along the run.
struct BDSynthesisSpec {
  double omega = 10.0;
  SpaceForm kappa = SpaceForm::Flat;
  ScalarProfile V = ScalarProfile::constant(0.0, Interval{1e-300, 1e300, false, false});
  double w_fluid = 0.0;  // p = w rho
  double rho0 = 1.0;     // fluid density at the anchor
  double t0 = 0.0;
  double a0 = 1.0;
  double phi0 = 1.0;
  double dphi0 = 0.0;
  bool expanding = true;
  double span_past = 2.0;
  double span_future = 2.0;
  double rtol = 1e-12;
  double atol = 1e-14;
  double drift_tol = 1e-7;
};

namespace bd_detail {

struct HermiteNode {
  double t = 0.0;
  double v = 0.0, d1 = 0.0, d2 = 0.0;
};

// Thrown by synthesis observers to close the window at the last node that
// still satisfies the constraint gate; never escapes the synthesizer.
struct TruncateSignal {};

// Piecewise quintic Hermite through (value, first, second) node data; the
// evaluation is C^2 and reproduces the stored derivatives at the nodes.
struct HermiteTable {
  std::vector<HermiteNode> nodes;

  double eval(double t, int deriv) const {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                               [](double x, const HermiteNode& n) { return x < n.t; });
    std::size_t j = it == nodes.begin() ? 1 : std::min<std::size_t>(it - nodes.begin(),
                                                                    nodes.size() - 1);
    const HermiteNode &n0 = nodes[j - 1], &n1 = nodes[j];
    double h = n1.t - n0.t;
    double s = (t - n0.t) / h;
    double c[6] = {n0.v, n0.d1 * h, n0.d2 * h * h, n1.v, n1.d1 * h, n1.d2 * h * h};
    double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    double b[6], out = 0.0;
    if (deriv == 0) {
      b[0] = 1 - 10 * s3 + 15 * s4 - 6 * s5;
      b[1] = s - 6 * s3 + 8 * s4 - 3 * s5;
      b[2] = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
      b[3] = 10 * s3 - 15 * s4 + 6 * s5;
      b[4] = -4 * s3 + 7 * s4 - 3 * s5;
      b[5] = 0.5 * s3 - s4 + 0.5 * s5;
    } else if (deriv == 1) {
      b[0] = -30 * s2 + 60 * s3 - 30 * s4;
      b[1] = 1 - 18 * s2 + 32 * s3 - 15 * s4;
      b[2] = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
      b[3] = 30 * s2 - 60 * s3 + 30 * s4;
      b[4] = -12 * s2 + 28 * s3 - 15 * s4;
      b[5] = 1.5 * s2 - 4 * s3 + 2.5 * s4;
    } else {
      b[0] = -60 * s + 180 * s2 - 120 * s3;
      b[1] = -36 * s + 96 * s2 - 60 * s3;
      b[2] = 1 - 9 * s + 18 * s2 - 10 * s3;
      b[3] = 60 * s - 180 * s2 + 120 * s3;
      b[4] = -24 * s + 84 * s2 - 60 * s3;
      b[5] = 3 * s - 12 * s2 + 10 * s3;
    }
    for (int i = 0; i < 6; ++i) out += b[i] * c[i];
    double scale = deriv == 0 ? 1.0 : (deriv == 1 ? 1.0 / h : 1.0 / (h * h));
    return out * scale;
  }
};

inline ScalarProfile profile_from_table(std::string name, std::shared_ptr<HermiteTable> tab,
                                        Interval dom) {
  return ScalarProfile::analytic(
      std::move(name), [tab](double t) { return tab->eval(t, 0); },
      [tab](double t) { return tab->eval(t, 1); }, [tab](double t) { return tab->eval(t, 2); },
      dom);
}

}  // namespace bd_detail

inline BDModel synthesize_bd_flrw(const BDSynthesisSpec& spec) {
  if (!(spec.a0 > 0.0) || !(spec.phi0 > 0.0))
    throw std::invalid_argument("synthesize_bd_flrw: anchor scale and scalar must be positive");
  if (!(spec.omega > -1.5))
    throw std::invalid_argument("synthesize_bd_flrw: omega must exceed -3/2");
  if (!(spec.span_past >= 0.0) || !(spec.span_future >= 0.0) ||
      spec.span_past + spec.span_future <= 0.0)
    throw std::invalid_argument("synthesize_bd_flrw: spans must cover a nonempty window");

  double kap = static_cast<double>(static_cast<int>(spec.kappa));
  double ex = 3.0 * (1.0 + spec.w_fluid);
  double den = 3.0 + 2.0 * spec.omega;
  // The window closes once the scale factor has collapsed by 1e4 (or the
  // scalar degenerates); past that point the reduced system is all bang
  // asymptote and the constraint gate below takes over anyway.
  double floor_a = 1e-4 * spec.a0, floor_phi = 1e-6 * spec.phi0;

  auto density = [&spec, ex](double a) { return spec.rho0 * std::pow(spec.a0 / a, ex); };

  // State y = (a, a', phi, phi'); the scalar equation closes phi'' and the
  // pressure equation closes a''.
  auto deriv2 = [&](const OdeState<4>& y, double& a2, double& phi2) {
    double a = y[0], a1 = y[1], phi = y[2], phi1 = y[3];
    double hb = a1 / a;
    double rho = density(a), p = spec.w_fluid * rho;
    double V = spec.V.value(phi), V1 = spec.V.d1(phi);
    phi2 = -3.0 * hb * phi1 - (kEightPi * (3.0 * p - rho) + phi * V1 - 2.0 * V) / den;
    a2 = -(a / 2.0) * (hb * hb + kap / (a * a) - V / (2.0 * phi) +
                       (phi2 + 2.0 * hb * phi1) / phi + kEightPi * p / phi +
                       spec.omega * phi1 * phi1 / (2.0 * phi * phi));
  };
  auto rhs = [&](double, const OdeState<4>& y) -> OdeState<4> {
    double nan = std::numeric_limits<double>::quiet_NaN();
    if (!(y[0] > floor_a) || !(y[2] > floor_phi)) return {nan, nan, nan, nan};
    double a2, phi2;
    deriv2(y, a2, phi2);
    return {y[1], a2, y[3], phi2};
  };

  // Initial expansion from the first-order constraint, a quadratic in a'/a.
  double B = 3.0 * spec.dphi0 / spec.phi0;
  double C = 3.0 * kap / (spec.a0 * spec.a0) - spec.V.value(spec.phi0) / (2.0 * spec.phi0) -
             kEightPi * spec.rho0 / spec.phi0 -
             spec.omega * spec.dphi0 * spec.dphi0 / (2.0 * spec.phi0 * spec.phi0);
  double disc = B * B - 12.0 * C;
  if (disc < 0.0)
    throw std::invalid_argument("synthesize_bd_flrw: anchor data violates the constraint");
  double hb0 = (-B + (spec.expanding ? 1.0 : -1.0) * std::sqrt(disc)) / 6.0;
  OdeState<4> y0 = {spec.a0, hb0 * spec.a0, spec.phi0, spec.dphi0};

  auto drift = [&](const OdeState<4>& y) {
    double a = y[0], a1 = y[1], phi = y[2], phi1 = y[3];
    double hb = a1 / a;
    double rho = density(a);
    double V = spec.V.value(phi);
    double terms[6] = {3.0 * hb * hb, 3.0 * kap / (a * a), V / (2.0 * phi),
                       3.0 * hb * phi1 / phi, kEightPi * rho / phi,
                       spec.omega * phi1 * phi1 / (2.0 * phi * phi)};
    double resid = terms[0] + terms[1] - terms[2] + terms[3] - terms[4] - terms[5];
    double scale = 1.0;
    for (double v : terms) scale = std::max(scale, std::fabs(v));
    return std::fabs(resid) / scale;
  };

  if (drift(y0) > spec.drift_tol)
    throw std::runtime_error("synthesize_bd_flrw: anchor data violates the constraint gauge");

  auto atab = std::make_shared<bd_detail::HermiteTable>();
  auto ptab = std::make_shared<bd_detail::HermiteTable>();
  auto push_node = [&](double t, const OdeState<4>& y) {
    double a2, phi2;
    deriv2(y, a2, phi2);
    atab->nodes.push_back({t, y[0], y[1], a2});
    ptab->nodes.push_back({t, y[2], y[3], phi2});
  };

  OdeOptions opts;
  opts.rtol = spec.rtol;
  opts.atol = spec.atol;
  // Step cap well below the adaptive comfort zone: the dense output carries
  // second derivatives whose interpolation error scales like h^4, so the
  // node table needs to be finer than the integration alone would pick.
  opts.hmax = std::max(spec.span_past, spec.span_future) / 128.0;

  bool open_hi = false, open_lo = false;
  if (spec.span_future > 0.0) {
    bool ok = true;
    try {
      ok = integrate_adaptive<4>(rhs, spec.t0, spec.t0 + spec.span_future, y0, opts,
                                 [&](double t, const OdeState<4>& y) {
                                   if (drift(y) > spec.drift_tol)
                                     throw bd_detail::TruncateSignal{};
                                   push_node(t, y);
                                 });
    } catch (const bd_detail::TruncateSignal&) {
      ok = false;
    }
    open_hi = !ok;
  } else {
    push_node(spec.t0, y0);
  }
  if (spec.span_past > 0.0) {
    // Integrate pastward in the reflected clock tau = -t; state components
    // keep their d/dt meaning, so the vector field just flips sign.
    auto rhs_back = [&rhs](double tau, const OdeState<4>& y) -> OdeState<4> {
      OdeState<4> f = rhs(-tau, y);
      return {-f[0], -f[1], -f[2], -f[3]};
    };
    std::vector<std::pair<double, OdeState<4>>> back;
    bool ok = true;
    try {
      ok = integrate_adaptive<4>(rhs_back, -spec.t0, -spec.t0 + spec.span_past, y0, opts,
                                 [&](double tau, const OdeState<4>& y) {
                                   if (-tau >= spec.t0) return;  // anchor already recorded
                                   if (drift(y) > spec.drift_tol)
                                     throw bd_detail::TruncateSignal{};
                                   back.emplace_back(-tau, y);
                                 });
    } catch (const bd_detail::TruncateSignal&) {
      ok = false;
    }
    open_lo = !ok;
    std::vector<bd_detail::HermiteNode> anodes = std::move(atab->nodes);
    std::vector<bd_detail::HermiteNode> pnodes = std::move(ptab->nodes);
    atab->nodes.clear();
    ptab->nodes.clear();
    for (auto it = back.rbegin(); it != back.rend(); ++it) push_node(it->first, it->second);
    atab->nodes.insert(atab->nodes.end(), anodes.begin(), anodes.end());
    ptab->nodes.insert(ptab->nodes.end(), pnodes.begin(), pnodes.end());
  }
  if (atab->nodes.size() < 2)
    throw std::runtime_error("synthesize_bd_flrw: integration produced no usable window");
  double t_lo = atab->nodes.front().t, t_hi = atab->nodes.back().t;

  Interval dom{t_lo, t_hi, open_lo, open_hi};
  ScalarProfile aprof = bd_detail::profile_from_table("bd_scale", atab, dom);
  ScalarProfile pprof = bd_detail::profile_from_table("bd_scalar", ptab, dom);

  // Fluid profiles ride on the synthesized scale factor.
  double rho0 = spec.rho0, a0 = spec.a0, wfl = spec.w_fluid;
  ScalarProfile rprof = ScalarProfile::analytic(
      "bd_density",
      [atab, rho0, a0, ex](double t) { return rho0 * std::pow(a0 / atab->eval(t, 0), ex); },
      [atab, rho0, a0, ex](double t) {
        double a = atab->eval(t, 0);
        return -ex * rho0 * std::pow(a0 / a, ex) * atab->eval(t, 1) / a;
      },
      [atab, rho0, a0, ex](double t) {
        double a = atab->eval(t, 0), a1 = atab->eval(t, 1), a2 = atab->eval(t, 2);
        double hb = a1 / a;
        double r = rho0 * std::pow(a0 / a, ex);
        return r * (ex * ex * hb * hb - ex * a2 / a + ex * hb * hb);
      },
      dom);
  ScalarProfile pfl = ScalarProfile::scaled(rprof, wfl);

  WarpedSpacetime geom(4, spec.kappa, std::move(aprof), dom);
  return BDModel(spec.omega, std::move(geom), std::move(pprof), spec.V, std::move(rprof),
                 std::move(pfl));
}

}  // namespace raylab

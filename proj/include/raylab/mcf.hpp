#pragma once

// Spacelike graphs over a flat torus evolving by weighted mean curvature.
// A hypersurface t = u(theta) in a flat-sliced warped model (kappa = 0,
// n = d+1 with d the base dimension) is evolved with vertical speed
// du/ds = lambda (H_f - c), which is the graph form of normal speed H_f - c.
// Discrete spatial derivatives are second-order central differences on the
// periodic grid, and steps use the explicit trapezoid rule under a CFL cap.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "raylab/geometry.hpp"

namespace raylab {

struct GraphHypersurface {
  int d = 1;        // base torus dimension, 1 or 2
  int n_pts = 0;    // grid points per axis
  std::vector<double> u;  // heights, row-major for d = 2

  double delta() const { return 2.0 * M_PI / n_pts; }
  std::size_t size() const { return u.size(); }
  std::size_t idx(int i, int j = 0) const {
    return d == 1 ? static_cast<std::size_t>(i)
                  : static_cast<std::size_t>(i) * n_pts + j;
  }

  static GraphHypersurface constant(int d, int n_pts, double value) {
    GraphHypersurface g = make(d, n_pts);
    std::fill(g.u.begin(), g.u.end(), value);
    return g;
  }

  template <class F>
  static GraphHypersurface from_function(int d, int n_pts, F&& fn) {
    GraphHypersurface g = make(d, n_pts);
    double h = g.delta();
    if (d == 1) {
      for (int i = 0; i < n_pts; ++i) g.u[i] = fn(i * h, 0.0);
    } else {
      for (int i = 0; i < n_pts; ++i)
        for (int j = 0; j < n_pts; ++j) g.u[g.idx(i, j)] = fn(i * h, j * h);
    }
    return g;
  }

 private:
  static GraphHypersurface make(int d, int n_pts) {
    if (d != 1 && d != 2)
      throw std::invalid_argument("GraphHypersurface: base dimension must be 1 or 2");
    if (n_pts < 8) throw std::invalid_argument("GraphHypersurface: need at least 8 grid points");
    GraphHypersurface g;
    g.d = d;
    g.n_pts = n_pts;
    g.u.assign(d == 1 ? n_pts : static_cast<std::size_t>(n_pts) * n_pts, 0.0);
    return g;
  }
};

namespace mcf_detail {

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

struct NodeDerivs {
  double u = 0.0;
  double du[2] = {0.0, 0.0};
  double d2u[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

inline NodeDerivs node_derivs(const GraphHypersurface& g, int i, int j) {
  NodeDerivs nd;
  double h = g.delta();
  int n = g.n_pts;
  auto at = [&](int a, int b) { return g.u[g.idx(wrap(a, n), wrap(b, n))]; };
  nd.u = at(i, j);
  nd.du[0] = (at(i + 1, j) - at(i - 1, j)) / (2 * h);
  nd.d2u[0][0] = (at(i + 1, j) - 2 * nd.u + at(i - 1, j)) / (h * h);
  if (g.d == 2) {
    nd.du[1] = (at(i, j + 1) - at(i, j - 1)) / (2 * h);
    nd.d2u[1][1] = (at(i, j + 1) - 2 * nd.u + at(i, j - 1)) / (h * h);
    nd.d2u[0][1] = nd.d2u[1][0] =
        (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) /
        (4 * h * h);
  }
  return nd;
}

inline void require_compatible(const WarpedSpacetime& M, const GraphHypersurface& g) {
  if (M.n != g.d + 1)
    throw std::invalid_argument("mcf: model dimension must equal base dimension + 1");
  if (M.kappa != SpaceForm::Flat)
    throw std::invalid_argument("mcf: graph flow is set up over flat slices only");
}

}  // namespace mcf_detail

// Pointwise geometry of the graph at one node.
struct GraphPoint {
  double u = 0.0;
  double q = 0.0;        // |Du|^2 in the flat base metric
  double lambda2 = 0.0;  // 1 - q/a(u)^2, positive iff spacelike
  double lambda = 0.0;
  double sinh2 = 0.0;    // squared boost rapidity of the normal vs the slicing
  double H = 0.0;
  double H_f = 0.0;
  double K2 = 0.0;       // |K|^2
  double ric_f_nn = 0.0; // Ric_f(nu, nu) along the graph normal
  bool spacelike = false;
};

inline GraphPoint graph_point(const WarpedSpacetime& M, const WeightProfile& w,
                              const mcf_detail::NodeDerivs& nd, int d) {
  GraphPoint p;
  p.u = nd.u;
  detail::require_in_domain(M, nd.u, "graph_point");
  double A = M.a.value(nd.u), A1 = M.a.d1(nd.u);
  p.q = nd.du[0] * nd.du[0] + nd.du[1] * nd.du[1];
  p.lambda2 = 1.0 - p.q / (A * A);
  p.spacelike = p.lambda2 > 0.0;
  if (!p.spacelike) return p;
  p.lambda = std::sqrt(p.lambda2);
  p.sinh2 = p.q / (A * A * p.lambda2);

  double K[2][2] = {{0, 0}, {0, 0}};
  double hinv[2][2] = {{0, 0}, {0, 0}};
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      double del = a == b ? 1.0 : 0.0;
      K[a][b] = (nd.d2u[a][b] + A * A1 * del - 2.0 * (A1 / A) * nd.du[a] * nd.du[b]) / p.lambda;
      hinv[a][b] = (del + nd.du[a] * nd.du[b] / (A * A * p.lambda2)) / (A * A);
    }
  }
  double HK[2][2] = {{0, 0}, {0, 0}};  // hinv * K; padding entries are zero
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) HK[a][b] += hinv[a][c] * K[c][b];
  for (int a = 0; a < d; ++a) {
    p.H += HK[a][a];
    for (int b = 0; b < d; ++b) p.K2 += HK[a][b] * HK[b][a];
  }
  p.ric_f_nn = detail::ricci_obs_s2(M, nd.u, p.sinh2) + detail::hess_f_obs_s2(M, w, nd.u, p.sinh2);
  p.H_f = p.H - w.f.d1(nd.u) / p.lambda;
  return p;
}

// H_f at every node; throws if the graph is not spacelike everywhere.
inline std::vector<double> graph_Hf(const WarpedSpacetime& M, const WeightProfile& w,
                                    const GraphHypersurface& g) {
  mcf_detail::require_compatible(M, g);
  std::vector<double> out(g.size());
  for (int i = 0; i < g.n_pts; ++i) {
    int jmax = g.d == 2 ? g.n_pts : 1;
    for (int j = 0; j < jmax; ++j) {
      GraphPoint p = graph_point(M, w, mcf_detail::node_derivs(g, i, j), g.d);
      if (!p.spacelike)
        throw std::domain_error("graph_Hf: graph fails to be spacelike at a node");
      out[g.idx(i, j)] = p.H_f;
    }
  }
  return out;
}

struct FlowRecord {
  double s = 0.0;
  std::vector<double> u;
  std::vector<double> phi;  // H_f - c per node
  double min_phi = 0.0, max_phi = 0.0, max_speed = 0.0;
};

enum class FlowStop { SMaxReached, Steady, CausalViolation, DomainEdge, MaxSteps };

struct FlowOptions {
  double s_max = 1.0;
  double c = 0.0;         // forcing level: normal speed is H_f - c
  int record_every = 16;
  double cfl = 0.2;
  double steady_tol = 1e-12;
  long max_steps = 2000000;
};

struct FlowResult {
  FlowStop stop = FlowStop::SMaxReached;
  std::vector<FlowRecord> records;
  GraphHypersurface final_state;
  double s_final = 0.0;
  long steps = 0;
};

inline void write_flow_csv(const FlowResult& res, std::ostream& os) {
  os << "s,min_phi,max_phi,max_speed\n";
  char buf[160];
  for (const auto& r : res.records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.s, r.min_phi, r.max_phi,
                  r.max_speed);
    os << buf;
  }
}

namespace mcf_detail {

struct FieldEval {
  std::vector<double> speed;  // lambda * (H_f - c), the vertical velocity
  std::vector<double> phi;
  double min_a2l2 = std::numeric_limits<double>::infinity();
  bool spacelike = true;
  bool in_domain = true;
};

inline FieldEval eval_fields(const WarpedSpacetime& M, const WeightProfile& w,
                             const GraphHypersurface& g, double c) {
  FieldEval fe;
  fe.speed.resize(g.size());
  fe.phi.resize(g.size());
  Interval dom = M.tdomain.inner();
  for (int i = 0; i < g.n_pts; ++i) {
    int jmax = g.d == 2 ? g.n_pts : 1;
    for (int j = 0; j < jmax; ++j) {
      NodeDerivs nd = node_derivs(g, i, j);
      if (!(nd.u > dom.lo && nd.u < dom.hi)) {
        fe.in_domain = false;
        return fe;
      }
      GraphPoint p = graph_point(M, w, nd, g.d);
      if (!p.spacelike) {
        fe.spacelike = false;
        return fe;
      }
      double A = M.a.value(nd.u);
      fe.min_a2l2 = std::min(fe.min_a2l2, A * A * p.lambda2);
      fe.phi[g.idx(i, j)] = p.H_f - c;
      fe.speed[g.idx(i, j)] = p.lambda * (p.H_f - c);
    }
  }
  return fe;
}

inline FlowRecord make_record(double s, const GraphHypersurface& g, const FieldEval& fe) {
  FlowRecord r;
  r.s = s;
  r.u = g.u;
  r.phi = fe.phi;
  r.min_phi = *std::min_element(fe.phi.begin(), fe.phi.end());
  r.max_phi = *std::max_element(fe.phi.begin(), fe.phi.end());
  r.max_speed = 0.0;
  for (double v : fe.speed) r.max_speed = std::max(r.max_speed, std::fabs(v));
  return r;
}

}  // namespace mcf_detail

inline FlowResult flow_run(const WarpedSpacetime& M, const WeightProfile& w,
                           const GraphHypersurface& g0, const FlowOptions& opts = {}) {
  using namespace mcf_detail;
  require_compatible(M, g0);
  if (!(opts.s_max > 0.0)) throw std::invalid_argument("flow_run: s_max must be positive");

  FlowResult res;
  GraphHypersurface g = g0;
  double h = g.delta();
  double s = 0.0;

  FieldEval fe = eval_fields(M, w, g, opts.c);
  if (!fe.spacelike) throw std::invalid_argument("flow_run: initial graph is not spacelike");
  if (!fe.in_domain)
    throw std::invalid_argument("flow_run: initial graph leaves the model time domain");
  res.records.push_back(make_record(s, g, fe));

  GraphHypersurface mid = g;
  long step = 0;
  while (true) {
    if (s >= opts.s_max - 1e-15 * std::max(1.0, opts.s_max)) {
      res.stop = FlowStop::SMaxReached;
      break;
    }
    if (step >= opts.max_steps) {
      res.stop = FlowStop::MaxSteps;
      break;
    }
    double max_abs_phi = 0.0;
    for (double v : fe.phi) max_abs_phi = std::max(max_abs_phi, std::fabs(v));
    if (max_abs_phi <= opts.steady_tol) {
      res.stop = FlowStop::Steady;
      break;
    }

    double ds = std::min(opts.cfl * h * h * fe.min_a2l2, opts.s_max - s);

    // explicit trapezoid: predict with the current field, correct with the
    // field evaluated on the predicted graph
    for (std::size_t k = 0; k < g.size(); ++k) mid.u[k] = g.u[k] + ds * fe.speed[k];
    FieldEval fm = eval_fields(M, w, mid, opts.c);
    if (!fm.spacelike || !fm.in_domain) {
      res.stop = fm.spacelike ? FlowStop::DomainEdge : FlowStop::CausalViolation;
      break;
    }
    for (std::size_t k = 0; k < g.size(); ++k)
      g.u[k] += 0.5 * ds * (fe.speed[k] + fm.speed[k]);

    FieldEval fn = eval_fields(M, w, g, opts.c);
    if (!fn.spacelike || !fn.in_domain) {
      res.stop = fn.spacelike ? FlowStop::DomainEdge : FlowStop::CausalViolation;
      break;
    }
    fe = std::move(fn);
    s += ds;
    ++step;
    if (step % opts.record_every == 0) res.records.push_back(make_record(s, g, fe));
  }

  if (res.records.back().s < s) res.records.push_back(make_record(s, g, fe));
  res.final_state = std::move(g);
  res.s_final = s;
  res.steps = step;
  return res;
}

struct SignPropagationReport {
  bool holds = false;
  bool identically_zero = false;  // initial speed field exactly zero
  double worst_max_phi = 0.0;     // largest recorded max phi after the start
  std::string note;
};

// Once H_f - c <= 0 everywhere it must stay (strictly) negative under the
// flow.  Requires a nonpositive initial field; records after the start must
// have max phi below a small negative floor scaled by the initial size.
inline SignPropagationReport verify_sign_propagation(const FlowResult& res) {
  if (res.records.size() < 2)
    throw std::invalid_argument("verify_sign_propagation: need at least two records");
  const FlowRecord& first = res.records.front();
  if (first.max_phi > 0.0)
    throw std::invalid_argument("verify_sign_propagation: initial speed field has positive part");

  SignPropagationReport rep;
  double amp = 0.0;
  for (double v : first.phi) amp = std::max(amp, std::fabs(v));
  rep.identically_zero = amp == 0.0;
  rep.worst_max_phi = -std::numeric_limits<double>::infinity();
  if (rep.identically_zero) {
    // stationary case: the field must stay numerically zero
    double worst = 0.0;
    for (std::size_t r = 1; r < res.records.size(); ++r)
      worst = std::max(worst, std::fabs(res.records[r].max_phi));
    rep.worst_max_phi = worst;
    rep.holds = worst <= 1e-14;
    rep.note = "zero field preserved";
    return rep;
  }
  double floor = -1e-14 * amp;
  rep.holds = true;
  for (std::size_t r = 1; r < res.records.size(); ++r) {
    rep.worst_max_phi = std::max(rep.worst_max_phi, res.records[r].max_phi);
    if (!(res.records[r].max_phi <= floor)) rep.holds = false;
  }
  rep.note = rep.holds ? "strictly negative after the start" : "speed field reached the floor";
  return rep;
}

struct PhiEvolutionReport {
  double max_resid = 0.0;
  double at_s = 0.0;
  std::size_t record_index = 0;
};

// Check d phi/ds against the parabolic identity it must satisfy at fixed
// grid coordinates:
//   d phi/ds = Lap_h phi - h^{ij} f'(u) u_i phi_j - (|K|^2 + Ric_f(nu,nu)) phi
//              - phi nu^i phi_i
// where Lap_h is the induced-metric Laplacian (divergence form).  The last
// term is the advection from keeping the graph parameterisation: the
// vertical motion lambda phi d_t equals phi nu minus a tangential drift, so
// at fixed x the drift carries phi against its own gradient.  The s
// derivative uses three consecutive records with Lagrange weights.
inline PhiEvolutionReport verify_phi_evolution(const WarpedSpacetime& M, const WeightProfile& w,
                                               const FlowResult& res, std::size_t record_index) {
  using namespace mcf_detail;
  if (record_index == 0 || record_index + 1 >= res.records.size())
    throw std::invalid_argument("verify_phi_evolution: record index needs both neighbours");
  const FlowRecord& r0 = res.records[record_index - 1];
  const FlowRecord& r1 = res.records[record_index];
  const FlowRecord& r2 = res.records[record_index + 1];

  GraphHypersurface g;
  g.d = M.n - 1;
  g.n_pts = g.d == 1 ? static_cast<int>(r1.u.size())
                     : static_cast<int>(std::lround(std::sqrt(double(r1.u.size()))));
  g.u = r1.u;

  double s0 = r0.s, s1 = r1.s, s2t = r2.s;
  double w0 = (s1 - s2t) / ((s0 - s1) * (s0 - s2t));
  double w1 = (2 * s1 - s0 - s2t) / ((s1 - s0) * (s1 - s2t));
  double w2 = (s1 - s0) / ((s2t - s0) * (s2t - s1));

  // phi as a grid field for spatial differencing
  GraphHypersurface phi_field = g;
  phi_field.u = r1.phi;

  int n = g.n_pts;
  double h = g.delta();
  int jmax = g.d == 2 ? n : 1;

  // flux F^i = sqrt(h) h^{ij} phi_j at every node, for the divergence-form
  // Laplacian
  std::vector<double> flux0(g.size(), 0.0), flux1(g.size(), 0.0), sqrth(g.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < jmax; ++j) {
      NodeDerivs nu = node_derivs(g, i, j);
      NodeDerivs np = node_derivs(phi_field, i, j);
      GraphPoint p = graph_point(M, w, nu, g.d);
      if (!p.spacelike)
        throw std::domain_error("verify_phi_evolution: record is not spacelike");
      double A = M.a.value(nu.u);
      double rooth = std::pow(A, g.d) * p.lambda;
      sqrth[g.idx(i, j)] = rooth;
      for (int b = 0; b < g.d; ++b) {
        double hib0 = ((0 == b ? 1.0 : 0.0) + nu.du[0] * nu.du[b] / (A * A * p.lambda2)) / (A * A);
        flux0[g.idx(i, j)] += rooth * hib0 * np.du[b];
        if (g.d == 2) {
          double hib1 =
              ((1 == b ? 1.0 : 0.0) + nu.du[1] * nu.du[b] / (A * A * p.lambda2)) / (A * A);
          flux1[g.idx(i, j)] += rooth * hib1 * np.du[b];
        }
      }
    }
  }

  PhiEvolutionReport rep;
  rep.at_s = s1;
  rep.record_index = record_index;
  auto atf = [&](const std::vector<double>& v, int a, int b) {
    return v[g.idx(wrap(a, n), wrap(b, n))];
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < jmax; ++j) {
      std::size_t k = g.idx(i, j);
      NodeDerivs nu = node_derivs(g, i, j);
      NodeDerivs np = node_derivs(phi_field, i, j);
      GraphPoint p = graph_point(M, w, nu, g.d);
      double A = M.a.value(nu.u);

      double div = (atf(flux0, i + 1, j) - atf(flux0, i - 1, j)) / (2 * h);
      if (g.d == 2) div += (atf(flux1, i, j + 1) - atf(flux1, i, j - 1)) / (2 * h);
      double lap = div / sqrth[k];

      double drift = 0.0, advect = 0.0;
      for (int a = 0; a < g.d; ++a) {
        for (int b = 0; b < g.d; ++b) {
          double hab = ((a == b ? 1.0 : 0.0) + nu.du[a] * nu.du[b] / (A * A * p.lambda2)) /
                       (A * A);
          drift += hab * w.f.d1(nu.u) * nu.du[a] * np.du[b];
        }
        advect += r1.phi[k] * (nu.du[a] / (p.lambda * A * A)) * np.du[a];
      }

      double rhs = lap - drift - (p.K2 + p.ric_f_nn) * r1.phi[k] - advect;
      double dphi = w0 * r0.phi[k] + w1 * r1.phi[k] + w2 * r2.phi[k];
      rep.max_resid = std::max(rep.max_resid, std::fabs(dphi - rhs));
    }
  }
  return rep;
}

}  // namespace raylab

#include "raylab/mcf.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "test_models.hpp"

using namespace raylab;
using namespace test_models;

namespace {

WarpedSpacetime line_model(double rate, Interval dom = {-2.0, 2.0, false, false}) {
  return WarpedSpacetime(2, SpaceForm::Flat,
                         rate == 0.0 ? ScalarProfile::constant(1.0, dom)
                                     : ScalarProfile::cosh_profile(rate, dom),
                         dom);
}

TEST(Graph, FactoriesAndValidation) {
  GraphHypersurface c = GraphHypersurface::constant(1, 16, 0.25);
  EXPECT_EQ(c.size(), 16u);
  EXPECT_DOUBLE_EQ(c.u[7], 0.25);
  EXPECT_NEAR(c.delta(), 2.0 * M_PI / 16.0, 1e-15);

  GraphHypersurface f = GraphHypersurface::from_function(
      2, 8, [](double x, double y) { return std::sin(x) * std::cos(y); });
  EXPECT_EQ(f.size(), 64u);
  EXPECT_NEAR(f.u[f.idx(3, 5)], std::sin(3.0 * f.delta()) * std::cos(5.0 * f.delta()), 1e-15);

  EXPECT_THROW(GraphHypersurface::constant(3, 16, 0.0), std::invalid_argument);
  EXPECT_THROW(GraphHypersurface::constant(1, 4, 0.0), std::invalid_argument);
}

TEST(Graph, CompatibilityRequirements) {
  GraphHypersurface g = GraphHypersurface::constant(1, 16, 0.0);
  WeightProfile w = WeightProfile::zero({-1.0, 1.0, false, false});
  // model dimension must be d + 1
  WarpedSpacetime M4 = static_flat({-1.0, 1.0, false, false});
  EXPECT_THROW(graph_Hf(M4, w, g), std::invalid_argument);
  // curved slices are rejected
  Interval dom{-1.0, 1.0, false, false};
  WarpedSpacetime Msph(2, SpaceForm::Spherical, ScalarProfile::constant(1.0, dom), dom);
  EXPECT_THROW(graph_Hf(Msph, w, g), std::invalid_argument);
}

// A constant-height graph is a slice: H_f equals the slice value at u0 at
// every node, in d = 1 and d = 2.
TEST(Graph, ConstantGraphReproducesSliceCurvature) {
  WarpedSpacetime M = line_model(1.0);
  WeightProfile w = wiggle_weight(0.1, 0.05, 1.0, M.tdomain);
  GraphHypersurface g = GraphHypersurface::constant(1, 32, 0.5);
  std::vector<double> Hf = graph_Hf(M, w, g);
  double expect = f_mean_curvature(M, w, 0.5);
  for (double v : Hf) EXPECT_NEAR(v, expect, 1e-13);

  Interval dom{-1.0, 1.0, false, false};
  WarpedSpacetime M3(3, SpaceForm::Flat, ScalarProfile::exponential(1.0, 0.3, dom), dom);
  WeightProfile w3 = WeightProfile::zero(dom);
  GraphHypersurface g3 = GraphHypersurface::constant(2, 12, 0.2);
  std::vector<double> Hf3 = graph_Hf(M3, w3, g3);
  for (double v : Hf3) EXPECT_NEAR(v, 0.6, 1e-13);
}

// Independent oracle for the discrete operator: on a static background a
// small graph u = eps cos(k theta) has
//   H = u'' + O(eps^3),
// and the discrete second derivative of a cosine is exactly
// -(2 - 2 cos(k h))/h^2 times it.  The prediction below is built from first
// principles, not from the library formulas.
TEST(Graph, SmallAmplitudeLinearisationOracle) {
  WarpedSpacetime M = line_model(0.0);
  WeightProfile w = WeightProfile::zero(M.tdomain);
  const int n = 256, k = 3;
  const double eps = 1e-6;
  GraphHypersurface g = GraphHypersurface::from_function(
      1, n, [&](double x, double) { return eps * std::cos(k * x); });
  double h = g.delta();
  double kh2 = (2.0 - 2.0 * std::cos(k * h)) / (h * h);  // discrete eigenvalue
  std::vector<double> Hf = graph_Hf(M, w, g);
  for (int i = 0; i < n; ++i) {
    double predict = -eps * kh2 * std::cos(k * i * h);
    EXPECT_NEAR(Hf[i], predict, 1e-13) << "node " << i;
  }
}

// Same setup with a linear weight: H_f picks up -f'(u)/lambda, which at
// leading order just shifts the previous oracle by -slope.
TEST(Graph, WeightEntersThroughBoostedSlope) {
  WarpedSpacetime M = line_model(0.0);
  WeightProfile w(ScalarProfile::polynomial({0.0, 0.3}, M.tdomain), std::nullopt,
                  CausalDir::Past);
  const int n = 128, k = 2;
  const double eps = 1e-7;
  GraphHypersurface g = GraphHypersurface::from_function(
      1, n, [&](double x, double) { return eps * std::cos(k * x); });
  double h = g.delta();
  double kh2 = (2.0 - 2.0 * std::cos(k * h)) / (h * h);
  std::vector<double> Hf = graph_Hf(M, w, g);
  for (int i = 0; i < n; ++i)
    EXPECT_NEAR(Hf[i], -eps * kh2 * std::cos(k * i * h) - 0.3, 1e-12);
}

TEST(Graph, NonSpacelikeGraphThrows) {
  WarpedSpacetime M = line_model(0.0);
  WeightProfile w = WeightProfile::zero(M.tdomain);
  // |u'| surpasses a = 1 somewhere
  GraphHypersurface g = GraphHypersurface::from_function(
      1, 64, [](double x, double) { return 1.2 * std::cos(x); });
  EXPECT_THROW(graph_Hf(M, w, g), std::domain_error);
}

// Homogeneous reduction: from a constant graph the flow is the scalar ODE
// du/ds = H(u) = (2/3)/u on the matter background, so u(s)^2 = 1 + 4s/3.
TEST(Flow, HomogeneousReductionMatchesScalarODE) {
  Interval dom{0.0, 4.0, true, false};
  WarpedSpacetime M(2, SpaceForm::Flat, ScalarProfile::power(1.0, 2.0 / 3.0, dom), dom);
  WeightProfile w = WeightProfile::zero(dom);
  GraphHypersurface g0 = GraphHypersurface::constant(1, 64, 1.0);
  FlowOptions opts;
  opts.s_max = 0.1;
  FlowResult res = flow_run(M, w, g0, opts);
  EXPECT_EQ(res.stop, FlowStop::SMaxReached);
  EXPECT_NEAR(res.s_final, 0.1, 1e-12);
  double expect = std::sqrt(1.0 + 4.0 * 0.1 / 3.0);
  double umin = res.final_state.u[0], umax = res.final_state.u[0];
  for (double v : res.final_state.u) {
    umin = std::min(umin, v);
    umax = std::max(umax, v);
  }
  EXPECT_NEAR(umax, expect, 1e-5);
  EXPECT_LT(umax - umin, 1e-13);  // homogeneity is preserved exactly
}

TEST(Flow, SteadyStopOnVanishingSpeed) {
  WarpedSpacetime M = line_model(0.0);
  WeightProfile w = WeightProfile::zero(M.tdomain);
  GraphHypersurface g0 = GraphHypersurface::constant(1, 16, 0.0);
  FlowOptions opts;
  opts.s_max = 1.0;
  FlowResult res = flow_run(M, w, g0, opts);
  EXPECT_EQ(res.stop, FlowStop::Steady);
  EXPECT_EQ(res.steps, 0);
}

TEST(Flow, DomainEdgeStop) {
  Interval dom{0.0, 1.0, true, false};
  WarpedSpacetime M(2, SpaceForm::Flat, ScalarProfile::power(1.0, 2.0 / 3.0, dom), dom);
  WeightProfile w = WeightProfile::zero(dom);
  GraphHypersurface g0 = GraphHypersurface::constant(1, 16, 0.9);
  FlowOptions opts;
  opts.s_max = 5.0;
  FlowResult res = flow_run(M, w, g0, opts);
  EXPECT_EQ(res.stop, FlowStop::DomainEdge);
  EXPECT_LT(res.s_final, 5.0);
}

TEST(Flow, MaxStepsStop) {
  Interval dom{0.0, 4.0, true, false};
  WarpedSpacetime M(2, SpaceForm::Flat, ScalarProfile::power(1.0, 2.0 / 3.0, dom), dom);
  WeightProfile w = WeightProfile::zero(dom);
  FlowOptions opts;
  opts.s_max = 10.0;
  opts.max_steps = 3;
  FlowResult res = flow_run(M, w, GraphHypersurface::constant(1, 16, 1.0), opts);
  EXPECT_EQ(res.stop, FlowStop::MaxSteps);
  EXPECT_EQ(res.steps, 3);
}

// One-sided bump with H_f <= 0 everywhere and a single interior zero at the
// node theta = 0: once nonpositive, the speed field stays strictly negative.
TEST(Flow, SignPropagationOnBumpData) {
  WarpedSpacetime M = line_model(2.0);
  WeightProfile w = WeightProfile::zero(M.tdomain);
  GraphHypersurface g0 = GraphHypersurface::from_function(1, 128, [](double x, double) {
    double s = std::sin(x / 2.0);
    return -0.001 * s * s * s * s;
  });
  FlowOptions opts;
  opts.s_max = 0.02;
  opts.record_every = 8;
  FlowResult res = flow_run(M, w, g0, opts);
  EXPECT_EQ(res.stop, FlowStop::SMaxReached);
  ASSERT_GE(res.records.size(), 3u);
  EXPECT_LE(res.records.front().max_phi, 0.0);
  SignPropagationReport rep = verify_sign_propagation(res);
  EXPECT_TRUE(rep.holds);
  EXPECT_FALSE(rep.identically_zero);
  EXPECT_LT(rep.worst_max_phi, 0.0);
}

TEST(Flow, SignVerifierRejectsPositiveInitialData) {
  WarpedSpacetime M = line_model(2.0);
  WeightProfile w = WeightProfile::zero(M.tdomain);
  GraphHypersurface g0 = GraphHypersurface::from_function(1, 64, [](double x, double) {
    double s = std::sin(x / 2.0);
    return 0.001 * s * s * s * s;  // flipped sign: H_f has a positive part
  });
  FlowOptions opts;
  opts.s_max = 0.01;
  FlowResult res = flow_run(M, w, g0, opts);
  EXPECT_THROW(verify_sign_propagation(res), std::invalid_argument);
}

TEST(Flow, SignVerifierHandlesZeroField) {
  FlowResult res;
  FlowRecord r0;
  r0.s = 0.0;
  r0.phi = {0.0, 0.0, 0.0};
  r0.min_phi = r0.max_phi = 0.0;
  FlowRecord r1 = r0;
  r1.s = 0.1;
  res.records = {r0, r1};
  SignPropagationReport rep = verify_sign_propagation(res);
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.identically_zero);

  res.records[1].max_phi = 1e-12;  // numerically nonzero: must be flagged
  SignPropagationReport bad = verify_sign_propagation(res);
  EXPECT_FALSE(bad.holds);

  res.records.pop_back();
  EXPECT_THROW(verify_sign_propagation(res), std::invalid_argument);
}

// On the homogeneous reduction every spatial term of the parabolic identity
// vanishes and d phi/ds = -(|K|^2 + Ric_f(nu,nu)) phi holds exactly in the
// continuum; the recorded flow must satisfy it to truncation accuracy.
TEST(Flow, PhiEvolutionResidualOnHomogeneousFlow) {
  Interval dom{0.0, 4.0, true, false};
  WarpedSpacetime M(2, SpaceForm::Flat, ScalarProfile::power(1.0, 2.0 / 3.0, dom), dom);
  WeightProfile w = WeightProfile::zero(dom);
  FlowOptions opts;
  opts.s_max = 0.002;
  opts.record_every = 1;
  FlowResult res = flow_run(M, w, GraphHypersurface::constant(1, 256, 1.0), opts);
  ASSERT_GE(res.records.size(), 5u);
  PhiEvolutionReport rep = verify_phi_evolution(M, w, res, res.records.size() / 2);
  EXPECT_LT(rep.max_resid, 1e-6);
}

TEST(Flow, PhiEvolutionSecondOrderInGridSpacing) {
  WarpedSpacetime M = line_model(2.0);
  WeightProfile w = WeightProfile::zero(M.tdomain);
  auto resid_at = [&](int n_pts) {
    GraphHypersurface g0 = GraphHypersurface::from_function(
        1, n_pts, [](double x, double) { return 0.05 * std::cos(3.0 * x); });
    FlowOptions opts;
    opts.s_max = 3e-3;
    opts.record_every = 1;
    FlowResult res = flow_run(M, w, g0, opts);
    EXPECT_EQ(res.stop, FlowStop::SMaxReached);
    return verify_phi_evolution(M, w, res, res.records.size() / 2).max_resid;
  };
  double r128 = resid_at(128);
  double r256 = resid_at(256);
  double ratio = r128 / r256;
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 6.0);
}

TEST(Flow, PhiEvolutionIndexValidation) {
  Interval dom{0.0, 4.0, true, false};
  WarpedSpacetime M(2, SpaceForm::Flat, ScalarProfile::power(1.0, 2.0 / 3.0, dom), dom);
  WeightProfile w = WeightProfile::zero(dom);
  FlowOptions opts;
  opts.s_max = 1e-3;
  opts.record_every = 1;
  FlowResult res = flow_run(M, w, GraphHypersurface::constant(1, 16, 1.0), opts);
  EXPECT_THROW(verify_phi_evolution(M, w, res, 0), std::invalid_argument);
  EXPECT_THROW(verify_phi_evolution(M, w, res, res.records.size() - 1), std::invalid_argument);
}

TEST(Flow, CsvWriterShape) {
  Interval dom{0.0, 4.0, true, false};
  WarpedSpacetime M(2, SpaceForm::Flat, ScalarProfile::power(1.0, 2.0 / 3.0, dom), dom);
  WeightProfile w = WeightProfile::zero(dom);
  FlowOptions opts;
  opts.s_max = 2e-3;
  opts.record_every = 1;
  FlowResult res = flow_run(M, w, GraphHypersurface::constant(1, 16, 1.0), opts);
  std::ostringstream os;
  write_flow_csv(res, os);
  std::string text = os.str();
  EXPECT_EQ(text.rfind("s,min_phi,max_phi,max_speed\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            res.records.size() + 1);
}

}  // namespace

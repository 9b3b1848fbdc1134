#include "raylab/certificates.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "raylab/focusing.hpp"
#include "test_models.hpp"

using namespace raylab;
using namespace test_models;

namespace {

const Hypothesis* find_row(const Certificate& c, const std::string& name) {
  for (const auto& h : c.hypotheses)
    if (h.name == name) return &h;
  return nullptr;
}

bool row_passes(const Certificate& c, const std::string& name) {
  const Hypothesis* h = find_row(c, name);
  return h != nullptr && h->pass;
}

// Matter era, past direction: delta = 2/(3 t0), bound (3/2) t0, and the
// actual age t0 sits inside the bound.
TEST(CheckT11, MatterEraPastFiresSharply) {
  WarpedSpacetime M = matter_flat(7.0);
  WeightProfile w = zero_weight(M);
  for (double t0 : {0.5, 1.0, 2.0}) {
    SurfaceData S = SurfaceData::homogeneous(M, w, t0);
    Certificate c = check_t11(M, w, S, Direction::Past);
    EXPECT_EQ(c.verdict, Verdict::FIRES);
    EXPECT_EQ(c.theorem, "T4.1");
    EXPECT_EQ(c.direction, "past");
    EXPECT_NEAR(c.delta, 2.0 / (3.0 * t0), 1e-12);
    EXPECT_NEAR(c.t_bound, 1.5 * t0, 1e-9);
    EXPECT_EQ(c.conclusion, "every timelike geodesic incomplete");
    EXPECT_TRUE(row_passes(c, "ric_f_ge_0"));
    EXPECT_TRUE(row_passes(c, "weight_bounded"));
    EXPECT_TRUE(row_passes(c, "slice_contracting"));
    EXPECT_GE(c.t_bound, t0);  // bound must cover the actual age
  }
}

TEST(CheckT11, FutureStatementOnReversedModelMatchesPast) {
  WarpedSpacetime M = matter_flat(7.0);
  WeightProfile w = wiggle_weight(0.05, 0.02, 1.0, M.tdomain);
  SurfaceData S = SurfaceData::homogeneous(M, w, 1.0);
  Certificate past = check_t11(M, w, S, Direction::Past);

  WarpedSpacetime R = M.time_reversed();
  WeightProfile wr = w.time_reversed();
  SurfaceData Sr = SurfaceData::homogeneous(R, wr, -1.0);
  Certificate fut = check_t11(R, wr, Sr, Direction::Future);

  EXPECT_EQ(past.theorem, "T4.1");
  EXPECT_EQ(fut.theorem, "T1.1");
  EXPECT_EQ(past.verdict, fut.verdict);
  EXPECT_NEAR(past.delta, fut.delta, 1e-13);
  EXPECT_NEAR(past.t_bound, fut.t_bound, 1e-12);
  ASSERT_EQ(past.hypotheses.size(), fut.hypotheses.size());
  for (std::size_t i = 0; i < past.hypotheses.size(); ++i)
    EXPECT_EQ(past.hypotheses[i].pass, fut.hypotheses[i].pass) << past.hypotheses[i].name;
}

TEST(CheckT11, NonCauchySliceWeakensTagAndConclusion) {
  WarpedSpacetime M = matter_flat();
  WeightProfile w = zero_weight(M);
  SurfaceData S = SurfaceData::homogeneous(M, w, 1.0, /*cauchy=*/false);
  Certificate c = check_t11(M, w, S, Direction::Past);
  EXPECT_EQ(c.verdict, Verdict::FIRES);
  EXPECT_EQ(c.theorem, "T2.5");
  EXPECT_EQ(c.conclusion, "some timelike geodesic incomplete");
}

TEST(CheckT11, NonCompactSliceThrows) {
  WarpedSpacetime M = matter_flat();
  WeightProfile w = zero_weight(M);
  SurfaceData S = SurfaceData::homogeneous(M, w, 1.0, true, /*compact=*/false);
  EXPECT_THROW(check_t11(M, w, S, Direction::Past), std::invalid_argument);
  EXPECT_THROW(check_t12(M, w, S, Direction::Past, T12Case::II), std::invalid_argument);
}

// Lambda-matter past bound: delta = coth(3 t0 / 2) - 1 and the deadline
// collapses back to (3/2) t0.
TEST(CheckT12, LambdaMatterPastCaseII) {
  WarpedSpacetime M = lambda_matter_flat();
  WeightProfile w = zero_weight(M);
  SurfaceData S = SurfaceData::homogeneous(M, w, 1.0);
  Certificate c = check_t12(M, w, S, Direction::Past, T12Case::II);
  EXPECT_EQ(c.verdict, Verdict::FIRES);
  EXPECT_EQ(c.theorem, "T4.2ii");
  EXPECT_NEAR(c.delta, 0.10479139298251190, 1e-12);
  EXPECT_NEAR(c.t_bound, 1.5, 1e-10);
  EXPECT_TRUE(row_passes(c, "ric_f_ge_-3"));
  EXPECT_TRUE(row_passes(c, "grad_f_causal"));
  EXPECT_TRUE(row_passes(c, "contraction_exceeds_unity"));
}

// The same physics as a future statement on the reversed model, plus actual
// blow-up of the comoving congruence inside the certified bound.
TEST(CheckT12, ReversedLambdaMatterFutureCaseIIAndSoundness) {
  WarpedSpacetime R = lambda_matter_flat().time_reversed();
  WeightProfile w = zero_weight(R);
  SurfaceData S = SurfaceData::homogeneous(R, w, -1.0);
  Certificate c = check_t12(R, w, S, Direction::Future, T12Case::II);
  EXPECT_EQ(c.verdict, Verdict::FIRES);
  EXPECT_EQ(c.theorem, "T1.2ii");
  EXPECT_NEAR(c.t_bound, 1.5, 1e-10);

  CongruenceTrajectory traj = integrate_raychaudhuri(R, w, -1.0, 0.0);
  ASSERT_EQ(traj.status, TrajectoryStatus::BlowUp);
  EXPECT_LE(traj.blowup->t_blow - (-1.0), c.t_bound + 1e-4);
}

// Case I on the reversed lambda-matter model with a constant weight: the
// fired delta depends on the declared bound, and switching the bound scope
// from the global declaration to the slab ahead restores sharpness.
TEST(CheckT12, CaseIWeightBoundScopeMatters) {
  WarpedSpacetime R = lambda_matter_flat().time_reversed();
  Interval dom = R.tdomain;

  WeightProfile tight(ScalarProfile::constant(0.2, dom), 0.2);
  SurfaceData S = SurfaceData::homogeneous(R, tight, -1.0);
  Certificate c1 = check_t12(R, tight, S, Direction::Future, T12Case::I);
  EXPECT_EQ(c1.verdict, Verdict::FIRES);
  EXPECT_EQ(c1.theorem, "T1.2i");
  EXPECT_NEAR(c1.delta, 0.10479139298251190, 1e-12);

  // Declared sup inflated by 0.3: the weighted contraction drops below 1.
  WeightProfile loose(ScalarProfile::constant(0.2, dom), 0.5);
  SurfaceData S2 = SurfaceData::homogeneous(R, loose, -1.0);
  Certificate c2 = check_t12(R, loose, S2, Direction::Future, T12Case::I);
  EXPECT_EQ(c2.verdict, Verdict::FAILS);
  EXPECT_FALSE(row_passes(c2, "weighted_contraction_exceeds_unity"));

  CertOptions causal;
  causal.k_scope = KScope::Causal;
  Certificate c3 = check_t12(R, loose, S2, Direction::Future, T12Case::I, causal);
  EXPECT_EQ(c3.verdict, Verdict::FIRES);
  EXPECT_NEAR(c3.delta, 0.10479139298251190, 1e-10);
}

TEST(CheckT12, BorderlineContractionDoesNotFire) {
  // a = e^{-t} has H_f = -(n-1) exactly: delta = 0 misses the strict margin.
  WarpedSpacetime M = exp_contracting();
  WeightProfile w = zero_weight(M);
  SurfaceData S = SurfaceData::homogeneous(M, w, 0.0);
  Certificate c = check_t12(M, w, S, Direction::Future, T12Case::II);
  EXPECT_EQ(c.verdict, Verdict::FAILS);
  EXPECT_FALSE(row_passes(c, "contraction_exceeds_unity"));

  // ... and the rigidity classifier recognises exactly this borderline.
  Certificate r = classify_rigidity(M, w, S, Direction::Future, true);
  EXPECT_EQ(r.verdict, Verdict::RIGID);
}

TEST(CheckT11, StaticSliceDoesNotFire) {
  WarpedSpacetime M = static_flat();
  WeightProfile w = zero_weight(M);
  SurfaceData S = SurfaceData::homogeneous(M, w, 0.0);
  Certificate c = check_t11(M, w, S, Direction::Future);
  EXPECT_EQ(c.verdict, Verdict::FAILS);
  EXPECT_FALSE(row_passes(c, "slice_contracting"));
  EXPECT_FALSE(std::isfinite(c.delta));
  EXPECT_FALSE(std::isfinite(c.t_bound));
}

// Randomized collapsing power laws with small weights: whenever the checker
// fires, the comoving congruence must actually blow up inside the bound.
TEST(CheckT11, FiredBoundsCoverActualBlowUp) {
  std::mt19937 rng(7771);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int fired = 0;
  for (int i = 0; i < 12; ++i) {
    double T = 2.0 + U(rng);
    double q = 0.4 + 0.55 * U(rng);
    double t_S = 0.3 + 0.5 * U(rng);
    WarpedSpacetime M = collapsing_power(T, q);
    WeightProfile w = wiggle_weight(0.0, 0.002 * U(rng), 1.0 + U(rng), M.tdomain);
    SurfaceData S = SurfaceData::homogeneous(M, w, t_S);
    Certificate c = check_t11(M, w, S, Direction::Future);
    if (c.verdict != Verdict::FIRES) continue;
    ++fired;
    CongruenceTrajectory traj = integrate_raychaudhuri(M, w, t_S, T);
    ASSERT_EQ(traj.status, TrajectoryStatus::BlowUp) << "seed " << i;
    EXPECT_LE(traj.blowup->t_blow - t_S, c.t_bound + 1e-4) << "seed " << i;
  }
  EXPECT_GE(fired, 10);
}

TEST(GridMin, FoldsBoostMinimumAnalytically) {
  WarpedSpacetime M = matter_flat();
  WeightProfile w = zero_weight(M);
  GridMinResult g = theorem_grid_min(M, w, 0.0);
  EXPECT_TRUE(g.beta_bounded);
  // Ric_f(nu,nu) = (2/3)/t^2 is smallest at the far end t = 4.
  EXPECT_NEAR(g.margin, (2.0 / 3.0) / 16.0, 1e-9);
  EXPECT_NEAR(g.argmin_t, 4.0, 1e-6);
}

TEST(GridMin, NegativeBoostSlopeIsUnbounded) {
  WarpedSpacetime M = static_flat();
  WeightProfile w(ScalarProfile::polynomial({0.0, 0.0, -0.5}, M.tdomain), 0.0);
  EXPECT_LT(ric_f_beta_slope(M, w, 0.5), 0.0);
  GridMinResult g = theorem_grid_min(M, w, 0.0);
  EXPECT_FALSE(g.beta_bounded);
  EXPECT_LT(g.margin, -1e299);

  SurfaceData S = SurfaceData::homogeneous(M, w, 0.0);
  Certificate c = check_t11(M, w, S, Direction::Future);
  const Hypothesis* ec = find_row(c, "ric_f_ge_0");
  ASSERT_NE(ec, nullptr);
  EXPECT_FALSE(ec->pass);
  EXPECT_NE(ec->witness.find("unbounded"), std::string::npos);
}

TEST(Rigidity, StaticProductUpgradesAcrossCauchySlice) {
  WarpedSpacetime M = static_spherical();
  WeightProfile w(ScalarProfile::constant(0.3, M.tdomain), 0.3);
  SurfaceData S = SurfaceData::homogeneous(M, w, 0.0);
  Certificate c = classify_rigidity(M, w, S, Direction::Future, true);
  EXPECT_EQ(c.verdict, Verdict::RIGID);
  EXPECT_EQ(c.conclusion, "splits (product)");
  EXPECT_EQ(c.theorem, "C1.4");
  EXPECT_TRUE(row_passes(c, "verified_static_slab"));

  SurfaceData Snc = SurfaceData::homogeneous(M, w, 0.0, /*cauchy=*/false);
  Certificate c2 = classify_rigidity(M, w, Snc, Direction::Future, true);
  EXPECT_EQ(c2.verdict, Verdict::RIGID);
  EXPECT_EQ(c2.theorem, "T1.3");
}

TEST(Rigidity, CompletenessIsACallerAssertion) {
  WarpedSpacetime M = static_spherical();
  WeightProfile w(ScalarProfile::constant(0.3, M.tdomain), 0.3);
  SurfaceData S = SurfaceData::homogeneous(M, w, 0.0);
  Certificate c = classify_rigidity(M, w, S, Direction::Future, false);
  EXPECT_EQ(c.verdict, Verdict::FAILS);
  const Hypothesis* h = find_row(c, "timelike_complete");
  ASSERT_NE(h, nullptr);
  EXPECT_FALSE(h->pass);
  EXPECT_EQ(h->witness, "caller-asserted");
}

TEST(Rigidity, FallingExponentialSplitsWarped) {
  WarpedSpacetime M = exp_contracting();
  WeightProfile w(ScalarProfile::constant(0.25, M.tdomain), 0.25);
  SurfaceData S = SurfaceData::homogeneous(M, w, 0.0);
  Certificate c = classify_rigidity(M, w, S, Direction::Future, true);
  EXPECT_EQ(c.verdict, Verdict::RIGID);
  EXPECT_EQ(c.theorem, "T1.5");
  EXPECT_EQ(c.conclusion, "splits (warped e^{-2t})");
  EXPECT_TRUE(row_passes(c, "verified_exponential_slab"));

  // Independent recheck of the slab identity the classifier claims.
  double a0 = M.a.value(0.0);
  double worst = 0.0;
  for (int i = 0; i <= 64; ++i) {
    double t = 0.5 * i / 64.0;
    worst = std::max(worst, std::fabs(M.a.value(t) - a0 * std::exp(-t)));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Rigidity, WigglingScaleFactorFailsBothBranches) {
  Interval dom{-2.0, 2.0, false, false};
  WarpedSpacetime M(4, SpaceForm::Flat, ScalarProfile::sinusoid(1.0, 0.1, 1.0, dom), dom);
  WeightProfile w = WeightProfile::zero(dom);
  SurfaceData S = SurfaceData::homogeneous(M, w, 0.0);
  Certificate c = classify_rigidity(M, w, S, Direction::Future, true);
  EXPECT_EQ(c.verdict, Verdict::FAILS);
  EXPECT_EQ(c.theorem, "T1.3");
  const Hypothesis* hz = find_row(c, "H_f_vanishes_ahead");
  const Hypothesis* hw = find_row(c, "H_f_constant_ahead");
  ASSERT_NE(hz, nullptr);
  ASSERT_NE(hw, nullptr);
  EXPECT_FALSE(hz->pass);
  EXPECT_FALSE(hw->pass);
}

TEST(Rigidity, WindowCollapsedAtDomainEdge) {
  WarpedSpacetime M = static_spherical();
  WeightProfile w(ScalarProfile::constant(0.3, M.tdomain), 0.3);
  SurfaceData S = SurfaceData::homogeneous(M, w, 2.0);  // forward window has zero length
  Certificate c = classify_rigidity(M, w, S, Direction::Future, true);
  EXPECT_EQ(c.verdict, Verdict::FAILS);
  const Hypothesis* hz = find_row(c, "H_f_vanishes_ahead");
  ASSERT_NE(hz, nullptr);
  EXPECT_NE(hz->witness.find("collapsed"), std::string::npos);
}

TEST(Certificate, JsonUsesNullForUndefinedBound) {
  WarpedSpacetime M = static_flat();
  WeightProfile w = zero_weight(M);
  SurfaceData S = SurfaceData::homogeneous(M, w, 0.0);
  Certificate fails = check_t11(M, w, S, Direction::Future);
  auto j = fails.to_json();
  EXPECT_TRUE(j["delta"].is_null());
  EXPECT_TRUE(j["t_bound"].is_null());
  EXPECT_EQ(j["verdict"], "FAILS");

  WarpedSpacetime E = matter_flat();
  WeightProfile we = zero_weight(E);
  Certificate fires = check_t11(E, we, SurfaceData::homogeneous(E, we, 1.0), Direction::Past);
  auto jf = fires.to_json();
  EXPECT_TRUE(jf["delta"].is_number());
  EXPECT_NEAR(jf["t_bound"].get<double>(), 1.5, 1e-9);
  // key order is part of the record contract
  std::string dump = jf.dump();
  EXPECT_LT(dump.find("\"theorem\""), dump.find("\"direction\""));
  EXPECT_LT(dump.find("\"direction\""), dump.find("\"verdict\""));
  EXPECT_LT(dump.find("\"hypotheses\""), dump.find("\"delta\""));
}

TEST(Certificate, JsonlWriterEmitsOneLinePerCertificate) {
  WarpedSpacetime M = matter_flat();
  WeightProfile w = zero_weight(M);
  SurfaceData S = SurfaceData::homogeneous(M, w, 1.0);
  std::vector<Certificate> cs{check_t11(M, w, S, Direction::Past),
                              check_t12(M, w, S, Direction::Past, T12Case::II)};
  std::ostringstream os;
  write_certificates_jsonl(cs, os);
  std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  EXPECT_EQ(first["theorem"], "T4.1");
}

}  // namespace

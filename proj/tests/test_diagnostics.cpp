#include "plnash/diagnostics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plnash/problems.hpp"
#include "plnash/rng.hpp"

namespace plnash {
namespace {

SampleBox square_box(double halfwidth) {
  return SampleBox{{-halfwidth, halfwidth}, {-halfwidth, halfwidth}};
}

std::vector<BlockVector> random_states(const BlockLayout& layout, const SampleBox& box,
                                       int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<BlockVector> states;
  states.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    BlockVector x(layout);
    for (int i = 0; i < layout.n(); ++i) {
      auto blk = x.block(i);
      for (double& c : blk) c = rng.uniform(box[static_cast<std::size_t>(i)].first,
                                            box[static_cast<std::size_t>(i)].second);
    }
    states.push_back(std::move(x));
  }
  return states;
}

TEST(FitRateTest, GeometricDecayIsLinear) {
  std::vector<double> gaps;
  double g = 1.0;
  for (int t = 0; t < 200; ++t) {
    gaps.push_back(g);
    g *= 0.9;
  }
  const RateFit fit = fit_rate(gaps);
  EXPECT_EQ(fit.kind, RateKind::linear);
  EXPECT_NEAR(fit.rate, 0.9, 1e-9);
  EXPECT_GE(fit.r2, 0.999999);
  EXPECT_NEAR(fit.mean_ratio, 0.9, 1e-9);
  EXPECT_EQ(fit.window, 160);  // 20% burn-in over 200 positive entries
}

TEST(FitRateTest, ConstantTraceIsStalled) {
  const std::vector<double> gaps(200, 1.0);
  const RateFit fit = fit_rate(gaps);
  EXPECT_EQ(fit.kind, RateKind::stalled);
  EXPECT_DOUBLE_EQ(fit.mean_ratio, 1.0);
}

TEST(FitRateTest, HarmonicDecayIsSublinearOverLongWindows) {
  // gap(t) = 1/t decreases without a geometric factor: the log fit is poor
  // but the trailing ratios approach 1 from below.
  std::vector<double> gaps;
  for (int t = 1; t <= 2000; ++t) gaps.push_back(1.0 / static_cast<double>(t));
  const RateFit fit = fit_rate(gaps);
  EXPECT_EQ(fit.kind, RateKind::sublinear);
  EXPECT_GE(fit.mean_ratio, 0.999);
  EXPECT_LT(fit.r2, 0.99);
}

TEST(FitRateTest, ShortHarmonicWindowIsStalledNotSublinear) {
  // Over only 200 iterations the trailing ratio of 1/t is still below the
  // sublinear threshold: the classifier refuses to call it sublinear.
  std::vector<double> gaps;
  for (int t = 1; t <= 200; ++t) gaps.push_back(1.0 / static_cast<double>(t));
  const RateFit fit = fit_rate(gaps);
  EXPECT_EQ(fit.kind, RateKind::stalled);
  EXPECT_LT(fit.mean_ratio, 0.999);
}

TEST(FitRateTest, GrowthPastThousandfoldIsDiverged) {
  std::vector<double> gaps;
  double g = 1.0;
  for (int t = 0; t < 50; ++t) {
    gaps.push_back(g);
    g *= 2.0;
  }
  const RateFit fit = fit_rate(gaps);
  EXPECT_EQ(fit.kind, RateKind::diverged);
  EXPECT_EQ(fit.note, "gap grew by more than 1e3");
}

TEST(FitRateTest, NonFiniteEntryIsDiverged) {
  const std::vector<double> gaps = {1.0, std::numeric_limits<double>::quiet_NaN(), 0.5};
  const RateFit fit = fit_rate(gaps);
  EXPECT_EQ(fit.kind, RateKind::diverged);
  EXPECT_EQ(fit.note, "non-finite gap");
}

TEST(FitRateTest, TracesHittingExactZeroCountAsLinear) {
  std::vector<double> gaps = {1.0, 0.5};
  gaps.resize(20, 0.0);
  const RateFit fit = fit_rate(gaps);
  EXPECT_EQ(fit.kind, RateKind::linear);
  EXPECT_DOUBLE_EQ(fit.rate, 0.0);
  EXPECT_EQ(fit.note, "hit zero");
  EXPECT_EQ(fit.window, 2);
}

TEST(FitRateTest, EmptyTraceThrows) {
  EXPECT_THROW(fit_rate({}), std::invalid_argument);
}

TEST(FitRateTest, ClassifiesARealSolverTrace) {
  const ProblemSpec spec = registry_get("f4");
  SolverConfig cfg;
  cfg.alpha = 0.05;
  cfg.T = 300;
  cfg.seed = 2;
  BlockVector x0{spec.game.layout};
  x0[0] = 1.0;
  x0[1] = 1.0;
  const SolveResult res = run_rbcd(spec.game, x0, cfg);
  std::vector<double> gaps;
  for (const IterationRecord& r : res.trace) gaps.push_back(r.gap);
  const RateFit fit = fit_rate(gaps);
  EXPECT_EQ(fit.kind, RateKind::linear);
  EXPECT_GE(fit.rate, 0.7);
  EXPECT_LE(fit.rate, 0.9);
  EXPECT_GE(fit.r2, 0.99);
}

TEST(ToStringTest, RateKindNames) {
  EXPECT_EQ(to_string(RateKind::linear), "linear");
  EXPECT_EQ(to_string(RateKind::sublinear), "sublinear");
  EXPECT_EQ(to_string(RateKind::stalled), "stalled");
  EXPECT_EQ(to_string(RateKind::diverged), "diverged");
}

TEST(EstimatePLTest, RecoversExactRatioOnQuadraticPair) {
  // For f4 the per-player ratio ||g_i||^2 / (2 (f_i - f_i*)) equals 2 at
  // every sampled state, so the sampled minimum is exact.
  const ProblemSpec spec = registry_get("f4");
  const PLProfile prof = estimate_pl(spec.game, square_box(2.0), 200, 3);
  EXPECT_DOUBLE_EQ(prof.mu_hat, 2.0);
  EXPECT_EQ(prof.sample_count, 200);
  EXPECT_EQ(prof.mu_argmin.size(), 2);
  EXPECT_GE(prof.L_hat, 2.0);
  EXPECT_LE(prof.L_hat, 4.0 + 1e-9);
  // gap = 2 s^2 and ||grad(F - G_F)|| = 4 sqrt(gap) / 2^{1/2} * 2^{1/2}:
  // an exact half-power law, so the exploratory fit recovers theta = 2 and
  // nu = 8 (from ||grad h||^2 = 16 gap = 2 nu gap).
  ASSERT_TRUE(prof.theta_hat.has_value());
  ASSERT_TRUE(prof.nu_hat.has_value());
  EXPECT_NEAR(*prof.theta_hat, 2.0, 1e-9);
  EXPECT_NEAR(*prof.nu_hat, 8.0, 1e-6);
}

TEST(EstimatePLTest, SampledMuNeverUndershootsTheProvenConstant) {
  const ProblemSpec spec = registry_get("f1");
  const PLProfile prof = estimate_pl(spec.game, square_box(2.0), 200, 5);
  EXPECT_GE(prof.mu_hat, 2.0 - 1e-9);
  EXPECT_LE(prof.mu_hat, 60.0 + 1e-9);
  EXPECT_GT(prof.L_hat, 0.0);
  EXPECT_LE(prof.L_hat, 60.0 + 1e-6);
}

TEST(EstimatePLTest, InputValidation) {
  const ProblemSpec spec = registry_get("f4");
  EXPECT_THROW(estimate_pl(spec.game, square_box(2.0), 0, 1), std::invalid_argument);
  EXPECT_THROW(estimate_pl(spec.game, SampleBox{{-1.0, 1.0}}, 10, 1), std::invalid_argument);
}

TEST(ThetaNuFitTest, RecoversQuadraticLaw) {
  // h(x) = x^2: ||h'|| = 2 sqrt(h), i.e. theta = 2, nu = 2.
  std::vector<std::pair<double, double>> pairs;
  for (int t = 1; t <= 30; ++t) {
    const double h = 0.1 * static_cast<double>(t);
    pairs.emplace_back(h, 2.0 * std::sqrt(h));
  }
  const ThetaNuFit fit = theta_nu_fit(pairs);
  EXPECT_NEAR(fit.theta_hat, 2.0, 1e-9);
  EXPECT_NEAR(fit.nu_hat, 2.0, 1e-9);
  EXPECT_GE(fit.r2, 1.0 - 1e-12);
  EXPECT_EQ(fit.used, 30);
}

TEST(ThetaNuFitTest, RecoversCubicLaw) {
  // h(x) = |x|^3: ||h'|| = 3 h^{2/3}, i.e. theta = 3/2 and
  // nu = e^{2 ln 3} / 2 = 9/2.
  std::vector<std::pair<double, double>> pairs;
  for (int t = 1; t <= 25; ++t) {
    const double h = 0.05 * static_cast<double>(t);
    pairs.emplace_back(h, 3.0 * std::pow(h, 2.0 / 3.0));
  }
  const ThetaNuFit fit = theta_nu_fit(pairs);
  EXPECT_NEAR(fit.theta_hat, 1.5, 1e-9);
  EXPECT_NEAR(fit.nu_hat, 4.5, 1e-9);
}

TEST(ThetaNuFitTest, RejectsSmallOrDegenerateInputs) {
  std::vector<std::pair<double, double>> few;
  for (int t = 1; t <= 19; ++t) few.emplace_back(static_cast<double>(t), 1.0 + t);
  EXPECT_THROW(theta_nu_fit(few), std::invalid_argument);
  // Non-positive entries are filtered before the count check.
  std::vector<std::pair<double, double>> filtered = few;
  filtered.emplace_back(0.0, 1.0);
  filtered.emplace_back(1.0, 0.0);
  EXPECT_THROW(theta_nu_fit(filtered), std::invalid_argument);
  // A flat gradient law has zero slope: theta would be infinite. Gradient
  // norm 1 makes every log exactly zero, so the fitted slope is exactly 0.
  std::vector<std::pair<double, double>> flat;
  for (int t = 1; t <= 30; ++t) flat.emplace_back(static_cast<double>(t), 1.0);
  EXPECT_THROW(theta_nu_fit(flat), std::domain_error);
}

TEST(ThetaNuFitTest, FitsSampledPairsFromAProblem) {
  const ProblemSpec spec = registry_get("f4");
  const auto pairs = gap_gradnorm_samples(spec.game, square_box(2.0), 40, 12);
  ASSERT_EQ(pairs.size(), 40u);
  for (const auto& [g, gn] : pairs) {
    if (g <= 0.0) continue;
    EXPECT_NEAR(gn, 4.0 * std::sqrt(g), 1e-9 * std::max(1.0, gn));
  }
  const ThetaNuFit fit = theta_nu_fit(pairs);
  EXPECT_NEAR(fit.theta_hat, 2.0, 1e-9);
  EXPECT_NEAR(fit.nu_hat, 8.0, 1e-6);
}

TEST(KappaRatioTest, MatchesHandComputedQuantities) {
  const ProblemSpec f6 = registry_get("f6");
  BlockVector x{f6.game.layout};
  x[0] = 1.0;
  x[1] = 1.0;
  const BestResponseResult br = exact_best_responses(f6.game, x);
  EXPECT_DOUBLE_EQ(kappa_ratio(f6.game, x, br), -0.4);

  const ProblemSpec f4 = registry_get("f4");
  BlockVector y{f4.game.layout};
  y[0] = 1.3;
  y[1] = -0.4;
  const BestResponseResult br4 = exact_best_responses(f4.game, y);
  EXPECT_DOUBLE_EQ(kappa_ratio(f4.game, y, br4), -1.0);
}

TEST(KappaRatioTest, UndefinedAtEquilibria) {
  const ProblemSpec f4 = registry_get("f4");
  BlockVector x{f4.game.layout};
  x[0] = 1.0;
  x[1] = -1.0;
  const BestResponseResult br = exact_best_responses(f4.game, x);
  EXPECT_THROW(kappa_ratio(f4.game, x, br), std::domain_error);
}

TEST(KappaBoundTest, GlobalBoundsHoldOnAnalyticProblems) {
  for (const char* name : {"f1", "f4", "f6", "resource"}) {
    const ProblemSpec spec = registry_get(name);
    const KappaBoundReport rep = kappa_global_bound_check(spec.game, square_box(2.0), 150, 17);
    EXPECT_TRUE(rep.ok()) << name;
    EXPECT_EQ(rep.samples, 150) << name;
    EXPECT_LE(rep.worst_a_margin, 1e-10) << name;
    EXPECT_LE(rep.worst_b_margin, 1e-10) << name;
  }
}

TEST(KappaBoundTest, RequiresKnownConstants) {
  const ProblemSpec f3 = registry_get("f3");
  EXPECT_THROW(kappa_global_bound_check(f3.game, square_box(2.0), 10, 1), std::invalid_argument);
  const ProblemSpec f4 = registry_get("f4");
  EXPECT_THROW(kappa_global_bound_check(f4.game, square_box(2.0), 0, 1), std::invalid_argument);
}

TEST(CaseRegionTest, QuadraticPairNeverTriggersCaseThree) {
  // kappa = -1 away from the equilibrium line, so A <= gamma D everywhere.
  const ProblemSpec spec = registry_get("f4");
  const CaseRegionMeasure m = case_region_measure(spec.game, 0.5, 1.0, 101, square_box(2.0));
  EXPECT_EQ(m.case3_count, 0);
  EXPECT_DOUBLE_EQ(m.fraction, 0.0);
  // The 101 grid points on the anti-diagonal x2 = -x1 are equilibria.
  EXPECT_EQ(m.non_ne_count, 101 * 101 - 101);
  EXPECT_DOUBLE_EQ(m.max_case3_gap, 0.0);
}

TEST(CaseRegionTest, TighteningGammaGrowsTheCaseThreeRegion) {
  const ProblemSpec spec = registry_get("f1");
  const CaseRegionMeasure loose = case_region_measure(spec.game, 0.99, 0.01, 51, square_box(2.0));
  const CaseRegionMeasure tight = case_region_measure(spec.game, 0.5, 0.5, 51, square_box(2.0));
  EXPECT_LE(loose.case3_count, tight.case3_count);
  EXPECT_GT(tight.non_ne_count, 0);
}

TEST(CaseRegionTest, ShapeValidationAndEdgeCases) {
  const ProblemSpec lq = registry_get("lq");
  EXPECT_THROW(case_region_measure(lq.game, 0.5, 1.0, 11, square_box(0.1)),
               std::invalid_argument);
  const ProblemSpec f3 = registry_get("f3");
  EXPECT_THROW(case_region_measure(f3.game, 0.5, 1.0, 11, square_box(2.0)),
               MissingBestResponse);
  const ProblemSpec f4 = registry_get("f4");
  EXPECT_THROW(case_region_measure(f4.game, 0.5, 1.0, 11, SampleBox{{-1.0, 1.0}}),
               std::invalid_argument);
  const CaseRegionMeasure empty = case_region_measure(f4.game, 0.5, 1.0, 0, square_box(2.0));
  EXPECT_EQ(empty.non_ne_count, 0);
  EXPECT_DOUBLE_EQ(empty.fraction, 0.0);
}

TEST(ContractionTest, QuadraticPairSatisfiesAllBounds) {
  const ProblemSpec spec = registry_get("f4");
  SolverConfig cfg;
  cfg.gamma = 0.5;
  cfg.C = 1.0;
  const auto states = random_states(spec.game.layout, square_box(2.0), 30, 21);
  const ContractionReport rep = verify_contraction_theorems(spec.game, cfg, states);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.states_checked, 30);
  EXPECT_EQ(rep.skipped_ne, 0);
  EXPECT_EQ(rep.skipped_kappa, 0);  // kappa = -1 < 1 everywhere off the line
  EXPECT_EQ(rep.case1, 30);
  EXPECT_EQ(rep.case2, 0);
  EXPECT_EQ(rep.case3, 0);
  EXPECT_LE(rep.worst_rbcd_margin, 1e-10);
  EXPECT_LE(rep.worst_case1_margin, 1e-10);
}

TEST(ContractionTest, MixedCaseProblemSatisfiesProofLevelBounds) {
  const ProblemSpec spec = registry_get("f6");
  SolverConfig cfg;
  cfg.gamma = 0.3;
  cfg.C = 0.5;
  const auto states = random_states(spec.game.layout, square_box(2.0), 200, 999);
  const ContractionReport rep = verify_contraction_theorems(spec.game, cfg, states);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.skipped_ne, 0);
  EXPECT_EQ(rep.states_checked, 200);
  EXPECT_EQ(rep.case1 + rep.case2 + rep.case3, 200);
  EXPECT_GT(rep.case1, 0);
  EXPECT_EQ(rep.stated_case2_violations, 0);
}

TEST(ContractionTest, RequiresConstantsAndExactBestResponses) {
  SolverConfig cfg;
  const ProblemSpec saddle = registry_get("saddle");
  EXPECT_THROW(
      verify_contraction_theorems(saddle.game, cfg,
                                  random_states(saddle.game.layout, square_box(1.0), 3, 1)),
      std::invalid_argument);
  const ProblemSpec resource = registry_get("resource");
  GameProblem no_br = resource.game;
  no_br.exact_best_response = nullptr;
  EXPECT_THROW(
      verify_contraction_theorems(no_br, cfg,
                                  random_states(no_br.layout, square_box(1.0), 3, 1)),
      MissingBestResponse);
}

TEST(GradCheckTest, AnalyticGradientsPassOnRegistryProblems) {
  const ProblemSpec f1 = registry_get("f1");
  const GradCheckReport rep = gradcheck_problem(f1.game, square_box(2.0), 50, 7);
  EXPECT_TRUE(rep.ok);
  EXPECT_LE(rep.worst_rel, 1e-6);
  EXPECT_GE(rep.worst_player, 0);
  ASSERT_EQ(rep.worst_rel_per_player.size(), 2u);
  const ProblemSpec lq = registry_get("lq");
  const GradCheckReport lq_rep = gradcheck_problem(lq.game, lq.test_box, 10, 1);
  EXPECT_TRUE(lq_rep.ok);
}

TEST(GradCheckTest, FlagsABrokenGradient) {
  GameProblem p;
  p.layout = BlockLayout{{1, 1}};
  p.objective = [](int i, const BlockVector& x) { return x[i] * x[i]; };
  p.full_gradient = [](int i, const BlockVector& x) {
    BlockVector g{x.layout()};
    g[i] = 3.0 * x[i];  // deliberately off by a factor of 1.5
    return g;
  };
  const GradCheckReport rep = gradcheck_problem(p, square_box(2.0), 20, 4);
  EXPECT_FALSE(rep.ok);
  EXPECT_NEAR(rep.worst_rel, 0.5, 1e-3);
}

TEST(GradCheckTest, GivesUpWhenNoFiniteSampleExists) {
  GameProblem p;
  p.layout = BlockLayout{{1, 1}};
  p.objective = [](int, const BlockVector&) {
    return std::numeric_limits<double>::infinity();
  };
  p.full_gradient = [](int, const BlockVector& x) { return BlockVector{x.layout()}; };
  EXPECT_THROW(gradcheck_problem(p, square_box(1.0), 1, 1), std::runtime_error);
  const ProblemSpec f1 = registry_get("f1");
  EXPECT_THROW(gradcheck_problem(f1.game, square_box(1.0), 0, 1), std::invalid_argument);
}

}  // namespace
}  // namespace plnash

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plnash/bestresponse.hpp"
#include "plnash/game.hpp"
#include "plnash/solvers.hpp"

namespace plnash {

// Per-block sampling intervals, one [lo, hi] per player block (applied to
// every coordinate of the block).
using SampleBox = std::vector<std::pair<double, double>>;

// Sampled estimates of the game's regularity constants over a box.
struct PLProfile {
  double mu_hat = 0.0;  // min over samples/players of ||g_i||^2 / (2(f_i - f_i*))
  double L_hat = 0.0;   // max gradient difference quotient between samples
  std::optional<double> theta_hat;  // exploratory (theta, nu) power-law fit
  std::optional<double> nu_hat;
  int sample_count = 0;
  BlockVector mu_argmin;  // sample attaining mu_hat
  SampleBox test_box;
};

// Best responses per sample come from the problem's exact map when present,
// otherwise from abr(abr_beta, abr_T). Ratios with denominator <= 1e-12 are
// skipped (the point is at a per-player minimum).
PLProfile estimate_pl(const GameProblem& p, const SampleBox& box, int samples,
                      std::uint64_t seed, double abr_beta = 0.1, int abr_T = 2000);

enum class RateKind { linear, sublinear, stalled, diverged };
std::string to_string(RateKind k);

// Classification of a gap trace: least-squares fit of log(gap) vs iteration
// after a 20% burn-in over the positive entries.
struct RateFit {
  RateKind kind = RateKind::stalled;
  double rate = 0.0;        // fitted per-iteration factor (linear)
  double r2 = 0.0;          // fit quality on log(gap)
  double mean_ratio = 0.0;  // trailing-100 successive-ratio mean
  int window = 0;           // points in the fitted window
  std::string note;
};

// Thresholds: diverged if any entry is non-finite or gap(T) > 1e3 gap(0);
// linear if r^2 >= 0.99 and rate in (0, 0.9999]; sublinear if the gap still
// decreased overall but the trailing mean ratio is >= 0.999; stalled
// otherwise. Traces that hit exact zero in under 10 positive entries are
// reported linear with note "hit zero".
RateFit fit_rate(const std::vector<double>& gaps);

// kappa(x) = A / D from case_quantities. Throws when D <= tol (the ratio is
// undefined at equilibria).
double kappa_ratio(const GameProblem& p, const BlockVector& x, const BestResponseResult& br,
                   double tol = 1e-18);

// Global bounds A <= sqrt(3n) (L/mu) D and B <= 3n (L/mu)^2 D, checked at
// random samples. Margins are (lhs - bound) maxima; negative means satisfied.
struct KappaBoundReport {
  int samples = 0;
  int a_violations = 0;
  int b_violations = 0;
  double worst_a_margin = 0.0;
  double worst_b_margin = 0.0;
  bool ok() const { return a_violations == 0 && b_violations == 0; }
};
KappaBoundReport kappa_global_bound_check(const GameProblem& p, const SampleBox& box, int samples,
                                          std::uint64_t seed, double abr_beta = 0.1,
                                          int abr_T = 2000);

// Fraction of non-equilibrium grid points (D > 1e-18) classified Case 3 by
// the ideal selector, over a uniform grid on a two-scalar-block problem.
struct CaseRegionMeasure {
  double fraction = 0.0;
  long case3_count = 0;
  long non_ne_count = 0;
  double max_case3_gap = 0.0;
};
CaseRegionMeasure case_region_measure(const GameProblem& p, double gamma, double C, int grid_n,
                                      const SampleBox& box);

// Exploratory power-law fit of ||grad(F - G_F)|| against the gap:
// log||grad|| = s log(gap) + b gives theta_hat = 1/s and nu_hat = e^{2b}/2
// (from ||grad h||^theta >= (2 nu)^{theta/2} h at equality). Input pairs are
// (gap, grad_norm); requires >= 20 pairs with both entries positive.
struct ThetaNuFit {
  double theta_hat = 0.0;
  double nu_hat = 0.0;
  double r2 = 0.0;
  int used = 0;
};
ThetaNuFit theta_nu_fit(const std::vector<std::pair<double, double>>& gap_and_gradnorm);
std::vector<std::pair<double, double>> gap_gradnorm_samples(const GameProblem& p,
                                                            const SampleBox& box, int samples,
                                                            std::uint64_t seed,
                                                            double abr_beta = 0.1,
                                                            int abr_T = 2000);

// Exact-expectation contraction checks at a list of states, with the
// theorem step sizes computed from the problem's constants and cfg's
// (gamma, C). The uniform-selection bound uses the per-state ratio
// kappa = A/D; the case bounds use the proof-level 1/n factors. The stated
// (1/n-free) Case-2 factor is tracked separately and reported, not failed.
struct ContractionReport {
  int states_checked = 0;
  int skipped_ne = 0;
  int skipped_kappa = 0;  // states with kappa >= 1 (uniform bound not applicable)
  int case1 = 0;
  int case2 = 0;
  int case3 = 0;
  double worst_rbcd_margin = 0.0;
  double worst_case1_margin = 0.0;
  double worst_case2_stated_margin = 0.0;
  double worst_case2_weak_margin = 0.0;
  double worst_case3_margin = 0.0;
  int stated_case2_violations = 0;
  bool ok = true;  // all proof-level bounds within +1e-10
  std::optional<BlockVector> worst_state;
};
ContractionReport verify_contraction_theorems(const GameProblem& p, const SolverConfig& cfg,
                                              const std::vector<BlockVector>& states);

// Central finite-difference certification of every player's full gradient at
// random samples. Samples with a non-finite objective are redrawn (capped).
struct GradCheckReport {
  int samples = 0;
  double worst_rel = 0.0;
  int worst_player = -1;
  BlockVector worst_x;
  std::vector<double> worst_rel_per_player;  // size n
  double h = 0.0;
  double rel_tol = 0.0;
  bool ok = true;
};
GradCheckReport gradcheck_problem(const GameProblem& p, const SampleBox& box, int samples,
                                  std::uint64_t seed, double h = 1e-5, double rel_tol = 1e-6);

}  // namespace plnash

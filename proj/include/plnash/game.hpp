#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "plnash/blockvec.hpp"

namespace plnash {

enum class Provenance { analytic, estimated, unknown };

// Smoothness / n-sided PL constants of a game. L is the max over players of
// the gradient Lipschitz constants L_i; mu the min over players of the PL
// constants mu_i; L_prime = L + L^2/mu is the smoothness scale of the
// best-response envelope G_F (nL'-smooth).
struct ProblemConstants {
  double L = 0.0;
  double mu = 0.0;
  double L_prime = 0.0;
  Provenance provenance = Provenance::unknown;

  static ProblemConstants analytic(double L, double mu);
  static ProblemConstants estimated(double L, double mu);
  static ProblemConstants none() { return ProblemConstants{}; }

  bool known() const { return provenance != Provenance::unknown; }
};

// An n-player smooth game: objectives f_i, their full gradients, optional
// closed-form best responses, and the constants above. All callables must be
// pure functions of x (deterministic, no hidden state).
struct GameProblem {
  BlockLayout layout;
  // f_i(x)
  std::function<double(int i, const BlockVector& x)> objective;
  // grad f_i(x), all blocks
  std::function<BlockVector(int i, const BlockVector& x)> full_gradient;
  // Optional fast path: block i of grad f_i(x). Falls back to full_gradient.
  std::function<std::vector<double>(int i, const BlockVector& x)> own_gradient;
  ProblemConstants constants;
  // Optional: argmin_{y_i} f_i(y_i, x_{-i}), the minimizer closest to x_i
  // when several exist.
  std::function<std::vector<double>(int i, const BlockVector& x)> exact_best_response;

  int n() const { return layout.n(); }
  bool has_exact_best_response() const { return static_cast<bool>(exact_best_response); }
};

struct MissingBestResponse : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// grad_i f_i(x): the player's own-block gradient.
std::vector<double> partial_grad_own(const GameProblem& p, int i, const BlockVector& x);

// F(x) = sum_i f_i(x).
double sum_F(const GameProblem& p, const BlockVector& x);

// grad_i F_{-i}(x) = sum_{j != i} grad_i f_j(x); the zero vector for n = 1.
std::vector<double> grad_F_minus_i(const GameProblem& p, int i, const BlockVector& x);

// Central finite differences of objective(i, .) at x in every coordinate.
BlockVector finite_diff_gradient(const GameProblem& p, int i, const BlockVector& x, double h);

// max_i ||grad_i f_i(x)||; zero exactly at partial-stationary points.
double stationarity_residual(const GameProblem& p, const BlockVector& x);

// sum_i ||grad_i f_i(x)||^2 together with the residual above, in one pass.
struct StationarityInfo {
  double residual = 0.0;  // max_i ||grad_i f_i||
  double grad_sq = 0.0;   // sum_i ||grad_i f_i||^2
};
StationarityInfo stationarity_info(const GameProblem& p, const BlockVector& x);

}  // namespace plnash

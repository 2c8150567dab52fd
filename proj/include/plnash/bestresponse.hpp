#pragma once

#include <vector>

#include "plnash/game.hpp"

namespace plnash {

enum class BRSource { exact, abr };

// Per-player best responses y_i to x_{-i} plus the induced gradient
// grad G_F(x) = sum_i grad f_i(y_i, x_{-i})  (all blocks of every term).
struct BestResponseResult {
  std::vector<std::vector<double>> responses;  // y_i, one per player
  BlockVector grad_G;
  BRSource source = BRSource::exact;
  int abr_iters = 0;  // T' used (0 when exact)
};

// Approximate best responses: for each player j independently, y_j^0 = x_j and
// y_j^{tau+1} = y_j^tau - beta * grad_j f_j(y_j^tau, x_{-j}), T_prime steps.
BestResponseResult abr(const GameProblem& p, const BlockVector& x, double beta, int T_prime);

// Iteration count T' = ceil( log(n L^2 / (mu^2 delta)) / log(1/(1 - mu beta)) )
// guaranteeing ||grad G_F - grad G~_F||^2 <= delta * sum_i ||grad_i f_i||^2
// for L-smooth mu-PL objectives. Clamped below at 0. Throws if mu*beta >= 1.
int abr_iters_for(double delta, int n, double L, double mu, double beta);

// Stricter variant with delta^2 inside the logarithm (the form used when the
// target accuracy is itself a squared step size). Exposed alongside the
// statement-level formula; callers default to abr_iters_for.
int abr_iters_for_squared(double delta, int n, double L, double mu, double beta);

// Closed-form best responses for all players. Requires the problem to provide
// exact_best_response; grad_G assembled from the same formula as abr.
BestResponseResult exact_best_responses(const GameProblem& p, const BlockVector& x);

// gap(x) = F(x) - sum_i f_i(y_i, x_{-i}). With exact best responses this is
// F - G_F: non-negative, and zero exactly at Nash equilibria.
double gap(const GameProblem& p, const BlockVector& x, const BestResponseResult& br);

}  // namespace plnash

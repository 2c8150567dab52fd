#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plnash/game.hpp"

namespace plnash {

struct UnstableClosedLoop : std::domain_error {
  using std::domain_error::domain_error;
};

// Discrete-time n-player linear-quadratic game: shared state dynamics
// x_{t+1} = (A - sum_i B_i K_i) x_t with per-player linear feedback K_i and
// costs f_i(K) = E_{x0 ~ Sigma0} sum_t x_t^T (Q_i + K_i^T R_i K_i) x_t.
struct LQGameSpec {
  Eigen::MatrixXd A;                // d x d
  std::vector<Eigen::MatrixXd> B;   // d x k_i
  std::vector<Eigen::MatrixXd> Q;   // d x d, positive definite
  std::vector<Eigen::MatrixXd> R;   // k_i x k_i, positive definite
  Eigen::MatrixXd Sigma0;           // d x d initial-state covariance

  int n() const { return static_cast<int>(B.size()); }
  int d() const { return static_cast<int>(A.rows()); }
  int k(int i) const { return static_cast<int>(B[static_cast<std::size_t>(i)].cols()); }
};

// K_i is k_i x d (maps state to player i's input).
using PolicyList = std::vector<Eigen::MatrixXd>;

Eigen::MatrixXd closed_loop(const LQGameSpec& spec, const PolicyList& K);
double spectral_radius(const Eigen::MatrixXd& M);
// Stability margin used everywhere: rho < 1 - 1e-9.
bool is_stable(const Eigen::MatrixXd& A_cl);

// Solves the cost-type Lyapunov equation X = W + A_cl^T X A_cl exactly via
// the vectorized d^2 x d^2 linear system. Throws UnstableClosedLoop.
Eigen::MatrixXd lyapunov_value(const Eigen::MatrixXd& A_cl, const Eigen::MatrixXd& W);

// Same fixed point by iteration X <- W + A_cl^T X A_cl (max-abs tolerance);
// cross-check for the direct solver. Throws on instability/non-convergence.
Eigen::MatrixXd lyapunov_value_fixed_point(const Eigen::MatrixXd& A_cl, const Eigen::MatrixXd& W,
                                           double tol = 1e-12, long max_iter = 100000);

// Solves the covariance equation Sigma = Sigma0 + A_cl Sigma A_cl^T.
Eigen::MatrixXd sigma_K(const Eigen::MatrixXd& A_cl, const Eigen::MatrixXd& Sigma0);

struct LQEval {
  Eigen::MatrixXd A_cl;
  double rho = 0.0;
  bool stable = false;
  std::vector<Eigen::MatrixXd> P;  // per-player value matrices (empty when unstable)
  Eigen::MatrixXd Sigma;           // stationary covariance (empty when unstable)
  std::vector<double> costs;       // tr(P_i Sigma0); +inf when unstable
};

// Full evaluation; never throws — instability is reported, costs become +inf.
LQEval evaluate_policies(const LQGameSpec& spec, const PolicyList& K);

// d f_i / d K_j = 2 ((1{i=j} R_i K_j + B_j^T P_i B_j K_j) - B_j^T P_i A_{-j}) Sigma_K
// with A_{-j} = A - sum_{l != j} B_l K_l. Throws UnstableClosedLoop.
Eigen::MatrixXd lq_cross_gradient(const LQGameSpec& spec, const PolicyList& K, int i, int j);

// (f_i(K), d f_i / d K_i). Throws UnstableClosedLoop.
std::pair<double, Eigen::MatrixXd> lq_cost_and_gradient(const LQGameSpec& spec,
                                                        const PolicyList& K, int i);

// argmin_{K_i} f_i(K_i, K_{-i}): Riccati fixed point for the single-controller
// system (A_{-i}, B_i, Q_i, R_i), P0 = Q_i, iterated to max-abs tol.
Eigen::MatrixXd riccati_best_response(const LQGameSpec& spec, const PolicyList& K, int i,
                                      double tol = 1e-12, long max_iter = 100000);

// Same minimizer by gradient descent on K_i with a halving backtrack that
// only accepts stable, strictly cost-decreasing steps.
Eigen::MatrixXd gd_best_response(const LQGameSpec& spec, const PolicyList& K, int i,
                                 double grad_tol = 1e-11, long max_iter = 200000);

// Random instance: A ~ U(-1,1)^{d x d} rescaled to spectral radius 0.9;
// B_i entries U(0,1)/(n d); Q_i = I + 0.25 M M^T with M ~ U(-1,1)^{d x d};
// R_i = I; Sigma0 = I. One SplitMix64(seed) stream, row-major draw order
// (all of A, then B_1..B_n, then M_1..M_n).
LQGameSpec lq_default_instance(int n, int d, int k, std::uint64_t seed);

// Two stabilizing policy profiles with identical player-1 cost whose midpoint
// destabilizes the loop: policy-space costs are not PL (not even continuous)
// globally, motivating the restriction to stable neighborhoods.
struct LQCounterexample {
  LQGameSpec spec;
  PolicyList K_a;    // (K1, K2)
  PolicyList K_b;    // (K1', K2)
  PolicyList K_mid;  // ((K1+K1')/2, K2)
};
LQCounterexample lq_d2_counterexample();

// Row-major flattening between policies and BlockVector blocks.
PolicyList unflatten_policies(const LQGameSpec& spec, const BlockVector& x);
BlockVector flatten_policies(const LQGameSpec& spec, const PolicyList& K);

// GameProblem adapter. Objectives are +inf at unstable profiles; gradients
// throw UnstableClosedLoop there (solvers are run with step sizes that keep
// iterates stable). exact_best_response is the Riccati map. Constants are
// sampled estimates over the box [-box_halfwidth, box_halfwidth]^dim.
GameProblem lq_as_game(const LQGameSpec& spec, double box_halfwidth);

}  // namespace plnash

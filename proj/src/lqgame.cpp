#include "plnash/lqgame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "plnash/bestresponse.hpp"
#include "plnash/rng.hpp"

namespace plnash {

namespace {

constexpr double kStabilityMargin = 1e-9;

void validate_policies(const LQGameSpec& spec, const PolicyList& K) {
  if (static_cast<int>(K.size()) != spec.n()) {
    throw std::invalid_argument("lq: policy count does not match player count");
  }
  for (int i = 0; i < spec.n(); ++i) {
    const auto& Ki = K[static_cast<std::size_t>(i)];
    if (Ki.rows() != spec.k(i) || Ki.cols() != spec.d()) {
      throw std::invalid_argument("lq: policy K_i has wrong dimensions");
    }
  }
}

// X = W + A_cl^T X A_cl, row-major vectorization idx(r,c) = r*d + c:
// (A^T X A)[r,c] = sum_{p,q} A[p,r] X[p,q] A[q,c].
Eigen::MatrixXd solve_lyap_unchecked(const Eigen::MatrixXd& A_cl, const Eigen::MatrixXd& W) {
  const int d = static_cast<int>(A_cl.rows());
  const int dd = d * d;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(dd, dd);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) M(r * d + c, p * d + q) -= A_cl(p, r) * A_cl(q, c);
  Eigen::VectorXd w(dd);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) w(r * d + c) = W(r, c);
  const Eigen::VectorXd xv = M.partialPivLu().solve(w);
  Eigen::MatrixXd X(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) X(r, c) = xv(r * d + c);
  return X;
}

// Sigma = Sigma0 + A_cl Sigma A_cl^T:
// (A S A^T)[r,c] = sum_{p,q} A[r,p] S[p,q] A[c,q].
Eigen::MatrixXd solve_sigma_unchecked(const Eigen::MatrixXd& A_cl, const Eigen::MatrixXd& S0) {
  const int d = static_cast<int>(A_cl.rows());
  const int dd = d * d;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(dd, dd);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) M(r * d + c, p * d + q) -= A_cl(r, p) * A_cl(c, q);
  Eigen::VectorXd w(dd);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) w(r * d + c) = S0(r, c);
  const Eigen::VectorXd xv = M.partialPivLu().solve(w);
  Eigen::MatrixXd X(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) X(r, c) = xv(r * d + c);
  return X;
}

Eigen::MatrixXd a_minus_except(const LQGameSpec& spec, const PolicyList& K, int j) {
  Eigen::MatrixXd Amj = spec.A;
  for (int l = 0; l < spec.n(); ++l) {
    if (l == j) continue;
    Amj -= spec.B[static_cast<std::size_t>(l)] * K[static_cast<std::size_t>(l)];
  }
  return Amj;
}

Eigen::MatrixXd grad_from_eval(const LQGameSpec& spec, const PolicyList& K, const LQEval& ev,
                               int i, int j) {
  const auto& Pi = ev.P[static_cast<std::size_t>(i)];
  const auto& Bj = spec.B[static_cast<std::size_t>(j)];
  const auto& Kj = K[static_cast<std::size_t>(j)];
  const Eigen::MatrixXd Amj = a_minus_except(spec, K, j);
  Eigen::MatrixXd Rterm = Eigen::MatrixXd::Zero(Kj.rows(), Kj.cols());
  if (i == j) Rterm = spec.R[static_cast<std::size_t>(i)] * Kj;
  return 2.0 * ((Rterm + Bj.transpose() * Pi * Bj * Kj) - Bj.transpose() * Pi * Amj) * ev.Sigma;
}

ProblemConstants estimate_lq_constants(const LQGameSpec& spec, double box_halfwidth,
                                       const GameProblem& p);

}  // namespace

Eigen::MatrixXd closed_loop(const LQGameSpec& spec, const PolicyList& K) {
  validate_policies(spec, K);
  Eigen::MatrixXd Acl = spec.A;
  for (int i = 0; i < spec.n(); ++i) {
    Acl -= spec.B[static_cast<std::size_t>(i)] * K[static_cast<std::size_t>(i)];
  }
  return Acl;
}

double spectral_radius(const Eigen::MatrixXd& M) {
  const Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stable(const Eigen::MatrixXd& A_cl) {
  return spectral_radius(A_cl) < 1.0 - kStabilityMargin;
}

Eigen::MatrixXd lyapunov_value(const Eigen::MatrixXd& A_cl, const Eigen::MatrixXd& W) {
  if (!is_stable(A_cl)) throw UnstableClosedLoop("lyapunov_value: closed loop is not stable");
  return solve_lyap_unchecked(A_cl, W);
}

Eigen::MatrixXd lyapunov_value_fixed_point(const Eigen::MatrixXd& A_cl, const Eigen::MatrixXd& W,
                                           double tol, long max_iter) {
  if (!is_stable(A_cl)) {
    throw UnstableClosedLoop("lyapunov_value_fixed_point: closed loop is not stable");
  }
  Eigen::MatrixXd X = W;
  for (long it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd Xn = W + A_cl.transpose() * X * A_cl;
    if ((Xn - X).cwiseAbs().maxCoeff() <= tol) return Xn;
    X = Xn;
  }
  throw std::runtime_error("lyapunov_value_fixed_point: did not converge");
}

Eigen::MatrixXd sigma_K(const Eigen::MatrixXd& A_cl, const Eigen::MatrixXd& Sigma0) {
  if (!is_stable(A_cl)) throw UnstableClosedLoop("sigma_K: closed loop is not stable");
  return solve_sigma_unchecked(A_cl, Sigma0);
}

LQEval evaluate_policies(const LQGameSpec& spec, const PolicyList& K) {
  validate_policies(spec, K);
  LQEval ev;
  ev.A_cl = closed_loop(spec, K);
  ev.rho = spectral_radius(ev.A_cl);
  ev.stable = ev.rho < 1.0 - kStabilityMargin;
  const int n = spec.n();
  if (!ev.stable) {
    ev.costs.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    return ev;
  }
  ev.P.reserve(static_cast<std::size_t>(n));
  ev.costs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& Ki = K[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd W =
        spec.Q[static_cast<std::size_t>(i)] +
        Ki.transpose() * spec.R[static_cast<std::size_t>(i)] * Ki;
    ev.P.push_back(solve_lyap_unchecked(ev.A_cl, W));
  }
  ev.Sigma = solve_sigma_unchecked(ev.A_cl, spec.Sigma0);
  for (int i = 0; i < n; ++i) {
    ev.costs.push_back((ev.P[static_cast<std::size_t>(i)] * spec.Sigma0).trace());
  }
  return ev;
}

Eigen::MatrixXd lq_cross_gradient(const LQGameSpec& spec, const PolicyList& K, int i, int j) {
  const LQEval ev = evaluate_policies(spec, K);
  if (!ev.stable) throw UnstableClosedLoop("lq_cross_gradient: closed loop is not stable");
  return grad_from_eval(spec, K, ev, i, j);
}

std::pair<double, Eigen::MatrixXd> lq_cost_and_gradient(const LQGameSpec& spec,
                                                        const PolicyList& K, int i) {
  const LQEval ev = evaluate_policies(spec, K);
  if (!ev.stable) throw UnstableClosedLoop("lq_cost_and_gradient: closed loop is not stable");
  return {ev.costs[static_cast<std::size_t>(i)], grad_from_eval(spec, K, ev, i, i)};
}

Eigen::MatrixXd riccati_best_response(const LQGameSpec& spec, const PolicyList& K, int i,
                                      double tol, long max_iter) {
  validate_policies(spec, K);
  const Eigen::MatrixXd Ami = a_minus_except(spec, K, i);
  const auto& B = spec.B[static_cast<std::size_t>(i)];
  const auto& Q = spec.Q[static_cast<std::size_t>(i)];
  const auto& R = spec.R[static_cast<std::size_t>(i)];
  Eigen::MatrixXd P = Q;
  bool converged = false;
  for (long it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd G = R + B.transpose() * P * B;
    const Eigen::MatrixXd gain = G.partialPivLu().solve(B.transpose() * P * Ami);
    const Eigen::MatrixXd Pn = Q + Ami.transpose() * P * Ami - Ami.transpose() * P * B * gain;
    const bool done = (Pn - P).cwiseAbs().maxCoeff() <= tol;
    P = Pn;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) throw std::runtime_error("riccati_best_response: did not converge");
  const Eigen::MatrixXd G = R + B.transpose() * P * B;
  return G.partialPivLu().solve(B.transpose() * P * Ami);
}

Eigen::MatrixXd gd_best_response(const LQGameSpec& spec, const PolicyList& K, int i,
                                 double grad_tol, long max_iter) {
  validate_policies(spec, K);
  PolicyList Kl = K;
  const double initial_step = 0.05;
  for (long it = 0; it < max_iter; ++it) {
    const LQEval ev = evaluate_policies(spec, Kl);
    if (!ev.stable) throw UnstableClosedLoop("gd_best_response: iterate left the stable region");
    const Eigen::MatrixXd g = grad_from_eval(spec, Kl, ev, i, i);
    if (g.cwiseAbs().maxCoeff() <= grad_tol) break;
    const double f0 = ev.costs[static_cast<std::size_t>(i)];
    double step = initial_step;
    while (true) {
      PolicyList Kt = Kl;
      Kt[static_cast<std::size_t>(i)] -= step * g;
      const LQEval evt = evaluate_policies(spec, Kt);
      if (evt.stable && evt.costs[static_cast<std::size_t>(i)] < f0) break;
      step *= 0.5;
      if (step < 1e-18) return Kl[static_cast<std::size_t>(i)];
    }
    Kl[static_cast<std::size_t>(i)] -= step * g;
  }
  return Kl[static_cast<std::size_t>(i)];
}

LQGameSpec lq_default_instance(int n, int d, int k, std::uint64_t seed) {
  if (n < 1 || d < 1 || k < 1) {
    throw std::invalid_argument("lq_default_instance: n, d, k must be positive");
  }
  SplitMix64 rng(seed);
  LQGameSpec spec;
  Eigen::MatrixXd Araw(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) Araw(r, c) = rng.uniform(-1.0, 1.0);
  spec.A = (0.9 / spectral_radius(Araw)) * Araw;
  const double bscale = 1.0 / static_cast<double>(n * d);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd B(d, k);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < k; ++c) B(r, c) = rng.uniform(0.0, 1.0) * bscale;
    spec.B.push_back(std::move(B));
  }
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd M(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) M(r, c) = rng.uniform(-1.0, 1.0);
    spec.Q.push_back(Eigen::MatrixXd::Identity(d, d) + 0.25 * (M * M.transpose()));
  }
  for (int i = 0; i < n; ++i) spec.R.push_back(Eigen::MatrixXd::Identity(k, k));
  spec.Sigma0 = Eigen::MatrixXd::Identity(d, d);
  return spec;
}

LQCounterexample lq_d2_counterexample() {
  const Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(3, 3);
  LQCounterexample cx;
  cx.spec.A = I3;
  cx.spec.B = {I3, I3};
  cx.spec.Q = {I3, I3};
  cx.spec.R = {I3, I3};
  cx.spec.Sigma0 = I3;
  Eigen::MatrixXd K1(3, 3), K1p(3, 3);
  K1 << 0, 0, -10, -1, 0, 0, 0, 0, 0;
  K1p << 0, -10, 0, 0, 0, 0, -1, 0, 0;
  cx.K_a = {K1, I3};
  cx.K_b = {K1p, I3};
  cx.K_mid = {0.5 * (K1 + K1p), I3};
  return cx;
}

PolicyList unflatten_policies(const LQGameSpec& spec, const BlockVector& x) {
  const int n = spec.n();
  const int d = spec.d();
  PolicyList K;
  K.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int ki = spec.k(i);
    const std::span<const double> b = block_view(x, i);
    if (static_cast<int>(b.size()) != ki * d) {
      throw std::invalid_argument("unflatten_policies: block size mismatch");
    }
    Eigen::MatrixXd Ki(ki, d);
    for (int r = 0; r < ki; ++r)
      for (int c = 0; c < d; ++c) Ki(r, c) = b[static_cast<std::size_t>(r * d + c)];
    K.push_back(std::move(Ki));
  }
  return K;
}

BlockVector flatten_policies(const LQGameSpec& spec, const PolicyList& K) {
  validate_policies(spec, K);
  const int n = spec.n();
  const int d = spec.d();
  std::vector<int> dims;
  dims.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dims.push_back(spec.k(i) * d);
  BlockVector x{BlockLayout(dims)};
  for (int i = 0; i < n; ++i) {
    const std::span<double> b = x.block(i);
    const auto& Ki = K[static_cast<std::size_t>(i)];
    for (int r = 0; r < spec.k(i); ++r)
      for (int c = 0; c < d; ++c) b[static_cast<std::size_t>(r * d + c)] = Ki(r, c);
  }
  return x;
}

namespace {

std::vector<double> flatten_matrix(const Eigen::MatrixXd& M) {
  std::vector<double> out(static_cast<std::size_t>(M.rows() * M.cols()));
  for (Eigen::Index r = 0; r < M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.cols(); ++c)
      out[static_cast<std::size_t>(r * M.cols() + c)] = M(r, c);
  return out;
}

ProblemConstants estimate_lq_constants(const LQGameSpec& spec, double box_halfwidth,
                                       const GameProblem& p) {
  // Sampled surrogates for (L, mu) over the stable sampling box: mu_hat is
  // the smallest observed PL ratio ||grad_i f_i||^2 / (2 (f_i - f_i^*)),
  // L_hat the largest gradient difference quotient between consecutive
  // accepted samples.
  const int kSamples = 50;
  const int kMaxAttempts = 2000;
  SplitMix64 rng(13);
  const int dim = p.layout.total_dim();
  const int n = spec.n();
  double mu_hat = std::numeric_limits<double>::infinity();
  double L_hat = 0.0;
  BlockVector prev{p.layout};
  std::vector<BlockVector> prev_grads;
  bool have_prev = false;
  int accepted = 0;
  int attempts = 0;
  while (accepted < kSamples) {
    if (++attempts > kMaxAttempts) {
      throw std::runtime_error("lq_as_game: could not sample enough stable policies");
    }
    BlockVector x{p.layout};
    for (int j = 0; j < dim; ++j) x[j] = rng.uniform(-box_halfwidth, box_halfwidth);
    const PolicyList K = unflatten_policies(spec, x);
    const LQEval ev = evaluate_policies(spec, K);
    if (!ev.stable) continue;
    std::vector<BlockVector> grads;
    grads.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) grads.push_back(p.full_gradient(i, x));
    for (int i = 0; i < n; ++i) {
      const Eigen::MatrixXd gi = grad_from_eval(spec, K, ev, i, i);
      const double gsq = gi.squaredNorm();
      PolicyList Kbr = K;
      Kbr[static_cast<std::size_t>(i)] = riccati_best_response(spec, K, i);
      const LQEval evb = evaluate_policies(spec, Kbr);
      const double denom =
          2.0 * (ev.costs[static_cast<std::size_t>(i)] - evb.costs[static_cast<std::size_t>(i)]);
      if (denom > 1e-12) mu_hat = std::min(mu_hat, gsq / denom);
    }
    if (have_prev) {
      double dx_sq = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double dj = x[j] - prev[j];
        dx_sq += dj * dj;
      }
      const double dx = std::sqrt(dx_sq);
      if (dx > 1e-12) {
        for (int i = 0; i < n; ++i) {
          double dg_sq = 0.0;
          for (int j = 0; j < dim; ++j) {
            const double dj = grads[static_cast<std::size_t>(i)][j] -
                              prev_grads[static_cast<std::size_t>(i)][j];
            dg_sq += dj * dj;
          }
          L_hat = std::max(L_hat, std::sqrt(dg_sq) / dx);
        }
      }
    }
    prev = std::move(x);
    prev_grads = std::move(grads);
    have_prev = true;
    ++accepted;
  }
  if (!std::isfinite(mu_hat) || mu_hat <= 0.0) {
    throw std::runtime_error("lq_as_game: PL-ratio estimation failed");
  }
  return ProblemConstants::estimated(L_hat, std::min(mu_hat, L_hat));
}

}  // namespace

GameProblem lq_as_game(const LQGameSpec& spec, double box_halfwidth) {
  if (!(box_halfwidth > 0.0)) throw std::invalid_argument("lq_as_game: box must be positive");
  auto sp = std::make_shared<const LQGameSpec>(spec);
  GameProblem p;
  std::vector<int> dims;
  for (int i = 0; i < sp->n(); ++i) dims.push_back(sp->k(i) * sp->d());
  p.layout = BlockLayout(dims);
  p.objective = [sp](int i, const BlockVector& x) {
    const LQEval ev = evaluate_policies(*sp, unflatten_policies(*sp, x));
    return ev.costs[static_cast<std::size_t>(i)];
  };
  p.full_gradient = [sp](int i, const BlockVector& x) {
    const PolicyList K = unflatten_policies(*sp, x);
    const LQEval ev = evaluate_policies(*sp, K);
    if (!ev.stable) throw UnstableClosedLoop("lq gradient: closed loop is not stable");
    BlockVector g{x.layout()};
    for (int j = 0; j < sp->n(); ++j) {
      const std::vector<double> flat = flatten_matrix(grad_from_eval(*sp, K, ev, i, j));
      const std::span<double> b = g.block(j);
      std::copy(flat.begin(), flat.end(), b.begin());
    }
    return g;
  };
  p.own_gradient = [sp](int i, const BlockVector& x) {
    const PolicyList K = unflatten_policies(*sp, x);
    const LQEval ev = evaluate_policies(*sp, K);
    if (!ev.stable) throw UnstableClosedLoop("lq gradient: closed loop is not stable");
    return flatten_matrix(grad_from_eval(*sp, K, ev, i, i));
  };
  p.exact_best_response = [sp](int i, const BlockVector& x) {
    const PolicyList K = unflatten_policies(*sp, x);
    return flatten_matrix(riccati_best_response(*sp, K, i));
  };
  p.constants = estimate_lq_constants(*sp, box_halfwidth, p);
  return p;
}

}  // namespace plnash

#include "plnash/bestresponse.hpp"

#include <cmath>
#include <stdexcept>

namespace plnash {

namespace {

// grad_G = sum_i grad f_i(y_i, x_{-i}), accumulated over all blocks.
BlockVector assemble_grad_G(const GameProblem& p, const BlockVector& x,
                            const std::vector<std::vector<double>>& ys) {
  BlockVector grad_G(x.layout());
  BlockVector xi = x;
  for (int i = 0; i < p.n(); ++i) {
    auto bi = xi.block(i);
    for (std::size_t t = 0; t < bi.size(); ++t) bi[t] = ys[static_cast<std::size_t>(i)][t];
    const BlockVector g = p.full_gradient(i, xi);
    for (int j = 0; j < grad_G.size(); ++j) grad_G[j] += g[j];
    // restore block i for the next player
    auto orig = x.block(i);
    for (std::size_t t = 0; t < bi.size(); ++t) bi[t] = orig[t];
  }
  return grad_G;
}

}  // namespace

BestResponseResult abr(const GameProblem& p, const BlockVector& x, double beta, int T_prime) {
  if (!(beta > 0.0)) throw std::invalid_argument("abr: beta must be positive");
  if (T_prime < 0) throw std::invalid_argument("abr: T_prime must be >= 0");

  BestResponseResult out;
  out.source = BRSource::abr;
  out.abr_iters = T_prime;
  out.responses.resize(static_cast<std::size_t>(p.n()));

  BlockVector y = x;
  for (int j = 0; j < p.n(); ++j) {
    // inner gradient descent on f_j(., x_{-j}) starting from x_j
    for (int tau = 0; tau < T_prime; ++tau) {
      const std::vector<double> g = partial_grad_own(p, j, y);
      block_axpy_inplace(y, j, -beta, g);
    }
    auto bj = y.block(j);
    out.responses[static_cast<std::size_t>(j)].assign(bj.begin(), bj.end());
    // restore block j so each player's inner loop sees the original x_{-j}
    auto orig = x.block(j);
    for (std::size_t t = 0; t < bj.size(); ++t) bj[t] = orig[t];
  }

  out.grad_G = assemble_grad_G(p, x, out.responses);
  return out;
}

static int iters_from_log_ratio(double num, double den) {
  if (num <= 0.0) return 0;
  const double t = num / den;
  return static_cast<int>(std::ceil(t - 1e-12));
}

int abr_iters_for(double delta, int n, double L, double mu, double beta) {
  if (!(delta > 0.0)) throw std::invalid_argument("abr_iters_for: delta must be positive");
  if (!(mu > 0.0) || !(L > 0.0) || n < 1) {
    throw std::invalid_argument("abr_iters_for: need L, mu > 0 and n >= 1");
  }
  if (!(mu * beta < 1.0) || !(beta > 0.0)) {
    throw std::invalid_argument("abr_iters_for: need 0 < mu*beta < 1");
  }
  const double num = std::log(static_cast<double>(n) * L * L / (mu * mu * delta));
  const double den = std::log(1.0 / (1.0 - mu * beta));
  return iters_from_log_ratio(num, den);
}

int abr_iters_for_squared(double delta, int n, double L, double mu, double beta) {
  if (!(delta > 0.0)) throw std::invalid_argument("abr_iters_for_squared: delta must be positive");
  if (!(mu > 0.0) || !(L > 0.0) || n < 1) {
    throw std::invalid_argument("abr_iters_for_squared: need L, mu > 0 and n >= 1");
  }
  if (!(mu * beta < 1.0) || !(beta > 0.0)) {
    throw std::invalid_argument("abr_iters_for_squared: need 0 < mu*beta < 1");
  }
  const double num = std::log(static_cast<double>(n) * L * L / (mu * mu * delta * delta));
  const double den = std::log(1.0 / (1.0 - mu * beta));
  return iters_from_log_ratio(num, den);
}

BestResponseResult exact_best_responses(const GameProblem& p, const BlockVector& x) {
  if (!p.has_exact_best_response()) {
    throw MissingBestResponse("exact_best_responses: problem has no closed-form best responses");
  }
  BestResponseResult out;
  out.source = BRSource::exact;
  out.abr_iters = 0;
  out.responses.resize(static_cast<std::size_t>(p.n()));
  for (int i = 0; i < p.n(); ++i) {
    out.responses[static_cast<std::size_t>(i)] = p.exact_best_response(i, x);
  }
  out.grad_G = assemble_grad_G(p, x, out.responses);
  return out;
}

double gap(const GameProblem& p, const BlockVector& x, const BestResponseResult& br) {
  const double F = sum_F(p, x);
  double G = 0.0;
  BlockVector xi = x;
  for (int i = 0; i < p.n(); ++i) {
    auto bi = xi.block(i);
    for (std::size_t t = 0; t < bi.size(); ++t) bi[t] = br.responses[static_cast<std::size_t>(i)][t];
    G += p.objective(i, xi);
    auto orig = x.block(i);
    for (std::size_t t = 0; t < bi.size(); ++t) bi[t] = orig[t];
  }
  return F - G;
}

}  // namespace plnash

#include "plnash/game.hpp"

#include <algorithm>
#include <cmath>

namespace plnash {

static ProblemConstants make_constants(double L, double mu, Provenance prov) {
  if (!(mu > 0.0) || !(L >= mu)) {
    throw std::invalid_argument("ProblemConstants: need L >= mu > 0");
  }
  ProblemConstants c;
  c.L = L;
  c.mu = mu;
  c.L_prime = L + L * L / mu;
  c.provenance = prov;
  return c;
}

ProblemConstants ProblemConstants::analytic(double L, double mu) {
  return make_constants(L, mu, Provenance::analytic);
}

ProblemConstants ProblemConstants::estimated(double L, double mu) {
  return make_constants(L, mu, Provenance::estimated);
}

std::vector<double> partial_grad_own(const GameProblem& p, int i, const BlockVector& x) {
  if (i < 0 || i >= p.n()) {
    throw std::out_of_range("partial_grad_own: player index out of range");
  }
  if (p.own_gradient) {
    return p.own_gradient(i, x);
  }
  BlockVector g = p.full_gradient(i, x);
  auto b = g.block(i);
  return std::vector<double>(b.begin(), b.end());
}

double sum_F(const GameProblem& p, const BlockVector& x) {
  double s = 0.0;
  for (int i = 0; i < p.n(); ++i) s += p.objective(i, x);
  return s;
}

std::vector<double> grad_F_minus_i(const GameProblem& p, int i, const BlockVector& x) {
  if (i < 0 || i >= p.n()) {
    throw std::out_of_range("grad_F_minus_i: player index out of range");
  }
  std::vector<double> out(static_cast<std::size_t>(p.layout.block_dim(i)), 0.0);
  for (int j = 0; j < p.n(); ++j) {
    if (j == i) continue;
    BlockVector g = p.full_gradient(j, x);
    auto b = g.block(i);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += b[t];
  }
  return out;
}

BlockVector finite_diff_gradient(const GameProblem& p, int i, const BlockVector& x, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("finite_diff_gradient: h must be positive");
  }
  BlockVector g(x.layout());
  BlockVector xp = x;
  for (int j = 0; j < x.size(); ++j) {
    const double saved = xp[j];
    xp[j] = saved + h;
    const double fp = p.objective(i, xp);
    xp[j] = saved - h;
    const double fm = p.objective(i, xp);
    xp[j] = saved;
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

StationarityInfo stationarity_info(const GameProblem& p, const BlockVector& x) {
  StationarityInfo info;
  for (int i = 0; i < p.n(); ++i) {
    const std::vector<double> g = partial_grad_own(p, i, x);
    double s = 0.0;
    for (double v : g) s += v * v;
    info.grad_sq += s;
    info.residual = std::max(info.residual, std::sqrt(s));
  }
  return info;
}

double stationarity_residual(const GameProblem& p, const BlockVector& x) {
  return stationarity_info(p, x).residual;
}

}  // namespace plnash

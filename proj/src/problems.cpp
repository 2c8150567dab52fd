#include "plnash/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plnash/lqgame.hpp"
#include "plnash/rng.hpp"

namespace plnash {

namespace {

BlockLayout two_scalar_layout() { return BlockLayout({1, 1}); }

BlockVector make2(double a, double b) {
  return BlockVector{two_scalar_layout(), {a, b}};
}

// exp(-1/u^2), extended by 0 at u = 0: C-infinity flat at the origin, so the
// composite objectives below are smooth but not analytic there.
double e_flat(double u) {
  if (u == 0.0) return 0.0;
  return std::exp(-1.0 / (u * u));
}

double e_flat_d(double u) {
  if (u == 0.0) return 0.0;
  return e_flat(u) * 2.0 / (u * u * u);
}

double f1_val(double x1, double x2) {
  const double a = (x1 - 1.0) * (x2 + 1.0);
  const double b = (x1 + 1.0) * (x2 - 1.0);
  return a * a + b * b;
}
double f1_g1(double x1, double x2) {
  return 2.0 * (x1 - 1.0) * (x2 + 1.0) * (x2 + 1.0) + 2.0 * (x1 + 1.0) * (x2 - 1.0) * (x2 - 1.0);
}
double f1_g2(double x1, double x2) {
  return 2.0 * (x2 + 1.0) * (x1 - 1.0) * (x1 - 1.0) + 2.0 * (x2 - 1.0) * (x1 + 1.0) * (x1 + 1.0);
}
double f1_br(double other) { return 2.0 * other / (other * other + 1.0); }

double f2_val(double x1, double x2) {
  const double d = x2 - 1.0;
  return f1_val(x1, x2) + std::exp(-d * d);
}
double f2_g2(double x1, double x2) {
  const double d = x2 - 1.0;
  return f1_g2(x1, x2) - 2.0 * d * std::exp(-d * d);
}

double f3_val(double x1, double x2) {
  const double s = x1 + x2;
  return s * s + e_flat(x1 - x2);
}
double f3_g1(double x1, double x2) { return 2.0 * (x1 + x2) + e_flat_d(x1 - x2); }
double f3_g2(double x1, double x2) { return 2.0 * (x1 + x2) - e_flat_d(x1 - x2); }

double sad_f1(double x, double y) {
  const double a = x - 1.0;
  const double b = y + 0.1 * std::sin(y);
  return a * a + 4.0 * (x + 0.1 * std::cos(x)) * y + b * b;
}
double sad_f2(double x, double y) {
  const double a = x - 1.0;
  const double b = y - 0.1 * std::sin(y);
  return a * a + 4.0 * (x - 0.1 * std::cos(x)) * y + b * b;
}
double sad_f1_gx(double x, double y) {
  return 2.0 * (x - 1.0) + 4.0 * y * (1.0 - 0.1 * std::sin(x));
}
double sad_f1_gy(double x, double y) {
  return 4.0 * (x + 0.1 * std::cos(x)) +
         2.0 * (y + 0.1 * std::sin(y)) * (1.0 + 0.1 * std::cos(y));
}
double sad_f2_gx(double x, double y) {
  return 2.0 * (x - 1.0) + 4.0 * y * (1.0 + 0.1 * std::sin(x));
}
double sad_f2_gy(double x, double y) {
  return 4.0 * (x - 0.1 * std::cos(x)) +
         2.0 * (y - 0.1 * std::sin(y)) * (1.0 - 0.1 * std::cos(y));
}

using Scalar2Fn = double (*)(double, double);

// Two-player game with scalar blocks from per-player value and gradient
// component functions.
GameProblem two_player_game(Scalar2Fn v1, Scalar2Fn v2, Scalar2Fn g1_1, Scalar2Fn g1_2,
                            Scalar2Fn g2_1, Scalar2Fn g2_2) {
  GameProblem p;
  p.layout = two_scalar_layout();
  p.objective = [v1, v2](int i, const BlockVector& x) {
    return i == 0 ? v1(x[0], x[1]) : v2(x[0], x[1]);
  };
  p.full_gradient = [g1_1, g1_2, g2_1, g2_2](int i, const BlockVector& x) {
    BlockVector g{two_scalar_layout()};
    if (i == 0) {
      g[0] = g1_1(x[0], x[1]);
      g[1] = g1_2(x[0], x[1]);
    } else {
      g[0] = g2_1(x[0], x[1]);
      g[1] = g2_2(x[0], x[1]);
    }
    return g;
  };
  p.own_gradient = [g1_1, g2_2](int i, const BlockVector& x) {
    return std::vector<double>{i == 0 ? g1_1(x[0], x[1]) : g2_2(x[0], x[1])};
  };
  return p;
}

std::vector<std::pair<double, double>> box2(double lo, double hi) {
  return {{lo, hi}, {lo, hi}};
}

// Sampled (L, mu) surrogates for a problem with a supplied per-player exact
// minimizer (used where no analytic constants exist but an oracle best
// response does). Fixed-seed, so registry constants are reproducible.
ProblemConstants estimate_constants_with_oracle(
    const GameProblem& p, const std::vector<std::pair<double, double>>& box,
    const std::function<std::vector<double>(int, const BlockVector&)>& best_response) {
  const int kSamples = 50;
  SplitMix64 rng(13);
  const int n = p.n();
  double mu_hat = std::numeric_limits<double>::infinity();
  double L_hat = 0.0;
  BlockVector prev;
  std::vector<BlockVector> prev_grads;
  bool have_prev = false;
  for (int s = 0; s < kSamples; ++s) {
    BlockVector x{p.layout};
    for (int i = 0; i < n; ++i) {
      const auto [lo, hi] = box[static_cast<std::size_t>(i)];
      const std::span<double> b = x.block(i);
      for (double& v : b) v = rng.uniform(lo, hi);
    }
    std::vector<BlockVector> grads;
    grads.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) grads.push_back(p.full_gradient(i, x));
    for (int i = 0; i < n; ++i) {
      double gsq = 0.0;
      for (const double v : block_view(grads[static_cast<std::size_t>(i)], i)) gsq += v * v;
      const std::vector<double> y = best_response(i, x);
      BlockVector xb = x;
      std::copy(y.begin(), y.end(), xb.block(i).begin());
      const double denom = 2.0 * (p.objective(i, x) - p.objective(i, xb));
      if (denom > 1e-12) mu_hat = std::min(mu_hat, gsq / denom);
    }
    if (have_prev) {
      double dx_sq = 0.0;
      for (int j = 0; j < x.size(); ++j) {
        const double dj = x[j] - prev[j];
        dx_sq += dj * dj;
      }
      const double dx = std::sqrt(dx_sq);
      if (dx > 1e-12) {
        for (int i = 0; i < n; ++i) {
          double dg_sq = 0.0;
          for (int j = 0; j < x.size(); ++j) {
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
  }
  if (!std::isfinite(mu_hat) || mu_hat <= 0.0) {
    throw std::runtime_error("estimate_constants_with_oracle: PL-ratio estimation failed");
  }
  return ProblemConstants::estimated(L_hat, std::min(mu_hat, L_hat));
}

ProblemSpec make_f1() {
  ProblemSpec s;
  s.name = "f1";
  s.game = two_player_game(f1_val, f1_val, f1_g1, f1_g2, f1_g1, f1_g2);
  s.game.constants = ProblemConstants::analytic(60.0, 2.0);
  s.game.exact_best_response = [](int i, const BlockVector& x) {
    return std::vector<double>{f1_br(i == 0 ? x[1] : x[0])};
  };
  s.known_ne = {make2(0.0, 0.0), make2(1.0, 1.0), make2(-1.0, -1.0)};
  s.test_box = box2(-2.0, 2.0);
  s.notes = "two-sided quartic with three isolated equilibria; analytic constants "
            "(L from the corner Hessian, mu = 2)";
  return s;
}

ProblemSpec make_f2() {
  ProblemSpec s;
  s.name = "f2";
  s.game = two_player_game(f2_val, f2_val, f1_g1, f2_g2, f1_g1, f2_g2);
  s.known_ne = {make2(-0.9999609457355728, -1.0088772176347773),
                make2(0.13104940671762455, 0.06580847481896471)};
  s.test_box = box2(-2.0, 2.0);
  s.notes = "f1 plus a Gaussian bump in x2; equilibria are offline Newton fixtures "
            "polished to residual < 1e-12";
  return s;
}

ProblemSpec make_f3() {
  ProblemSpec s;
  s.name = "f3";
  s.game = two_player_game(f3_val, f3_val, f3_g1, f3_g2, f3_g1, f3_g2);
  s.known_ne = {make2(0.0, 0.0)};
  s.test_box = box2(-2.0, 2.0);
  s.notes = "quadratic ridge plus the flat term exp(-1/(x1-x2)^2); smooth but not "
            "PL near the diagonal, so no constants are registered";
  return s;
}

double pair_sum_sq(double a, double b) {
  const double s = a + b;
  return s * s;
}
double pair_sum_g(double a, double b) { return 2.0 * (a + b); }

ProblemSpec make_f4() {
  ProblemSpec s;
  s.name = "f4";
  s.game = two_player_game(pair_sum_sq, pair_sum_sq, pair_sum_g, pair_sum_g, pair_sum_g,
                           pair_sum_g);
  s.game.constants = ProblemConstants::analytic(4.0, 2.0);
  s.game.exact_best_response = [](int i, const BlockVector& x) {
    return std::vector<double>{-(i == 0 ? x[1] : x[0])};
  };
  s.known_ne = {make2(0.0, 0.0), make2(0.7, -0.7)};
  s.ne_membership = [](const BlockVector& x, double tol) {
    return std::abs(x[0] + x[1]) <= tol;
  };
  s.test_box = box2(-2.0, 2.0);
  s.notes = "shared objective (x1+x2)^2; the equilibrium set is the whole line "
            "x1 = -x2";
  return s;
}

double f5_v2(double a, double b) { return pair_sum_sq(a, b); }

ProblemSpec make_f5() {
  ProblemSpec s;
  s.name = "f5";
  s.game = two_player_game(f3_val, f5_v2, f3_g1, f3_g2, pair_sum_g, pair_sum_g);
  s.known_ne = {make2(0.0, 0.0)};
  s.test_box = box2(-2.0, 2.0);
  s.notes = "player 1 carries the flat term of f3, player 2 the plain ridge; no "
            "constants registered";
  return s;
}

double f6_v1(double x1, double x2) { return x1 * x1 + x2 * x2; }
double f6_g1_1(double x1, double) { return 2.0 * x1; }
double f6_g1_2(double, double x2) { return 2.0 * x2; }

ProblemSpec make_f6() {
  ProblemSpec s;
  s.name = "f6";
  s.game = two_player_game(f6_v1, pair_sum_sq, f6_g1_1, f6_g1_2, pair_sum_g, pair_sum_g);
  s.game.constants = ProblemConstants::analytic(4.0, 2.0);
  s.game.exact_best_response = [](int i, const BlockVector& x) {
    return std::vector<double>{i == 0 ? 0.0 : -x[0]};
  };
  s.known_ne = {make2(0.0, 0.0)};
  s.test_box = box2(-2.0, 2.0);
  s.notes = "general-sum pair with unique equilibrium at the origin";
  return s;
}

double res_v1(double xa, double xb) { return xa * xa - 2.0 * xa * xb; }
double res_v2(double xa, double xb) { return xb * xb - 2.0 * xa * xb; }
double res_g1_1(double xa, double xb) { return 2.0 * xa - 2.0 * xb; }
double res_g1_2(double xa, double) { return -2.0 * xa; }
double res_g2_1(double, double xb) { return -2.0 * xb; }
double res_g2_2(double xa, double xb) { return 2.0 * xb - 2.0 * xa; }

ProblemSpec make_resource() {
  ProblemSpec s;
  s.name = "resource";
  s.game = two_player_game(res_v1, res_v2, res_g1_1, res_g1_2, res_g2_1, res_g2_2);
  s.game.constants = ProblemConstants::analytic(1.0 + std::sqrt(5.0), 2.0);
  s.game.exact_best_response = [](int i, const BlockVector& x) {
    return std::vector<double>{i == 0 ? x[1] : x[0]};
  };
  s.known_ne = {make2(0.0, 0.0)};
  s.ne_membership = [](const BlockVector& x, double tol) {
    return std::abs(x[0] - x[1]) <= tol;
  };
  s.test_box = box2(-2.0, 2.0);
  s.notes = "two-user resource split; every diagonal point x_A = x_B is an "
            "equilibrium, (0,0) is the canonical representative";
  return s;
}

ProblemSpec make_saddle() {
  ProblemSpec s;
  s.name = "saddle";
  s.game = two_player_game(sad_f1, sad_f2, sad_f1_gx, sad_f1_gy, sad_f2_gx, sad_f2_gy);
  s.known_ne = {make2(-0.1323173678573192, 0.5587865235739837)};
  s.test_box = box2(-2.0, 2.0);
  s.notes = "trig-perturbed quadratic pair whose pseudo-gradient Jacobian at the "
            "equilibrium is indefinite (strict saddle of the simultaneous-gradient "
            "map); equilibrium is an offline Newton fixture, residual ~2e-16";
  return s;
}

ProblemSpec make_lq() {
  ProblemSpec s;
  s.name = "lq";
  const LQGameSpec spec = lq_default_instance(3, 2, 1, 20240617);
  s.game = lq_as_game(spec, 0.1);
  s.test_box.assign(static_cast<std::size_t>(s.game.n()), {-0.1, 0.1});
  s.notes = "three-player linear-quadratic policy game on a 2-state plant "
            "(spectral radius 0.9); costs are exact Lyapunov solves, best "
            "responses Riccati fixed points; constants are sampled estimates "
            "over the +-0.1 policy box";
  return s;
}

}  // namespace

double cournot_quadratic_best_response(double a, double b, double c_i, double q_minus) {
  // Positive root of 3b q^2 + 4b Q q + (b Q^2 + c - a) = 0, Q = q_minus.
  const double disc = q_minus * q_minus + 3.0 * (a - c_i) / b;
  return (-2.0 * q_minus + std::sqrt(disc)) / 3.0;
}

ProblemSpec build_cournot(int n, DemandCurve demand, double a, double b,
                          std::vector<double> costs) {
  if (n < 1) throw std::invalid_argument("build_cournot: n must be >= 1");
  if (static_cast<int>(costs.size()) != n) {
    throw std::invalid_argument("build_cournot: need one cost per firm");
  }
  if (!(b > 0.0)) throw std::invalid_argument("build_cournot: b must be positive");
  double cmax = -std::numeric_limits<double>::infinity();
  for (const double c : costs) {
    if (!(c > 0.0)) throw std::invalid_argument("build_cournot: costs must be positive");
    cmax = std::max(cmax, c);
  }
  if (!(a > cmax)) throw std::invalid_argument("build_cournot: need a > max cost");

  ProblemSpec s;
  s.name = demand == DemandCurve::linear ? "cournot-linear" : "cournot-quadratic";
  GameProblem& p = s.game;
  p.layout = BlockLayout(std::vector<int>(static_cast<std::size_t>(n), 1));
  const bool linear = demand == DemandCurve::linear;
  auto cost_of = [costs](int i) { return costs[static_cast<std::size_t>(i)]; };
  auto total = [n](const BlockVector& q) {
    double Q = 0.0;
    for (int j = 0; j < n; ++j) Q += q[j];
    return Q;
  };
  // f_i(q) = -(P(Q) - c_i) q_i = b q_i Q - (a - c_i) q_i with Q replaced by
  // Q^2 under quadratic demand.
  p.objective = [linear, a, b, cost_of, total](int i, const BlockVector& q) {
    const double Q = total(q);
    const double shape = linear ? Q : Q * Q;
    return b * q[i] * shape - (a - cost_of(i)) * q[i];
  };
  p.full_gradient = [linear, a, b, cost_of, total, n](int i, const BlockVector& q) {
    const double Q = total(q);
    BlockVector g{q.layout()};
    if (linear) {
      for (int j = 0; j < n; ++j) g[j] = b * q[i];
      g[i] = 2.0 * b * q[i] + b * (Q - q[i]) - (a - cost_of(i));
    } else {
      for (int j = 0; j < n; ++j) g[j] = 2.0 * b * q[i] * Q;
      g[i] = b * Q * Q + 2.0 * b * q[i] * Q - (a - cost_of(i));
    }
    return g;
  };
  p.own_gradient = [linear, a, b, cost_of, total](int i, const BlockVector& q) {
    const double Q = total(q);
    const double g = linear ? 2.0 * b * q[i] + b * (Q - q[i]) - (a - cost_of(i))
                            : b * Q * Q + 2.0 * b * q[i] * Q - (a - cost_of(i));
    return std::vector<double>{g};
  };
  s.test_box.assign(static_cast<std::size_t>(n), {0.1, 5.0});

  const bool symmetric = std::all_of(costs.begin(), costs.end(),
                                     [&](double c) { return c == costs.front(); });
  if (linear) {
    p.constants = ProblemConstants::analytic(b * (1.0 + std::sqrt(static_cast<double>(n))),
                                             2.0 * b);
    p.exact_best_response = [a, b, cost_of, total](int i, const BlockVector& q) {
      const double q_minus = total(q) - q[i];
      return std::vector<double>{(a - cost_of(i) - b * q_minus) / (2.0 * b)};
    };
    if (symmetric) {
      const double qstar = (a - costs.front()) / (b * static_cast<double>(n + 1));
      s.known_ne = {BlockVector{p.layout,
                                std::vector<double>(static_cast<std::size_t>(n), qstar)}};
    }
    s.notes = "linear inverse demand; closed-form best responses and, for "
              "symmetric costs, the equilibrium q* = (a-c)/(b(n+1))";
  } else {
    if (symmetric) {
      // Symmetric first-order condition b Q^2 + 2b q Q = a - c at Q = nq.
      const double qstar =
          std::sqrt((a - costs.front()) / (b * static_cast<double>(n) *
                                           static_cast<double>(n + 2)));
      s.known_ne = {BlockVector{p.layout,
                                std::vector<double>(static_cast<std::size_t>(n), qstar)}};
    }
    p.constants = estimate_constants_with_oracle(
        p, s.test_box, [a, b, cost_of, total](int i, const BlockVector& q) {
          const double q_minus = total(q) - q[i];
          return std::vector<double>{
              cournot_quadratic_best_response(a, b, cost_of(i), q_minus)};
        });
    s.notes = "quadratic inverse demand; no best response is registered on the "
              "problem (approximate responses only), constants are sampled "
              "estimates over the test box";
  }
  return s;
}

ProblemSpec registry_get(const std::string& name) {
  if (name == "f1") return make_f1();
  if (name == "f2") return make_f2();
  if (name == "f3") return make_f3();
  if (name == "f4") return make_f4();
  if (name == "f5") return make_f5();
  if (name == "f6") return make_f6();
  if (name == "saddle") return make_saddle();
  if (name == "cournot-linear") {
    return build_cournot(2, DemandCurve::linear, 10.0, 1.0, {1.0, 1.0});
  }
  if (name == "cournot-quadratic") {
    return build_cournot(2, DemandCurve::quadratic, 10.0, 1.0, {1.0, 1.0});
  }
  if (name == "resource") return make_resource();
  if (name == "lq") return make_lq();
  throw UnknownName("unknown problem: " + name);
}

std::vector<std::string> registry_names() {
  return {"f1", "f2",     "f3",             "f4",
          "f5", "f6",     "saddle",         "cournot-linear",
          "cournot-quadratic", "resource", "lq"};
}

KnownValues known_function_values(const std::string& name, const BlockVector& x) {
  const auto expect_two_scalars = [&x]() {
    if (!(x.layout() == two_scalar_layout())) {
      throw std::invalid_argument("known_function_values: expected two scalar blocks");
    }
  };
  KnownValues kv;
  if (name == "f1") {
    expect_two_scalars();
    const double v = f1_val(x[0], x[1]);
    kv.f = {v, v};
    const double a = x[0] * x[0] - 1.0;
    const double b = x[1] * x[1] - 1.0;
    kv.G_F = 2.0 * b * b / (x[1] * x[1] + 1.0) + 2.0 * a * a / (x[0] * x[0] + 1.0);
    kv.gap = 2.0 * v - *kv.G_F;
    return kv;
  }
  if (name == "f2") {
    expect_two_scalars();
    const double v = f2_val(x[0], x[1]);
    kv.f = {v, v};
    return kv;
  }
  if (name == "f4") {
    expect_two_scalars();
    const double v = pair_sum_sq(x[0], x[1]);
    kv.f = {v, v};
    kv.G_F = 0.0;
    kv.gap = 2.0 * v;
    return kv;
  }
  if (name == "f6") {
    expect_two_scalars();
    kv.f = {f6_v1(x[0], x[1]), pair_sum_sq(x[0], x[1])};
    kv.G_F = x[1] * x[1];
    kv.gap = x[0] * x[0] + pair_sum_sq(x[0], x[1]);
    return kv;
  }
  if (name == "resource") {
    expect_two_scalars();
    kv.f = {res_v1(x[0], x[1]), res_v2(x[0], x[1])};
    kv.G_F = -(x[0] * x[0] + x[1] * x[1]);
    const double d = x[0] - x[1];
    kv.gap = 2.0 * d * d;
    return kv;
  }
  throw UnknownName("known_function_values: no closed form registered for " + name);
}

}  // namespace plnash

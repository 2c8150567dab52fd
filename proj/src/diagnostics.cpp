#include "plnash/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "plnash/rng.hpp"

namespace plnash {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BlockVector sample_point(const BlockLayout& layout, const SampleBox& box, SplitMix64& rng) {
  if (static_cast<int>(box.size()) != layout.n()) {
    throw std::invalid_argument("sample box must have one interval per block");
  }
  BlockVector x(layout);
  for (int i = 0; i < layout.n(); ++i) {
    auto blk = x.block(i);
    for (double& c : blk) c = rng.uniform(box[static_cast<std::size_t>(i)].first,
                                          box[static_cast<std::size_t>(i)].second);
  }
  return x;
}

BestResponseResult br_for(const GameProblem& p, const BlockVector& x, double beta, int T) {
  return p.has_exact_best_response() ? exact_best_responses(p, x) : abr(p, x, beta, T);
}

struct LsqFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  double sxx = 0.0;
};

LsqFit lsq(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t m = xs.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    mx += xs[j];
    my += ys[j];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double dx = xs[j] - mx;
    const double dy = ys[j] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  LsqFit fit;
  fit.sxx = sxx;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (sxx == 0.0 || syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double flat_dist(const BlockVector& a, const BlockVector& b) {
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

std::string to_string(RateKind k) {
  switch (k) {
    case RateKind::linear: return "linear";
    case RateKind::sublinear: return "sublinear";
    case RateKind::stalled: return "stalled";
    case RateKind::diverged: return "diverged";
  }
  return "unknown";
}

PLProfile estimate_pl(const GameProblem& p, const SampleBox& box, int samples,
                      std::uint64_t seed, double abr_beta, int abr_T) {
  if (samples <= 0) throw std::invalid_argument("estimate_pl: samples must be positive");
  PLProfile prof;
  prof.test_box = box;
  prof.sample_count = samples;
  SplitMix64 rng(seed);
  double mu = kInf;
  double L_hat = 0.0;
  BlockVector prev_x;
  std::vector<BlockVector> prev_grads;
  bool has_prev = false;
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(static_cast<std::size_t>(samples));
  const int n = p.n();
  for (int s = 0; s < samples; ++s) {
    const BlockVector x = sample_point(p.layout, box, rng);
    const BestResponseResult br = br_for(p, x, abr_beta, abr_T);
    // PL ratio per player: ||grad_i f_i||^2 / (2 (f_i - f_i*)).
    for (int i = 0; i < n; ++i) {
      const std::vector<double> gi = partial_grad_own(p, i, x);
      double gsq = 0.0;
      for (double v : gi) gsq += v * v;
      BlockVector xb = x;
      {
        auto blk = xb.block(i);
        const auto& yi = br.responses[static_cast<std::size_t>(i)];
        std::copy(yi.begin(), yi.end(), blk.begin());
      }
      const double denom = 2.0 * (p.objective(i, x) - p.objective(i, xb));
      if (denom <= 1e-12) continue;
      const double ratio = gsq / denom;
      if (ratio < mu) {
        mu = ratio;
        prof.mu_argmin = x;
      }
    }
    // Smoothness quotient between consecutive samples, per player.
    std::vector<BlockVector> grads;
    grads.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) grads.push_back(p.full_gradient(i, x));
    if (has_prev) {
      const double dx = flat_dist(x, prev_x);
      if (dx > 1e-12) {
        for (int i = 0; i < n; ++i) {
          const double dg = flat_dist(grads[static_cast<std::size_t>(i)],
                                      prev_grads[static_cast<std::size_t>(i)]);
          L_hat = std::max(L_hat, dg / dx);
        }
      }
    }
    prev_x = x;
    prev_grads = std::move(grads);
    has_prev = true;
    // (gap, ||grad(F - G_F)||) pair for the exploratory power-law fit.
    const double g = gap(p, x, br);
    BlockVector diff(p.layout);
    for (int j = 0; j < diff.size(); ++j) {
      double acc = 0.0;
      for (const BlockVector& gr : prev_grads) acc += gr[j];
      diff[j] = acc - br.grad_G[j];
    }
    double gn = 0.0;
    for (int j = 0; j < diff.size(); ++j) gn += diff[j] * diff[j];
    pairs.emplace_back(g, std::sqrt(gn));
  }
  prof.mu_hat = std::isfinite(mu) ? mu : 0.0;
  prof.L_hat = L_hat;
  try {
    const ThetaNuFit fit = theta_nu_fit(pairs);
    prof.theta_hat = fit.theta_hat;
    prof.nu_hat = fit.nu_hat;
  } catch (const std::exception&) {
    // Too few positive pairs or a degenerate fit: leave the estimates unset.
  }
  return prof;
}

RateFit fit_rate(const std::vector<double>& gaps) {
  if (gaps.empty()) throw std::invalid_argument("fit_rate: empty trace");
  RateFit fit;
  const double g0 = gaps.front();
  const double gT = gaps.back();
  bool finite = true;
  for (double g : gaps) {
    if (!std::isfinite(g)) {
      finite = false;
      break;
    }
  }
  if (!finite || (g0 > 0.0 && gT > 1e3 * g0)) {
    fit.kind = RateKind::diverged;
    fit.note = finite ? "gap grew by more than 1e3" : "non-finite gap";
    return fit;
  }
  std::vector<double> idx;
  std::vector<double> val;
  for (std::size_t t = 0; t < gaps.size(); ++t) {
    if (gaps[t] > 0.0) {
      idx.push_back(static_cast<double>(t));
      val.push_back(gaps[t]);
    }
  }
  if (idx.size() < 10) {
    fit.kind = RateKind::linear;
    fit.rate = 0.0;
    fit.r2 = 1.0;
    fit.window = static_cast<int>(idx.size());
    fit.note = "hit zero";
    return fit;
  }
  const std::size_t start = static_cast<std::size_t>(0.2 * static_cast<double>(idx.size()));
  std::vector<double> xs(idx.begin() + static_cast<std::ptrdiff_t>(start), idx.end());
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (std::size_t j = start; j < val.size(); ++j) ys.push_back(std::log(val[j]));
  const LsqFit ls = lsq(xs, ys);
  fit.rate = std::exp(ls.slope);
  fit.r2 = ls.r2;
  fit.window = static_cast<int>(xs.size());
  const std::size_t tail_n = std::min<std::size_t>(101, val.size());
  double mean_ratio = 0.0;
  if (tail_n >= 2) {
    const std::size_t off = val.size() - tail_n;
    for (std::size_t j = off + 1; j < val.size(); ++j) mean_ratio += val[j] / val[j - 1];
    mean_ratio /= static_cast<double>(tail_n - 1);
  }
  fit.mean_ratio = mean_ratio;
  if (fit.r2 >= 0.99 && fit.rate > 0.0 && fit.rate <= 0.9999) {
    fit.kind = RateKind::linear;
    return fit;
  }
  if (gT < g0 && mean_ratio >= 0.999) {
    fit.kind = RateKind::sublinear;
    return fit;
  }
  fit.kind = RateKind::stalled;
  return fit;
}

double kappa_ratio(const GameProblem& p, const BlockVector& x, const BestResponseResult& br,
                   double tol) {
  const std::array<double, 3> q = case_quantities(p, x, br);
  if (q[2] <= tol) throw std::domain_error("kappa_ratio: D <= tol, ratio undefined at equilibria");
  return q[0] / q[2];
}

KappaBoundReport kappa_global_bound_check(const GameProblem& p, const SampleBox& box, int samples,
                                          std::uint64_t seed, double abr_beta, int abr_T) {
  if (samples <= 0) throw std::invalid_argument("kappa_global_bound_check: samples must be positive");
  if (!p.constants.known() || p.constants.mu <= 0.0) {
    throw std::invalid_argument("kappa_global_bound_check: requires known (L, mu)");
  }
  const double ratio = p.constants.L / p.constants.mu;
  const double n = static_cast<double>(p.n());
  const double ca = std::sqrt(3.0 * n) * ratio;
  const double cb = 3.0 * n * ratio * ratio;
  KappaBoundReport rep;
  rep.samples = samples;
  rep.worst_a_margin = -kInf;
  rep.worst_b_margin = -kInf;
  SplitMix64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const BlockVector x = sample_point(p.layout, box, rng);
    const BestResponseResult br = br_for(p, x, abr_beta, abr_T);
    const std::array<double, 3> q = case_quantities(p, x, br);
    const double ma = q[0] - ca * q[2];
    const double mb = q[1] - cb * q[2];
    rep.worst_a_margin = std::max(rep.worst_a_margin, ma);
    rep.worst_b_margin = std::max(rep.worst_b_margin, mb);
    if (ma > 1e-10) ++rep.a_violations;
    if (mb > 1e-10) ++rep.b_violations;
  }
  return rep;
}

CaseRegionMeasure case_region_measure(const GameProblem& p, double gamma, double C, int grid_n,
                                      const SampleBox& box) {
  if (p.n() != 2 || p.layout.block_dim(0) != 1 || p.layout.block_dim(1) != 1) {
    throw std::invalid_argument("case_region_measure: requires two scalar blocks");
  }
  if (box.size() != 2) throw std::invalid_argument("case_region_measure: box must have 2 intervals");
  CaseRegionMeasure out;
  if (grid_n <= 0) return out;
  const auto coord = [&](int axis, int i) {
    const double lo = box[static_cast<std::size_t>(axis)].first;
    const double hi = box[static_cast<std::size_t>(axis)].second;
    if (grid_n == 1) return 0.5 * (lo + hi);
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_n - 1);
  };
  BlockVector x(p.layout);
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      x[0] = coord(0, i);
      x[1] = coord(1, j);
      const BestResponseResult br = exact_best_responses(p, x);
      const std::array<double, 3> q = case_quantities(p, x, br);
      if (q[2] <= 1e-18) continue;  // at (or numerically at) an equilibrium
      ++out.non_ne_count;
      const CaseDecision dec = select_case(q[0], q[1], q[2], gamma, C, SelectVariant::ideal);
      if (dec.tag == CaseTag::Case3) {
        ++out.case3_count;
        out.max_case3_gap = std::max(out.max_case3_gap, gap(p, x, br));
      }
    }
  }
  if (out.non_ne_count > 0) {
    out.fraction = static_cast<double>(out.case3_count) / static_cast<double>(out.non_ne_count);
  }
  return out;
}

ThetaNuFit theta_nu_fit(const std::vector<std::pair<double, double>>& gap_and_gradnorm) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [g, gn] : gap_and_gradnorm) {
    if (g > 0.0 && gn > 0.0 && std::isfinite(g) && std::isfinite(gn)) {
      xs.push_back(std::log(g));
      ys.push_back(std::log(gn));
    }
  }
  if (xs.size() < 20) {
    throw std::invalid_argument("theta_nu_fit: need at least 20 positive (gap, gradient) pairs");
  }
  const LsqFit ls = lsq(xs, ys);
  if (ls.sxx == 0.0 || ls.slope == 0.0) {
    throw std::domain_error("theta_nu_fit: degenerate samples (zero slope)");
  }
  ThetaNuFit fit;
  fit.theta_hat = 1.0 / ls.slope;
  fit.nu_hat = std::exp(2.0 * ls.intercept) / 2.0;
  fit.r2 = ls.r2;
  fit.used = static_cast<int>(xs.size());
  return fit;
}

std::vector<std::pair<double, double>> gap_gradnorm_samples(const GameProblem& p,
                                                            const SampleBox& box, int samples,
                                                            std::uint64_t seed, double abr_beta,
                                                            int abr_T) {
  if (samples <= 0) throw std::invalid_argument("gap_gradnorm_samples: samples must be positive");
  SplitMix64 rng(seed);
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(static_cast<std::size_t>(samples));
  const int n = p.n();
  for (int s = 0; s < samples; ++s) {
    const BlockVector x = sample_point(p.layout, box, rng);
    const BestResponseResult br = br_for(p, x, abr_beta, abr_T);
    const double g = gap(p, x, br);
    BlockVector acc(p.layout);
    for (int i = 0; i < n; ++i) {
      const BlockVector gi = p.full_gradient(i, x);
      for (int j = 0; j < acc.size(); ++j) acc[j] += gi[j];
    }
    double gn = 0.0;
    for (int j = 0; j < acc.size(); ++j) {
      const double d = acc[j] - br.grad_G[j];
      gn += d * d;
    }
    pairs.emplace_back(g, std::sqrt(gn));
  }
  return pairs;
}

ContractionReport verify_contraction_theorems(const GameProblem& p, const SolverConfig& cfg,
                                              const std::vector<BlockVector>& states) {
  if (!p.constants.known()) {
    throw std::invalid_argument("verify_contraction_theorems: requires known constants");
  }
  if (!p.has_exact_best_response()) {
    throw MissingBestResponse("verify_contraction_theorems: requires exact best responses");
  }
  constexpr double kSlack = 1e-10;
  const int n = p.n();
  const double mu = p.constants.mu;
  const StepSizes ss = theorem_step_sizes(p.constants, n, cfg.gamma, cfg.C);
  ContractionReport rep;
  rep.worst_rbcd_margin = -kInf;
  rep.worst_case1_margin = -kInf;
  rep.worst_case2_stated_margin = -kInf;
  rep.worst_case2_weak_margin = -kInf;
  rep.worst_case3_margin = -kInf;
  double worst_overall = -kInf;
  const auto track = [&](double& worst, double margin, const BlockVector& x) {
    worst = std::max(worst, margin);
    if (margin > worst_overall) {
      worst_overall = margin;
      rep.worst_state = x;
    }
    if (margin > kSlack) rep.ok = false;
  };
  for (const BlockVector& x : states) {
    const BestResponseResult br = exact_best_responses(p, x);
    const double g0 = gap(p, x, br);
    const std::array<double, 3> q = case_quantities(p, x, br);
    if (q[2] <= 1e-18 || g0 <= 1e-18) {
      ++rep.skipped_ne;
      continue;
    }
    ++rep.states_checked;
    // Uniform-selection contraction at the kappa-dependent step size:
    // E[gap+] <= (1 - (1 - kappa) mu alpha / (2n)) gap  with
    // alpha = (1 - kappa) / (n (L + L')).
    const double kappa = q[0] / q[2];
    if (kappa < 1.0) {
      const StepSizes sk = theorem_step_sizes(p.constants, n, cfg.gamma, cfg.C, kappa);
      const double ar = sk.kappa_alpha.value();
      if (ar > 0.0) {
        SolverConfig c2 = cfg;
        c2.alpha = ar;
        const double e = expected_one_step(p, x, c2, Variant::rbcd);
        const double factor = 1.0 - (1.0 - kappa) * mu * ar / (2.0 * static_cast<double>(n));
        track(rep.worst_rbcd_margin, e - factor * g0, x);
      }
    } else {
      ++rep.skipped_kappa;
    }
    // Case-dependent contraction at the per-case theorem step sizes.
    const CaseDecision dec = select_case(q[0], q[1], q[2], cfg.gamma, cfg.C, SelectVariant::ideal);
    SolverConfig c3 = cfg;
    switch (dec.tag) {
      case CaseTag::Case1: {
        ++rep.case1;
        c3.alpha = ss.case1_alpha;
        const double e = expected_one_step(p, x, c3, Variant::ia_rbcd);
        const double factor =
            1.0 - mu * ss.case1_alpha * (1.0 - cfg.gamma) / (2.0 * static_cast<double>(n));
        track(rep.worst_case1_margin, e - factor * g0, x);
        break;
      }
      case CaseTag::Case2: {
        ++rep.case2;
        c3.alpha = ss.case2_alpha;
        const double e = expected_one_step(p, x, c3, Variant::ia_rbcd);
        const double smooth = p.constants.L + p.constants.L_prime;
        const double stated = 1.0 - smooth * mu * ss.case2_alpha * ss.case2_alpha / 2.0;
        const double weak = 1.0 - smooth * mu * ss.case2_alpha * ss.case2_alpha / 4.0;
        const double stated_margin = e - stated * g0;
        rep.worst_case2_stated_margin = std::max(rep.worst_case2_stated_margin, stated_margin);
        if (stated_margin > kSlack) ++rep.stated_case2_violations;
        track(rep.worst_case2_weak_margin, e - weak * g0, x);
        break;
      }
      case CaseTag::Case3: {
        ++rep.case3;
        c3.alpha = ss.case3_alpha;
        const double e = expected_one_step(p, x, c3, Variant::ia_rbcd);
        track(rep.worst_case3_margin, e - g0, x);
        break;
      }
      case CaseTag::Converged:
        break;  // unreachable: D > 1e-18 above
    }
  }
  return rep;
}

GradCheckReport gradcheck_problem(const GameProblem& p, const SampleBox& box, int samples,
                                  std::uint64_t seed, double h, double rel_tol) {
  if (samples <= 0) throw std::invalid_argument("gradcheck_problem: samples must be positive");
  GradCheckReport rep;
  rep.samples = samples;
  rep.h = h;
  rep.rel_tol = rel_tol;
  SplitMix64 rng(seed);
  const int n = p.n();
  rep.worst_rel_per_player.assign(static_cast<std::size_t>(n), 0.0);
  for (int s = 0; s < samples; ++s) {
    BlockVector x;
    bool found = false;
    for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
      x = sample_point(p.layout, box, rng);
      found = true;
      for (int i = 0; i < n && found; ++i) {
        if (!std::isfinite(p.objective(i, x))) found = false;
      }
    }
    if (!found) {
      throw std::runtime_error("gradcheck_problem: could not sample a point with finite objectives");
    }
    for (int i = 0; i < n; ++i) {
      const BlockVector a = p.full_gradient(i, x);
      const BlockVector fd = finite_diff_gradient(p, i, x, h);
      double num = 0.0;
      double den = 0.0;
      for (int j = 0; j < a.size(); ++j) {
        num = std::max(num, std::abs(a[j] - fd[j]));
        den = std::max(den, std::abs(fd[j]));
      }
      const double rel = num / std::max(den, 1e-12);
      auto& per = rep.worst_rel_per_player[static_cast<std::size_t>(i)];
      per = std::max(per, rel);
      if (rel > rep.worst_rel) {
        rep.worst_rel = rel;
        rep.worst_player = i;
        rep.worst_x = x;
      }
    }
  }
  rep.ok = rep.worst_rel <= rel_tol;
  return rep;
}

}  // namespace plnash

#include "plnash/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "plnash/rng.hpp"

namespace plnash {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::rbcd: return "rbcd";
    case Variant::cyclic: return "cyclic";
    case Variant::ia_rbcd: return "ia-rbcd";
    case Variant::a_rbcd: return "a-rbcd";
    case Variant::bm2: return "bm2";
  }
  return "?";
}

std::optional<Variant> variant_from_string(const std::string& s) {
  if (s == "rbcd") return Variant::rbcd;
  if (s == "cyclic") return Variant::cyclic;
  if (s == "ia-rbcd" || s == "ia_rbcd") return Variant::ia_rbcd;
  if (s == "a-rbcd" || s == "a_rbcd") return Variant::a_rbcd;
  if (s == "bm2") return Variant::bm2;
  return std::nullopt;
}

std::vector<std::string> variant_names() {
  return {"rbcd", "cyclic", "ia-rbcd", "a-rbcd", "bm2"};
}

std::string to_string(CaseTag t) {
  switch (t) {
    case CaseTag::Case1: return "case1";
    case CaseTag::Case2: return "case2";
    case CaseTag::Case3: return "case3";
    case CaseTag::Converged: return "converged";
  }
  return "?";
}

namespace {

void validate_common(const SolverConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw std::invalid_argument("solver: cfg.alpha must be positive");
  if (cfg.T < 0) throw std::invalid_argument("solver: cfg.T must be nonnegative");
  if (!(cfg.tol >= 0.0)) throw std::invalid_argument("solver: cfg.tol must be nonnegative");
}

// Gap for trace rows: exact best responses when available, otherwise the
// solver's own ABR settings. With T_prime = 0 the ABR gap is identically 0
// (degenerate-accuracy mode; grad_sq remains informative).
double logged_gap(const GameProblem& p, const BlockVector& x, const SolverConfig& cfg) {
  if (p.has_exact_best_response()) return gap(p, x, exact_best_responses(p, x));
  return gap(p, x, abr(p, x, cfg.beta, cfg.T_prime));
}

// Per-block pieces of the adaptive direction plus the scalars A, B, D and the
// stationarity residual, all in one pass over the players.
struct CaseWork {
  std::vector<std::vector<double>> g;  // grad_i f_i(x)
  std::vector<std::vector<double>> e;  // grad_i (G - F_{-i})(x)
  double A = 0.0;
  double B = 0.0;
  double D = 0.0;
  double residual = 0.0;  // max_i ||g_i||
};

CaseWork case_work(const GameProblem& p, const BlockVector& x, const BestResponseResult& br) {
  const int n = p.n();
  CaseWork w;
  w.g.resize(static_cast<std::size_t>(n));
  w.e.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& gi = w.g[static_cast<std::size_t>(i)];
    auto& ei = w.e[static_cast<std::size_t>(i)];
    gi = partial_grad_own(p, i, x);
    const std::vector<double> fm = grad_F_minus_i(p, i, x);
    const std::span<const double> gG = block_view(br.grad_G, i);
    const std::size_t d = gi.size();
    ei.resize(d);
    double dot = 0.0, esq = 0.0, gsq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      ei[j] = gG[j] - fm[j];
      dot += ei[j] * gi[j];
      esq += ei[j] * ei[j];
      gsq += gi[j] * gi[j];
    }
    w.A += dot;
    w.B += esq;
    w.D += gsq;
    w.residual = std::max(w.residual, std::sqrt(gsq));
  }
  return w;
}

IterationRecord nan_record(long t, int incoming) {
  IterationRecord rec;
  rec.iter = t;
  rec.chosen_block = incoming;
  rec.gap = std::numeric_limits<double>::quiet_NaN();
  rec.grad_sq = std::numeric_limits<double>::quiet_NaN();
  return rec;
}

void emit(SolveResult& out, const StateObserver& observer, IterationRecord rec,
          const BlockVector& x) {
  if (observer) observer(rec, x);
  out.trace.push_back(std::move(rec));
}

enum class AdaptiveMode { ia, a, bm2 };

SolveResult run_adaptive(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                         AdaptiveMode mode, const StateObserver& observer) {
  validate_common(cfg);
  const int n = p.n();
  const bool exact_available = p.has_exact_best_response();
  if (mode == AdaptiveMode::ia && !exact_available) {
    throw MissingBestResponse("ia-rbcd requires a problem with exact best responses");
  }
  SplitMix64 rng(cfg.seed);
  SolveResult out;
  BlockVector x = x0;
  long t = 0;
  int incoming = 0;  // 1-based block of the transition into the current state
  while (true) {
    if (!x.all_finite()) {
      emit(out, observer, nan_record(t, incoming), x);
      break;
    }
    const BestResponseResult br = (mode == AdaptiveMode::ia)
                                      ? exact_best_responses(p, x)
                                      : abr(p, x, cfg.beta, cfg.T_prime);
    IterationRecord rec;
    rec.iter = t;
    rec.chosen_block = incoming;
    if (mode != AdaptiveMode::ia && exact_available) {
      rec.gap = gap(p, x, exact_best_responses(p, x));
      rec.gap_abr = gap(p, x, br);
    } else {
      rec.gap = gap(p, x, br);
    }
    const CaseWork w = case_work(p, x, br);
    rec.grad_sq = w.D;
    CaseDecision dec;
    if (mode == AdaptiveMode::bm2) {
      dec.A = w.A;
      dec.B = w.B;
      dec.D = w.D;
      dec.tag = CaseTag::Case3;
      dec.k = -1.0;
    } else {
      dec = select_case(w.A, w.B, w.D, cfg.gamma, cfg.C,
                        mode == AdaptiveMode::ia ? SelectVariant::ideal : SelectVariant::practical);
    }
    rec.tag = dec.tag;
    rec.k = dec.k;
    emit(out, observer, std::move(rec), x);
    if (w.residual <= cfg.tol) break;
    if (t == cfg.T) break;
    const int i = rng.block_index(n);
    const auto& gi = w.g[static_cast<std::size_t>(i)];
    const auto& ei = w.e[static_cast<std::size_t>(i)];
    std::vector<double> dir(gi.size());
    for (std::size_t j = 0; j < dir.size(); ++j) dir[j] = gi[j] + dec.k * ei[j];
    block_axpy_inplace(x, i, -cfg.alpha, dir);
    incoming = i + 1;
    ++t;
  }
  out.final_x = std::move(x);
  return out;
}

}  // namespace

SolveResult run_rbcd(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                     const StateObserver& observer) {
  validate_common(cfg);
  const int n = p.n();
  SplitMix64 rng(cfg.seed);
  SolveResult out;
  BlockVector x = x0;
  long t = 0;
  int incoming = 0;
  while (true) {
    IterationRecord rec;
    rec.iter = t;
    rec.chosen_block = incoming;
    const StationarityInfo st = stationarity_info(p, x);
    rec.gap = logged_gap(p, x, cfg);
    rec.grad_sq = st.grad_sq;
    emit(out, observer, std::move(rec), x);
    if (st.residual <= cfg.tol) break;
    if (!x.all_finite()) break;
    if (t == cfg.T) break;
    const int i = rng.block_index(n);
    const std::vector<double> g = partial_grad_own(p, i, x);
    block_axpy_inplace(x, i, -cfg.alpha, g);
    incoming = i + 1;
    ++t;
  }
  out.final_x = std::move(x);
  return out;
}

SolveResult run_cyclic_bcd(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                           const StateObserver& observer) {
  validate_common(cfg);
  const int n = p.n();
  SolveResult out;
  BlockVector x = x0;
  long t = 0;  // counts completed sweeps
  while (true) {
    IterationRecord rec;
    rec.iter = t;
    rec.chosen_block = 0;  // full-sweep records carry no single block
    const StationarityInfo st = stationarity_info(p, x);
    rec.gap = logged_gap(p, x, cfg);
    rec.grad_sq = st.grad_sq;
    emit(out, observer, std::move(rec), x);
    if (st.residual <= cfg.tol) break;
    if (!x.all_finite()) break;
    if (t == cfg.T) break;
    for (int i = 0; i < n; ++i) {
      const std::vector<double> g = partial_grad_own(p, i, x);
      block_axpy_inplace(x, i, -cfg.alpha, g);
    }
    ++t;
  }
  out.final_x = std::move(x);
  return out;
}

std::array<double, 3> case_quantities(const GameProblem& p, const BlockVector& x,
                                      const BestResponseResult& br) {
  const CaseWork w = case_work(p, x, br);
  return {w.A, w.B, w.D};
}

CaseDecision select_case(double A, double B, double D, double gamma, double C,
                         SelectVariant variant, double tol) {
  if (gamma < 0.0 || gamma >= 1.0) {
    throw std::invalid_argument("select_case: gamma must lie in [0, 1)");
  }
  if (!(C > 0.0)) throw std::invalid_argument("select_case: C must be positive");
  if (tol < 0.0) throw std::invalid_argument("select_case: tol must be nonnegative");
  CaseDecision d;
  d.A = A;
  d.B = B;
  d.D = D;
  if (D <= tol) {
    d.tag = CaseTag::Converged;
    d.k = 0.0;
    return d;
  }
  if (A <= gamma * D) {
    d.tag = CaseTag::Case1;
    d.k = 0.0;
    return d;
  }
  if (B <= tol) {
    // A > gamma*D > 0 forces B > 0 in exact arithmetic; numerically a
    // vanishing B makes the Case-2 ratio meaningless, and the plain
    // gradient step still descends.
    d.tag = CaseTag::Case1;
    d.k = 0.0;
    return d;
  }
  const double threshold = (variant == SelectVariant::practical ? 2.0 * C : C) * A * A;
  const double bma = B - A;
  if (bma * bma >= threshold) {
    d.tag = CaseTag::Case2;
    d.k = -2.0 + A / B;
    return d;
  }
  d.tag = CaseTag::Case3;
  d.k = -1.0;
  return d;
}

SolveResult run_ia_rbcd(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                        const StateObserver& observer) {
  return run_adaptive(p, x0, cfg, AdaptiveMode::ia, observer);
}

SolveResult run_a_rbcd(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                       const StateObserver& observer) {
  return run_adaptive(p, x0, cfg, AdaptiveMode::a, observer);
}

SolveResult run_bm2(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                    const StateObserver& observer) {
  return run_adaptive(p, x0, cfg, AdaptiveMode::bm2, observer);
}

SolveResult run_variant(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                        const StateObserver& observer) {
  switch (cfg.variant) {
    case Variant::rbcd: return run_rbcd(p, x0, cfg, observer);
    case Variant::cyclic: return run_cyclic_bcd(p, x0, cfg, observer);
    case Variant::ia_rbcd: return run_ia_rbcd(p, x0, cfg, observer);
    case Variant::a_rbcd: return run_a_rbcd(p, x0, cfg, observer);
    case Variant::bm2: return run_bm2(p, x0, cfg, observer);
  }
  throw std::invalid_argument("run_variant: unknown variant");
}

StepSizes theorem_step_sizes(const ProblemConstants& consts, int n, double gamma, double C,
                             std::optional<double> kappa) {
  if (!consts.known()) {
    throw std::invalid_argument("theorem_step_sizes: problem constants are unknown");
  }
  if (n < 1) throw std::invalid_argument("theorem_step_sizes: n must be >= 1");
  if (gamma < 0.0 || gamma >= 1.0) {
    throw std::invalid_argument("theorem_step_sizes: gamma must lie in [0, 1)");
  }
  if (!(C > 0.0)) throw std::invalid_argument("theorem_step_sizes: C must be positive");
  const double S = static_cast<double>(n) * (consts.L + consts.L_prime);
  StepSizes s;
  s.case1_alpha = (1.0 - gamma) / S;
  s.case2_alpha = std::min(1.0, C) / (2.0 * S);
  s.case3_alpha = 1.0 / S;
  s.recommended_alpha = std::min({s.case1_alpha, s.case2_alpha, s.case3_alpha});
  if (kappa) {
    if (*kappa > 1.0) throw std::invalid_argument("theorem_step_sizes: kappa must be <= 1");
    s.kappa_alpha = (1.0 - *kappa) / S;
    s.recommended_alpha = std::min(s.recommended_alpha, *s.kappa_alpha);
  }
  s.beta = 1.0 / consts.L;
  return s;
}

double expected_one_step(const GameProblem& p, const BlockVector& x, const SolverConfig& cfg,
                         Variant variant) {
  if (!(cfg.alpha > 0.0)) throw std::invalid_argument("expected_one_step: alpha must be positive");
  const int n = p.n();
  if (variant == Variant::cyclic) {
    BlockVector y = x;
    for (int i = 0; i < n; ++i) {
      const std::vector<double> g = partial_grad_own(p, i, y);
      block_axpy_inplace(y, i, -cfg.alpha, g);
    }
    return gap(p, y, exact_best_responses(p, y));
  }
  // Common decision at x for the randomized variants. k is shared across the
  // block enumeration (the case is a function of the state, not the block).
  double k = 0.0;
  CaseWork w;
  if (variant == Variant::rbcd) {
    w = case_work(p, x, exact_best_responses(p, x));  // k stays 0
  } else {
    const BestResponseResult br = exact_best_responses(p, x);
    w = case_work(p, x, br);
    if (variant == Variant::bm2) {
      k = -1.0;
    } else {
      const SelectVariant sel =
          variant == Variant::ia_rbcd ? SelectVariant::ideal : SelectVariant::practical;
      k = select_case(w.A, w.B, w.D, cfg.gamma, cfg.C, sel).k;
    }
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& gi = w.g[static_cast<std::size_t>(i)];
    const auto& ei = w.e[static_cast<std::size_t>(i)];
    std::vector<double> dir(gi.size());
    for (std::size_t j = 0; j < dir.size(); ++j) dir[j] = gi[j] + k * ei[j];
    const BlockVector y = block_axpy(x, i, -cfg.alpha, dir);
    total += gap(p, y, exact_best_responses(p, y));
  }
  return total / static_cast<double>(n);
}

}  // namespace plnash

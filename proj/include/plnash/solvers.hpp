#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plnash/bestresponse.hpp"
#include "plnash/game.hpp"

namespace plnash {

enum class Variant { rbcd, cyclic, ia_rbcd, a_rbcd, bm2 };

std::string to_string(Variant v);
std::optional<Variant> variant_from_string(const std::string& s);
std::vector<std::string> variant_names();

enum class CaseTag { Case1, Case2, Case3, Converged };
std::string to_string(CaseTag t);

enum class SelectVariant { ideal, practical };

struct SolverConfig {
  double alpha = 0.0;     // outer step size (required > 0 to run)
  double beta = 0.1;      // ABR inner step size
  double gamma = 0.5;     // Case-1 threshold, in [0, 1)
  double C = 1.0;         // Case-2 threshold, > 0
  long T = 1000;          // outer iteration budget (>= 0)
  int T_prime = 0;        // ABR inner iterations
  std::uint64_t seed = 1;
  Variant variant = Variant::rbcd;
  double tol = 1e-9;      // stationarity-residual stopping tolerance

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

// Adaptive-direction decision at one state. Tags fix k: Case1 -> 0,
// Case2 -> -2 + A/B, Case3 -> -1, Converged -> 0 (no update meaningful).
struct CaseDecision {
  double A = 0.0;
  double B = 0.0;
  double D = 0.0;
  CaseTag tag = CaseTag::Converged;
  double k = 0.0;
};

// One trace row. Row t describes the state x^t; chosen_block is the 1-based
// block updated by the transition INTO x^t (0 for the initial record and for
// cyclic full-sweep records). gap is measured with exact best responses when
// the problem has them, otherwise with the solver's ABR settings; gap_abr
// carries the ABR-measured gap when both are available and they differ.
struct IterationRecord {
  long iter = 0;
  int chosen_block = 0;
  std::optional<CaseTag> tag;
  std::optional<double> k;
  double gap = 0.0;
  double grad_sq = 0.0;  // sum_i ||grad_i f_i(x^t)||^2
  std::optional<double> gap_abr;
};

struct SolveResult {
  std::vector<IterationRecord> trace;
  BlockVector final_x;
};

// Called once per trace record with the record and the state it describes.
using StateObserver = std::function<void(const IterationRecord&, const BlockVector&)>;

// Uniform-random block selection, plain partial-gradient update
// x_i <- x_i - alpha * grad_i f_i(x).
SolveResult run_rbcd(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                     const StateObserver& observer = {});

// Deterministic sweeps 1..n using the freshest blocks; one record per sweep.
SolveResult run_cyclic_bcd(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                           const StateObserver& observer = {});

// A = sum_i <grad_i(G - F_{-i}), grad_i f_i>, B = sum_i ||grad_i(G - F_{-i})||^2,
// D = sum_i ||grad_i f_i||^2, with grad G taken from br (exact or ABR).
std::array<double, 3> case_quantities(const GameProblem& p, const BlockVector& x,
                                      const BestResponseResult& br);

// Three-case rule: D <= tol -> Converged; A <= gamma*D -> Case1;
// B <= tol -> Case1 (guards the A/B division; with all the directional terms
// ~0 the Case-2 branch is meaningless and Case 1 preserves descent);
// (B-A)^2 >= C*A^2 (ideal) or >= 2C*A^2 (practical) -> Case2; else Case3.
CaseDecision select_case(double A, double B, double D, double gamma, double C,
                         SelectVariant variant, double tol = 1e-18);

// Adaptive solvers. Update at the chosen block i:
//   x_i <- x_i - alpha * (grad_i f_i + k * (grad_i G - grad_i F_{-i})).
// ia_rbcd: exact best responses, ideal thresholds (requires exact BRs).
// a_rbcd: ABR best responses (cfg.beta, cfg.T_prime), practical thresholds.
// bm2: as a_rbcd with k forced to -1 (pure Case-3 / gap-descent direction).
SolveResult run_ia_rbcd(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                        const StateObserver& observer = {});
SolveResult run_a_rbcd(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                       const StateObserver& observer = {});
SolveResult run_bm2(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                    const StateObserver& observer = {});

// Dispatch on cfg.variant.
SolveResult run_variant(const GameProblem& p, const BlockVector& x0, const SolverConfig& cfg,
                        const StateObserver& observer = {});

// Literal step-size bounds from the convergence theorems, plus the
// recommendation alpha = min over applicable cases and beta = 1/L.
// kappa, when supplied, adds the kappa-contraction bound (1-kappa)/(n(L+L')).
struct StepSizes {
  std::optional<double> kappa_alpha;  // (1-kappa)/(n(L+L')), if kappa given
  double case1_alpha = 0.0;           // (1-gamma)/(n(L+L'))
  double case2_alpha = 0.0;           // min{1, C}/(2n(L+L'))
  double case3_alpha = 0.0;           // 1/(n(L+L'))
  double recommended_alpha = 0.0;
  double beta = 0.0;                  // 1/L
};
StepSizes theorem_step_sizes(const ProblemConstants& consts, int n, double gamma, double C,
                             std::optional<double> kappa = std::nullopt);

// Exact conditional expectation of the post-update gap: enumerates all n
// equally likely block choices, applies the variant's update, and averages
// the exact-best-response gaps (no Monte Carlo). For cyclic the value is the
// deterministic gap after one full sweep. Requires exact best responses.
double expected_one_step(const GameProblem& p, const BlockVector& x, const SolverConfig& cfg,
                         Variant variant);

}  // namespace plnash

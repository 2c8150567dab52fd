#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plnash/config.hpp"
#include "plnash/problems.hpp"
#include "plnash/solvers.hpp"

namespace plnash {

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;     // malformed or inconsistent config
inline constexpr int kExitUnknown = 3;    // unknown problem / variant / scope
inline constexpr int kExitViolation = 4;  // a hard numeric check failed

// One experiment: a registry problem, solver variants to run, the shared
// solver settings, and the seed list. `extras` carries dotted problem
// parameters (e.g. cournot.a) verbatim so configs round-trip losslessly.
struct ExperimentConfig {
  std::string problem = "f4";
  std::vector<Variant> variants{Variant::rbcd};
  SolverConfig solver;  // seed field is overridden per run by `seeds`
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "out";
  std::optional<std::vector<double>> x0;  // flat start; default: seeded box draw
  std::map<std::string, std::string> extras;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Keys: problem (or problem.name), variants, seeds, alpha, beta, gamma, C,
// T, T_prime, tol, x0, output_dir; any other dotted key lands in `extras`,
// any other bare key is a ConfigError. Unknown variant names throw
// UnknownName. experiment_to_config is a lossless inverse.
ExperimentConfig experiment_from_config(const Config& cfg);
Config experiment_to_config(const ExperimentConfig& e);

// Registry lookup honoring cournot.* overrides (n, a, b, costs / cost).
ProblemSpec problem_for_experiment(const ExperimentConfig& e);

// The start state for one run: the explicit x0 when given, otherwise a
// uniform draw from the problem's test box seeded by (seed ^ salt) so runs
// are reproducible and distinct from the solver's own draw sequence.
BlockVector resolve_x0(const ExperimentConfig& e, const ProblemSpec& spec, std::uint64_t seed);

// run: one CSV per (variant, seed) named {problem}_{variant}_seed{seed}.csv
// plus summary.json in output_dir. verify: named check batteries or a
// problem name; JSON report written to report_dir when non-empty. gradcheck:
// analytic vs finite-difference gradients, table per player ("all" loops the
// registry; samples=0 is a vacuous pass with a warning). list: problems and
// variants. All return an exit code instead of throwing.
int cmd_run(const ExperimentConfig& e, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& scope, const std::string& report_dir, std::ostream& out,
               std::ostream& err);
int cmd_gradcheck(const std::string& problem, int samples, std::ostream& out, std::ostream& err);
int cmd_list(std::ostream& out);

// Scope names accepted by cmd_verify, excluding problem names.
std::vector<std::string> verify_scopes();

}  // namespace plnash

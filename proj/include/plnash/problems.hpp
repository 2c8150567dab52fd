#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plnash/game.hpp"

namespace plnash {

struct UnknownName : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A registered benchmark game plus everything a test or experiment needs to
// drive it: known equilibria (point list and, for non-isolated equilibrium
// sets, a membership predicate), a sampling box, and provenance notes.
struct ProblemSpec {
  std::string name;
  GameProblem game;
  std::vector<BlockVector> known_ne;
  std::function<bool(const BlockVector&, double tol)> ne_membership;
  std::vector<std::pair<double, double>> test_box;  // per-block [lo, hi]
  std::string notes;
};

// Names: "f1".."f6", "saddle", "cournot-linear", "cournot-quadratic",
// "resource", "lq". Throws UnknownName otherwise.
ProblemSpec registry_get(const std::string& name);
std::vector<std::string> registry_names();

enum class DemandCurve { linear, quadratic };

// n-firm Cournot competition with inverse demand P(Q) = a - bQ (linear) or
// P(Q) = a - bQ^2 (quadratic); player i minimizes f_i(q) = -(P(Q) - c_i) q_i.
// Linear demand registers the closed-form best response and, for symmetric
// costs, the equilibrium q* = (a-c)/(b(n+1)).
ProblemSpec build_cournot(int n, DemandCurve demand, double a, double b,
                          std::vector<double> costs);

// Own-block minimizer for quadratic demand: the positive root of
// 3b q^2 + 4b Q_{-i} q + (b Q_{-i}^2 + c_i - a) = 0. Kept as a cross-check
// oracle; the quadratic problem itself advertises no exact best response.
double cournot_quadratic_best_response(double a, double b, double c_i, double q_minus);

// Closed-form per-player values and, where one exists, the best-response
// envelope G_F and gap, for cross-checking the generic machinery.
// Registered for "f1", "f2", "f4", "f6", "resource".
struct KnownValues {
  std::vector<double> f;
  std::optional<double> G_F;
  std::optional<double> gap;
};
KnownValues known_function_values(const std::string& name, const BlockVector& x);

}  // namespace plnash

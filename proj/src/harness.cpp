#include "plnash/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "plnash/bestresponse.hpp"
#include "plnash/csvio.hpp"
#include "plnash/diagnostics.hpp"
#include "plnash/lqgame.hpp"
#include "plnash/rng.hpp"

namespace plnash {

namespace {

using nlohmann::json;

// Decorrelates the default-start draw from the solver's own seed stream.
constexpr std::uint64_t kX0Salt = 0xA0761D6478BD642FULL;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {"problem", "problem.name", "variants", "seeds",
                                             "alpha",   "beta",         "gamma",    "C",
                                             "T",       "T_prime",      "tol",      "x0",
                                             "output_dir"};
  return keys;
}

json vec_json(const BlockVector& x) {
  json out = json::array();
  for (int j = 0; j < x.size(); ++j) out.push_back(x[j]);
  return out;
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return json(v);
  return json();
}

json rate_json(const RateFit& fr) {
  return json{{"kind", to_string(fr.kind)}, {"rate", fr.rate},
              {"r2", fr.r2},                {"mean_ratio", fr.mean_ratio},
              {"window", fr.window},        {"note", fr.note}};
}

std::vector<double> trace_gaps(const std::vector<IterationRecord>& trace) {
  std::vector<double> gaps;
  gaps.reserve(trace.size());
  for (const IterationRecord& r : trace) gaps.push_back(r.gap);
  return gaps;
}

json case_histogram(const std::vector<IterationRecord>& trace) {
  long c1 = 0;
  long c2 = 0;
  long c3 = 0;
  long conv = 0;
  long none = 0;
  for (const IterationRecord& r : trace) {
    if (!r.tag) {
      ++none;
      continue;
    }
    switch (*r.tag) {
      case CaseTag::Case1: ++c1; break;
      case CaseTag::Case2: ++c2; break;
      case CaseTag::Case3: ++c3; break;
      case CaseTag::Converged: ++conv; break;
    }
  }
  return json{{"case1", c1}, {"case2", c2}, {"case3", c3}, {"converged", conv}, {"none", none}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

// ---- verify battery ---------------------------------------------------

// One named check: ok + free-form details. Violating states are serialized
// into the details under "worst_x" / "worst_state".
struct CheckResult {
  std::string name;
  bool ok = true;
  json details;
};

std::vector<BlockVector> draw_states(const ProblemSpec& spec, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<BlockVector> states;
  states.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    BlockVector x(spec.game.layout);
    for (int i = 0; i < spec.game.n(); ++i) {
      auto blk = x.block(i);
      const auto& [lo, hi] = spec.test_box[static_cast<std::size_t>(i)];
      for (double& c : blk) c = rng.uniform(lo, hi);
    }
    states.push_back(std::move(x));
  }
  return states;
}

// PL sandwich (1/2L) D <= gap <= (1/2mu) D at random points.
CheckResult check_sandwich_for(const ProblemSpec& spec, int points, std::uint64_t seed,
                               double slack) {
  const GameProblem& p = spec.game;
  CheckResult res{"sandwich/" + spec.name, true, {}};
  double worst_lo = -1e300;
  double worst_hi = -1e300;
  BlockVector worst_x;
  for (const BlockVector& x : draw_states(spec, points, seed)) {
    const BestResponseResult br = exact_best_responses(p, x);
    const double g = gap(p, x, br);
    const StationarityInfo si = stationarity_info(p, x);
    const double lo = si.grad_sq / (2.0 * p.constants.L) - g;
    const double hi = g - si.grad_sq / (2.0 * p.constants.mu);
    if (std::max(lo, hi) > std::max(worst_lo, worst_hi)) worst_x = x;
    worst_lo = std::max(worst_lo, lo);
    worst_hi = std::max(worst_hi, hi);
  }
  res.ok = worst_lo <= slack && worst_hi <= slack;
  res.details = json{{"points", points},
                     {"worst_lower_margin", worst_lo},
                     {"worst_upper_margin", worst_hi},
                     {"slack", slack}};
  if (!res.ok) res.details["worst_x"] = vec_json(worst_x);
  return res;
}

CheckResult check_smoothness_for(const ProblemSpec& spec) {
  const ProblemConstants& c = spec.game.constants;
  const PLProfile prof = estimate_pl(spec.game, spec.test_box, 200, 11);
  CheckResult res{"smoothness/" + spec.name, true, {}};
  res.ok = prof.mu_hat >= c.mu - 1e-6 && prof.L_hat <= c.L + 1e-6 &&
           prof.mu_hat <= prof.L_hat + 1e-9;
  res.details = json{{"mu", c.mu},           {"L", c.L},
                     {"mu_hat", prof.mu_hat}, {"L_hat", prof.L_hat},
                     {"samples", prof.sample_count}};
  if (prof.theta_hat) res.details["theta_hat"] = *prof.theta_hat;
  if (prof.nu_hat) res.details["nu_hat"] = *prof.nu_hat;
  if (!res.ok && prof.mu_argmin.size() > 0) res.details["worst_x"] = vec_json(prof.mu_argmin);
  return res;
}

CheckResult check_kappa_bounds_for(const ProblemSpec& spec) {
  const KappaBoundReport rep = kappa_global_bound_check(spec.game, spec.test_box, 200, 7);
  CheckResult res{"kappa-bounds/" + spec.name, rep.ok(), {}};
  res.details = json{{"samples", rep.samples},
                     {"a_violations", rep.a_violations},
                     {"b_violations", rep.b_violations},
                     {"worst_a_margin", rep.worst_a_margin},
                     {"worst_b_margin", rep.worst_b_margin}};
  return res;
}

// Lemma-level ABR accuracy: ||grad G - grad G~||^2 <= delta * D with
// T' = abr_iters_for(delta) and beta = 1/L.
CheckResult check_abr_accuracy_for(const ProblemSpec& spec) {
  const GameProblem& p = spec.game;
  const double beta = 1.0 / p.constants.L;
  CheckResult res{"abr-accuracy/" + spec.name, true, {}};
  json deltas = json::array();
  SplitMix64 rng(777);
  for (const double delta : {1e-2, 1e-4, 1e-6}) {
    const int tp = abr_iters_for(delta, p.n(), p.constants.L, p.constants.mu, beta);
    double worst = -1e300;
    for (int s = 0; s < 100; ++s) {
      BlockVector x(p.layout);
      for (int i = 0; i < p.n(); ++i) {
        auto blk = x.block(i);
        const auto& [lo, hi] = spec.test_box[static_cast<std::size_t>(i)];
        for (double& c : blk) c = rng.uniform(lo, hi);
      }
      const BestResponseResult exact = exact_best_responses(p, x);
      const BestResponseResult approx = abr(p, x, beta, tp);
      const StationarityInfo si = stationarity_info(p, x);
      if (si.grad_sq <= 1e-18) continue;
      double err = 0.0;
      for (int j = 0; j < exact.grad_G.size(); ++j) {
        const double d = exact.grad_G[j] - approx.grad_G[j];
        err += d * d;
      }
      worst = std::max(worst, err / si.grad_sq - delta);
    }
    if (worst > 0.0) res.ok = false;
    deltas.push_back(json{{"delta", delta}, {"T_prime", tp}, {"worst_margin", worst}});
  }
  res.details = json{{"beta", beta}, {"per_delta", deltas}};
  return res;
}

CheckResult check_contraction_for(const ProblemSpec& spec, double gamma, double C) {
  SolverConfig cfg;
  cfg.gamma = gamma;
  cfg.C = C;
  const ContractionReport rep =
      verify_contraction_theorems(spec.game, cfg, draw_states(spec, 50, 31337));
  CheckResult res{"contraction/" + spec.name, rep.ok, {}};
  res.details = json{{"gamma", gamma},
                     {"C", C},
                     {"states_checked", rep.states_checked},
                     {"skipped_ne", rep.skipped_ne},
                     {"skipped_kappa", rep.skipped_kappa},
                     {"cases", json{{"case1", rep.case1}, {"case2", rep.case2},
                                    {"case3", rep.case3}}},
                     {"worst_rbcd_margin", finite_or_null(rep.worst_rbcd_margin)},
                     {"worst_case1_margin", finite_or_null(rep.worst_case1_margin)},
                     {"worst_case2_stated_margin", finite_or_null(rep.worst_case2_stated_margin)},
                     {"worst_case2_weak_margin", finite_or_null(rep.worst_case2_weak_margin)},
                     {"worst_case3_margin", finite_or_null(rep.worst_case3_margin)},
                     {"stated_case2_violations", rep.stated_case2_violations}};
  if (!rep.ok && rep.worst_state) res.details["worst_state"] = vec_json(*rep.worst_state);
  return res;
}

CheckResult check_lq_counterexample() {
  const LQCounterexample ce = lq_d2_counterexample();
  const LQEval ea = evaluate_policies(ce.spec, ce.K_a);
  const LQEval eb = evaluate_policies(ce.spec, ce.K_b);
  const LQEval em = evaluate_policies(ce.spec, ce.K_mid);
  CheckResult res{"lq-counterexample", true, {}};
  const bool stable_ok = ea.stable && eb.stable && !em.stable;
  const bool cost_ok = std::abs(ea.costs[0] - 405.0) <= 1e-9 &&
                       std::abs(eb.costs[0] - 405.0) <= 1e-9 && !std::isfinite(em.costs[0]);
  res.ok = stable_ok && cost_ok;
  res.details = json{{"rho", {ea.rho, eb.rho, em.rho}},
                     {"stable", {ea.stable, eb.stable, em.stable}},
                     {"f1", {finite_or_null(ea.costs[0]), finite_or_null(eb.costs[0]),
                             finite_or_null(em.costs[0])}}};
  return res;
}

CheckResult check_case_region() {
  const ProblemSpec spec = registry_get("f1");
  const CaseRegionMeasure tight = case_region_measure(spec.game, 0.99, 0.01, 101, spec.test_box);
  const CaseRegionMeasure loose = case_region_measure(spec.game, 0.5, 0.5, 101, spec.test_box);
  CheckResult res{"case-region/f1", true, {}};
  res.ok = tight.fraction <= loose.fraction && tight.max_case3_gap <= loose.max_case3_gap;
  const auto measure_json = [](const CaseRegionMeasure& m) {
    return json{{"fraction", m.fraction},
                {"case3", m.case3_count},
                {"non_ne", m.non_ne_count},
                {"max_case3_gap", m.max_case3_gap}};
  };
  res.details = json{{"gamma=0.99,C=0.01", measure_json(tight)},
                     {"gamma=0.5,C=0.5", measure_json(loose)}};
  return res;
}

CheckResult check_gradcheck_for(const ProblemSpec& spec, int samples) {
  const GradCheckReport rep = gradcheck_problem(spec.game, spec.test_box, samples, 2025);
  CheckResult res{"gradcheck/" + spec.name, rep.ok, {}};
  res.details = json{{"samples", rep.samples},
                     {"worst_rel", rep.worst_rel},
                     {"worst_player", rep.worst_player},
                     {"per_player", rep.worst_rel_per_player},
                     {"rel_tol", rep.rel_tol}};
  if (!rep.ok) res.details["worst_x"] = vec_json(rep.worst_x);
  return res;
}

// Known equilibria certify with gap <= 1e-10 and residual <= 1e-9
// (exact best responses when registered, high-accuracy ABR otherwise).
CheckResult check_known_ne_for(const ProblemSpec& spec) {
  const GameProblem& p = spec.game;
  CheckResult res{"ne-certification/" + spec.name, true, {}};
  json points = json::array();
  for (const BlockVector& ne : spec.known_ne) {
    const double beta = p.constants.known() ? 1.0 / p.constants.L : 0.1;
    const BestResponseResult br =
        p.has_exact_best_response() ? exact_best_responses(p, ne) : abr(p, ne, beta, 2000);
    const double g = gap(p, ne, br);
    const double resid = stationarity_residual(p, ne);
    const bool ok = g <= 1e-10 && resid <= 1e-9;
    if (!ok) res.ok = false;
    points.push_back(json{{"x", vec_json(ne)}, {"gap", g}, {"residual", resid}, {"ok", ok}});
  }
  res.details = json{{"points", points}};
  return res;
}

bool is_analytic(const ProblemSpec& spec) {
  return spec.game.constants.provenance == Provenance::analytic;
}

std::vector<CheckResult> battery_for_problem(const ProblemSpec& spec) {
  std::vector<CheckResult> checks;
  checks.push_back(check_gradcheck_for(spec, 100));
  if (!spec.known_ne.empty()) checks.push_back(check_known_ne_for(spec));
  if (is_analytic(spec) && spec.game.has_exact_best_response()) {
    checks.push_back(check_sandwich_for(spec, 500, 4242, 1e-9));
    checks.push_back(check_contraction_for(spec, 0.5, 1.0));
  }
  return checks;
}

std::vector<std::string> analytic_battery_names() { return {"f1", "f4", "f6", "resource"}; }

std::vector<CheckResult> battery_for_scope(const std::string& scope) {
  std::vector<CheckResult> checks;
  if (scope == "sandwich") {
    for (const std::string& name : analytic_battery_names()) {
      checks.push_back(check_sandwich_for(registry_get(name), 1000, 4242, 1e-9));
    }
  } else if (scope == "smoothness" || scope == "pl-estimate") {
    for (const std::string& name : analytic_battery_names()) {
      checks.push_back(check_smoothness_for(registry_get(name)));
    }
  } else if (scope == "kappa-bounds") {
    for (const std::string& name : analytic_battery_names()) {
      checks.push_back(check_kappa_bounds_for(registry_get(name)));
    }
  } else if (scope == "abr-accuracy") {
    for (const char* name : {"f4", "f6", "resource"}) {
      checks.push_back(check_abr_accuracy_for(registry_get(name)));
    }
  } else if (scope == "contraction") {
    checks.push_back(check_contraction_for(registry_get("f4"), 0.5, 1.0));
    checks.push_back(check_contraction_for(registry_get("resource"), 0.5, 1.0));
    // gamma=0.3, C=0.5 drives f6 through Case 2 and Case 3 states as well.
    checks.push_back(check_contraction_for(registry_get("f6"), 0.3, 0.5));
  } else if (scope == "lq-counterexample") {
    checks.push_back(check_lq_counterexample());
  } else if (scope == "case-region") {
    checks.push_back(check_case_region());
  } else if (scope == "all") {
    for (const char* sub : {"sandwich", "smoothness", "kappa-bounds", "abr-accuracy",
                            "contraction", "lq-counterexample", "case-region"}) {
      for (CheckResult& c : battery_for_scope(sub)) checks.push_back(std::move(c));
    }
  } else {
    // Problem-name scope; registry_get throws UnknownName for anything else.
    for (CheckResult& c : battery_for_problem(registry_get(scope))) {
      checks.push_back(std::move(c));
    }
  }
  return checks;
}

}  // namespace

std::vector<std::string> verify_scopes() {
  return {"all",         "sandwich",          "smoothness", "kappa-bounds", "abr-accuracy",
          "contraction", "lq-counterexample", "case-region"};
}

ExperimentConfig experiment_from_config(const Config& cfg) {
  ExperimentConfig e;
  for (const auto& [key, value] : cfg.entries()) {
    if (known_keys().count(key) != 0) continue;
    if (key.find('.') != std::string::npos) {
      e.extras[key] = value;
      continue;
    }
    throw ConfigError("unknown key '" + key + "'");
  }
  if (cfg.has("problem") && cfg.has("problem.name") &&
      cfg.get_string("problem") != cfg.get_string("problem.name")) {
    throw ConfigError("conflicting 'problem' and 'problem.name'");
  }
  e.problem = cfg.get_string("problem", cfg.get_string("problem.name", e.problem));
  if (cfg.has("variants")) {
    e.variants.clear();
    for (const std::string& name : cfg.get_list("variants")) {
      const std::optional<Variant> v = variant_from_string(name);
      if (!v) throw UnknownName("unknown variant: " + name);
      e.variants.push_back(*v);
    }
    if (e.variants.empty()) throw ConfigError("key 'variants': empty list");
  }
  if (cfg.has("seeds")) {
    e.seeds = cfg.get_seeds("seeds");
    if (e.seeds.empty()) throw ConfigError("key 'seeds': empty list");
  }
  e.solver.alpha = cfg.get_double("alpha", 0.05);
  e.solver.beta = cfg.get_double("beta", e.solver.beta);
  e.solver.gamma = cfg.get_double("gamma", e.solver.gamma);
  e.solver.C = cfg.get_double("C", e.solver.C);
  e.solver.T = cfg.get_int("T", e.solver.T);
  e.solver.T_prime = static_cast<int>(cfg.get_int("T_prime", e.solver.T_prime));
  e.solver.tol = cfg.get_double("tol", e.solver.tol);
  e.output_dir = cfg.get_string("output_dir", e.output_dir);
  if (cfg.has("x0")) e.x0 = cfg.get_double_list("x0");
  return e;
}

Config experiment_to_config(const ExperimentConfig& e) {
  Config cfg;
  cfg.set("problem", e.problem);
  std::string variants;
  for (const Variant v : e.variants) {
    if (!variants.empty()) variants += ", ";
    variants += to_string(v);
  }
  cfg.set("variants", variants);
  std::string seeds;
  for (const std::uint64_t s : e.seeds) {
    if (!seeds.empty()) seeds += ", ";
    seeds += std::to_string(s);
  }
  cfg.set("seeds", seeds);
  cfg.set_double("alpha", e.solver.alpha);
  cfg.set_double("beta", e.solver.beta);
  cfg.set_double("gamma", e.solver.gamma);
  cfg.set_double("C", e.solver.C);
  cfg.set_int("T", e.solver.T);
  cfg.set_int("T_prime", e.solver.T_prime);
  cfg.set_double("tol", e.solver.tol);
  cfg.set("output_dir", e.output_dir);
  if (e.x0) {
    std::string x0;
    for (const double v : *e.x0) {
      if (!x0.empty()) x0 += ", ";
      x0 += format_g17(v);
    }
    cfg.set("x0", x0);
  }
  for (const auto& [k, v] : e.extras) cfg.set(k, v);
  return cfg;
}

ProblemSpec problem_for_experiment(const ExperimentConfig& e) {
  const bool is_cournot =
      e.problem == "cournot-linear" || e.problem == "cournot-quadratic";
  bool has_cournot_key = false;
  for (const auto& [k, v] : e.extras) {
    if (k.rfind("cournot.", 0) == 0) has_cournot_key = true;
  }
  if (is_cournot && has_cournot_key) {
    Config sub;
    for (const auto& [k, v] : e.extras) sub.set(k, v);
    const int n = static_cast<int>(sub.get_int("cournot.n", 2));
    const double a = sub.get_double("cournot.a", 10.0);
    const double b = sub.get_double("cournot.b", 1.0);
    std::vector<double> costs;
    if (sub.has("cournot.costs")) {
      costs = sub.get_double_list("cournot.costs");
    } else {
      costs.assign(static_cast<std::size_t>(std::max(n, 0)), sub.get_double("cournot.cost", 1.0));
    }
    const DemandCurve demand =
        e.problem == "cournot-linear" ? DemandCurve::linear : DemandCurve::quadratic;
    try {
      return build_cournot(n, demand, a, b, std::move(costs));
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
  }
  return registry_get(e.problem);
}

BlockVector resolve_x0(const ExperimentConfig& e, const ProblemSpec& spec, std::uint64_t seed) {
  if (e.x0) {
    if (static_cast<int>(e.x0->size()) != spec.game.layout.total_dim()) {
      throw ConfigError("key 'x0': expected " + std::to_string(spec.game.layout.total_dim()) +
                        " coordinates, got " + std::to_string(e.x0->size()));
    }
    return BlockVector{spec.game.layout, *e.x0};
  }
  SplitMix64 rng(seed ^ kX0Salt);
  BlockVector x(spec.game.layout);
  for (int i = 0; i < spec.game.n(); ++i) {
    auto blk = x.block(i);
    const auto& [lo, hi] = spec.test_box[static_cast<std::size_t>(i)];
    for (double& c : blk) c = rng.uniform(lo, hi);
  }
  return x;
}

int cmd_run(const ExperimentConfig& e, std::ostream& out, std::ostream& err) {
  ProblemSpec spec;
  try {
    spec = problem_for_experiment(e);
  } catch (const UnknownName& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUnknown;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << '\n';
    return kExitConfig;
  }
  try {
    std::filesystem::create_directories(e.output_dir);
    json summary;
    summary["problem"] = spec.name;
    json cfg_json = json::object();
    const Config echo = experiment_to_config(e);
    for (const auto& [k, v] : echo.entries()) cfg_json[k] = v;
    summary["config"] = cfg_json;
    json runs = json::array();
    for (const Variant v : e.variants) {
      for (const std::uint64_t seed : e.seeds) {
        SolverConfig sc = e.solver;
        sc.seed = seed;
        sc.variant = v;
        const BlockVector x0 = resolve_x0(e, spec, seed);
        const SolveResult r = run_variant(spec.game, x0, sc);
        const std::string file =
            spec.name + "_" + to_string(v) + "_seed" + std::to_string(seed) + ".csv";
        save_trace_csv((std::filesystem::path(e.output_dir) / file).string(), r.trace);
        const RateFit fr = fit_rate(trace_gaps(r.trace));
        const StationarityInfo si = stationarity_info(spec.game, r.final_x);
        const IterationRecord& last = r.trace.back();
        json run{{"variant", to_string(v)},
                 {"seed", seed},
                 {"csv", file},
                 {"iters", last.iter},
                 {"final_gap", finite_or_null(last.gap)},
                 {"final_residual", finite_or_null(si.residual)},
                 {"final_x", vec_json(r.final_x)},
                 {"rate", rate_json(fr)},
                 {"cases", case_histogram(r.trace)}};
        runs.push_back(run);
        out << spec.name << ' ' << to_string(v) << " seed " << seed << ": iters " << last.iter
            << ", final gap " << format_g17(last.gap) << ", rate " << to_string(fr.kind) << '\n';
      }
    }
    summary["runs"] = runs;
    write_json((std::filesystem::path(e.output_dir) / "summary.json").string(), summary);
    return kExitOk;
  } catch (const MissingBestResponse& ex) {
    err << "config error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& ex) {
    err << "config error: " << ex.what() << '\n';
    return kExitConfig;
  }
}

int cmd_verify(const std::string& scope, const std::string& report_dir, std::ostream& out,
               std::ostream& err) {
  std::vector<CheckResult> checks;
  try {
    checks = battery_for_scope(scope);
  } catch (const UnknownName& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUnknown;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitConfig;
  }
  bool all_ok = true;
  json report;
  report["scope"] = scope;
  json items = json::array();
  for (const CheckResult& c : checks) {
    all_ok = all_ok && c.ok;
    out << (c.ok ? "[ ok ] " : "[FAIL] ") << c.name << '\n';
    items.push_back(json{{"name", c.name}, {"ok", c.ok}, {"details", c.details}});
  }
  report["checks"] = items;
  report["ok"] = all_ok;
  out << (all_ok ? "verify: all checks passed" : "verify: HARD VIOLATION") << " (" << checks.size()
      << " checks)\n";
  if (!report_dir.empty()) {
    try {
      std::filesystem::create_directories(report_dir);
      std::string tag = scope;
      std::replace(tag.begin(), tag.end(), '/', '_');
      write_json((std::filesystem::path(report_dir) / ("verify_" + tag + ".json")).string(),
                 report);
    } catch (const std::exception& ex) {
      err << "error: " << ex.what() << '\n';
      return kExitConfig;
    }
  }
  return all_ok ? kExitOk : kExitViolation;
}

int cmd_gradcheck(const std::string& problem, int samples, std::ostream& out, std::ostream& err) {
  if (samples < 0) {
    err << "config error: samples must be >= 0\n";
    return kExitConfig;
  }
  std::vector<std::string> names;
  if (problem == "all") {
    names = registry_names();
  } else {
    names.push_back(problem);
  }
  if (samples == 0) {
    out << "warning: samples = 0, vacuous pass\n";
    return kExitOk;
  }
  bool all_ok = true;
  try {
    for (const std::string& name : names) {
      const ProblemSpec spec = registry_get(name);
      const GradCheckReport rep = gradcheck_problem(spec.game, spec.test_box, samples, 2025);
      for (int i = 0; i < spec.game.n(); ++i) {
        const double rel = rep.worst_rel_per_player[static_cast<std::size_t>(i)];
        const bool ok = rel <= rep.rel_tol;
        out << (ok ? "[ ok ] " : "[FAIL] ") << name << " player " << (i + 1) << ": worst rel "
            << format_g17(rel) << '\n';
      }
      if (!rep.ok) {
        all_ok = false;
        out << "[FAIL] " << name << ": worst offender player " << (rep.worst_player + 1)
            << " at x = [";
        for (int j = 0; j < rep.worst_x.size(); ++j) {
          if (j) out << ", ";
          out << format_g17(rep.worst_x[j]);
        }
        out << "]\n";
      }
    }
  } catch (const UnknownName& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUnknown;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitConfig;
  }
  return all_ok ? kExitOk : kExitViolation;
}

int cmd_list(std::ostream& out) {
  out << "problems:\n";
  for (const std::string& name : registry_names()) {
    const ProblemSpec spec = registry_get(name);
    const ProblemConstants& c = spec.game.constants;
    out << "  " << name << " (n=" << spec.game.n();
    if (c.known()) {
      out << ", L=" << format_g17(c.L) << ", mu=" << format_g17(c.mu)
          << (c.provenance == Provenance::analytic ? ", analytic" : ", estimated");
    }
    out << ")";
    if (spec.game.has_exact_best_response()) out << " [exact-br]";
    out << '\n';
  }
  out << "variants:\n";
  for (const std::string& name : variant_names()) out << "  " << name << '\n';
  out << "verify scopes:\n";
  for (const std::string& name : verify_scopes()) out << "  " << name << '\n';
  return kExitOk;
}

}  // namespace plnash

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "plnash/config.hpp"
#include "plnash/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nash equilibrium solvers for smooth games under the n-sided PL condition"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run solver experiments from a config file");
  std::string config_path;
  std::string out_dir;
  std::string seeds_str;
  double tol_val = 0.0;
  run->add_option("--config", config_path, "experiment config file (key = value lines)")
      ->required();
  run->add_option("--out", out_dir, "override output_dir");
  run->add_option("--seed", seeds_str, "override seeds (e.g. 7 or 1..20)");
  auto* tol_opt = run->add_option("--tol", tol_val, "override the stopping tolerance");

  auto* verify = app.add_subcommand("verify", "Run numeric invariant checks");
  std::string scope = "all";
  std::string report_dir;
  verify->add_option("scope", scope, "check battery (see `list`) or a problem name");
  verify->add_option("--out", report_dir, "directory for the JSON report");

  auto* gradcheck =
      app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients, per player");
  std::string problem = "all";
  int samples = 100;
  gradcheck->add_option("problem", problem, "problem name or 'all'");
  gradcheck->add_option("--samples", samples, "random sample count (0 = vacuous pass)");

  auto* list = app.add_subcommand("list", "Enumerate problems, variants, and verify scopes");

  CLI11_PARSE(app, argc, argv);

  using namespace plnash;
  try {
    if (run->parsed()) {
      const Config cfg = Config::load(config_path);
      ExperimentConfig e = experiment_from_config(cfg);
      if (!out_dir.empty()) e.output_dir = out_dir;
      if (!seeds_str.empty()) {
        Config seeds;
        seeds.set("seeds", seeds_str);
        e.seeds = seeds.get_seeds("seeds");
        if (e.seeds.empty()) throw ConfigError("--seed: empty seed list");
      }
      if (tol_opt->count() > 0) e.solver.tol = tol_val;
      return cmd_run(e, std::cout, std::cerr);
    }
    if (verify->parsed()) return cmd_verify(scope, report_dir, std::cout, std::cerr);
    if (gradcheck->parsed()) return cmd_gradcheck(problem, samples, std::cout, std::cerr);
    if (list->parsed()) return cmd_list(std::cout);
  } catch (const UnknownName& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUnknown;
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

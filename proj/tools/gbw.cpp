// gbw: command-line front end for the greedy-basis workbench.
//
//   gbw run <config.json> [--out DIR] [--seed N] [--max-support N]
//                         [--jobs N] [--quiet]
//   gbw describe <space>
//   gbw constants <space> --kind <tag> [--lambda X] [budget flags]
//   gbw check <name> [--space <spec.json|registry name>] [--lambda X]
//                    [budget flags]
//
// GBW_MAX_ENUM overrides the global enumeration cap.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gbw/constants.hpp"
#include "gbw/errors.hpp"
#include "gbw/harness.hpp"
#include "gbw/limits.hpp"
#include "gbw/registry.hpp"
#include "gbw/runner.hpp"

namespace {

gbw::SpaceSpec load_space(const std::string& arg) {
  if (gbw::is_registry_name(arg)) return gbw::registry_space(arg);
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    nlohmann::json j;
    in >> j;
    gbw::SpaceSpec s = gbw::space_from_json(j);
    if (s.name.empty()) s.name = std::filesystem::path(arg).stem().string();
    return s;
  }
  throw std::invalid_argument("unknown space: " + arg +
                              " (not a registry name or a readable file)");
}

void apply_env_cap() {
  if (const char* cap = std::getenv("GBW_MAX_ENUM")) {
    const int value = std::atoi(cap);
    if (value < 1) throw std::invalid_argument("GBW_MAX_ENUM must be >= 1");
    gbw::enum_limits().support_cap = value;
  }
}

struct BudgetFlags {
  int max_support = -1;
  long long window = -1;
  int max_m = -1;
  int max_set = -1;
  std::vector<double> grid;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-support", max_support, "largest |supp(x)| scanned");
    cmd->add_option("--window", window, "index window [1, N]");
    cmd->add_option("--max-m", max_m, "largest greedy-sum size m");
    cmd->add_option("--max-set", max_set, "largest |A|, |B| in set scans");
    cmd->add_option("--grid", grid, "coefficient grid values");
  }

  gbw::SearchBudget resolve() const {
    gbw::SearchBudget b = gbw::SearchBudget::standard();
    if (max_support >= 0) b.max_support = max_support;
    if (window >= 1) b.window = window;
    if (max_m >= 0) b.max_m = max_m;
    if (max_set >= 0) b.max_set = max_set;
    if (!grid.empty()) b.coeff_grid = grid;
    return b;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy-basis workbench"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  std::string config_path, out_dir;
  long long seed = -1;
  int jobs = 1, run_max_support = -1;
  bool quiet = false;
  run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "output directory override");
  run_cmd->add_option("--seed", seed, "seed override");
  run_cmd->add_option("--max-support", run_max_support, "budget override");
  run_cmd->add_option("--jobs", jobs, "concurrent tasks");
  run_cmd->add_flag("--quiet", quiet, "suppress progress output");

  // describe
  auto* describe_cmd = app.add_subcommand("describe", "print a construction");
  std::string describe_name;
  describe_cmd->add_option("space", describe_name, "registry name")->required();

  // constants
  auto* const_cmd = app.add_subcommand("constants", "estimate a greedy-type constant");
  std::string const_space, const_kind;
  double const_lambda = 1.0;
  BudgetFlags const_budget;
  const_cmd->add_option("space", const_space, "registry name or spec.json")->required();
  const_cmd->add_option("--kind", const_kind, "constant kind tag")->required();
  const_cmd->add_option("--lambda", const_lambda, "lambda >= 1");
  const_budget.add_to(const_cmd);

  // check
  auto* check_cmd = app.add_subcommand("check", "run a construction or relation check");
  std::string check_name, check_space;
  double check_lambda = 0.0;
  std::vector<long long> check_klist;
  BudgetFlags check_budget;
  check_cmd->add_option("name", check_name, "check identifier")->required();
  check_cmd->add_option("--space", check_space, "registry name or spec.json");
  check_cmd->add_option("--lambda", check_lambda, "lambda parameter");
  check_cmd->add_option("--k-list", check_klist, "gap probe sizes (schreier_m7)");
  check_budget.add_to(check_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    apply_env_cap();

    if (*run_cmd) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read config: " << config_path << "\n";
        return 2;
      }
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return 2;
      }
      gbw::ExperimentConfig config = gbw::ExperimentConfig::from_json(j);
      if (seed >= 0) config.seed = seed;
      gbw::RunOptions options;
      options.output_dir = out_dir;
      options.jobs = jobs;
      options.quiet = quiet;
      options.max_support_override = run_max_support;
      return gbw::run_config(config, options).exit_code;
    }

    if (*describe_cmd) {
      if (!gbw::is_registry_name(describe_name)) {
        std::cerr << "unknown space: " << describe_name << "\n";
        return 2;
      }
      std::cout << gbw::describe_space(describe_name);
      return 0;
    }

    if (*const_cmd) {
      const gbw::SpaceSpec space = load_space(const_space);
      const gbw::ConstantKind kind(gbw::constant_tag_from_string(const_kind),
                                   const_lambda);
      const gbw::ConstantEstimate est =
          gbw::estimate_constant(space, kind, const_budget.resolve());
      std::cout << gbw::to_json(est).dump(2) << "\n";
      return 0;
    }

    if (*check_cmd) {
      bool is_construction = false;
      for (const auto& n : gbw::construction_check_names())
        if (n == check_name) is_construction = true;
      gbw::CheckReport report;
      if (is_construction) {
        gbw::ConstructionParams params;
        const std::string space_name =
            check_space.empty()
                ? (check_name == "renormed_l1" ? "renormed_l1"
                   : check_name == "schreier_m7" ? "schreier_m7"
                                                 : "schreier_em3")
                : check_space;
        const gbw::SpaceSpec space = load_space(space_name);
        params.dim_cap = space.dim_cap;
        if (space.kind == gbw::SpaceKind::WeightedL1 ||
            space.kind == gbw::SpaceKind::SchreierSqrtWeighted)
          params.weights = space.weights;
        if (check_lambda > 0.0) params.lambda = check_lambda;
        if (!check_klist.empty()) params.k_list = check_klist;
        report = gbw::check_construction(check_name, params, check_budget.resolve());
      } else {
        if (check_space.empty()) {
          std::cerr << "relation checks need --space\n";
          return 2;
        }
        const gbw::SpaceSpec space = load_space(check_space);
        report = gbw::check_relation(check_name, space,
                                     check_lambda > 0.0 ? check_lambda : 1.0,
                                     check_budget.resolve());
      }
      std::cout << gbw::to_json(report).dump(2) << "\n";
      if (!report.passed) {
        std::cerr << "check " << check_name << " failed\n";
        return 1;
      }
      return 0;
    }
  } catch (const gbw::EnumerationOverflowError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}

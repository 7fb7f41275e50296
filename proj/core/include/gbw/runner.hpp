#pragma once

#include <map>
#include <string>
#include <vector>

#include "gbw/constants.hpp"
#include "gbw/harness.hpp"
#include "gbw/space.hpp"

#include "json.hpp"

namespace gbw {

// One experiment task. `op` is one of norm | gamma | sigma | constant |
// check; params carry the op-specific fields (see README for the schema).
struct TaskSpec {
  std::string id;
  std::string space;  // name in the config's spaces map or a registry name
  std::string op;
  nlohmann::json params;
};

struct ExperimentConfig {
  std::map<std::string, SpaceSpec> spaces;
  std::vector<TaskSpec> tasks;
  std::string output_dir = "out";
  long long seed = 0;  // recorded; reserved for sampled task types

  static ExperimentConfig from_json(const nlohmann::json& j);
  SpaceSpec resolve_space(const std::string& name) const;
};

struct RunOptions {
  std::string output_dir;  // overrides the config when nonempty
  int jobs = 1;
  bool quiet = false;
  int max_support_override = -1;  // budget override when >= 0
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 a check failed, 2 invalid input
  std::vector<std::string> failed_tasks;
};

// Executes every task, writing one CSV per task (columns task_id, space,
// operation, params_json, value, witness_json, elapsed_ms), then the
// summary last. Output bytes are deterministic except for elapsed_ms.
RunResult run_config(const ExperimentConfig& config, const RunOptions& options);

}  // namespace gbw

#include "gbw/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gbw/errors.hpp"
#include "gbw/greedy.hpp"
#include "gbw/oracles.hpp"
#include "gbw/registry.hpp"

namespace gbw {

namespace {

namespace fs = std::filesystem;

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::string format_value(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

CoeffVector vector_from_json(const nlohmann::json& j, Index dim_cap) {
  if (j.is_array() && (j.empty() || j.front().is_number()))
    return CoeffVector::from_dense(j.get<std::vector<double>>(), dim_cap);
  if (j.is_array()) {
    std::vector<std::pair<Index, double>> pairs;
    for (const auto& item : j)
      pairs.emplace_back(item.at(0).get<Index>(), item.at(1).get<double>());
    return CoeffVector::from_pairs(pairs, dim_cap);
  }
  throw std::invalid_argument(
      "task: x must be a dense array or a list of [index, value] pairs");
}

struct TaskOutcome {
  std::string csv_row;
  bool passed = true;
  double value = 0.0;
  std::string note;
};

TaskOutcome execute_task(const ExperimentConfig& config, const TaskSpec& task,
                         const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const SpaceSpec space = config.resolve_space(task.space);

  double value = 0.0;
  nlohmann::json witness_json;
  bool passed = true;
  std::string note;

  SearchBudget budget = task.params.contains("budget")
                            ? budget_from_json(task.params.at("budget"))
                            : SearchBudget::standard();
  if (options.max_support_override >= 0)
    budget.max_support = options.max_support_override;

  if (task.op == "norm") {
    const CoeffVector x = vector_from_json(task.params.at("x"), space.dim_cap);
    value = eval_norm(space, x);
  } else if (task.op == "gamma") {
    const CoeffVector x = vector_from_json(task.params.at("x"), space.dim_cap);
    value = gamma(space, x, task.params.at("m").get<long long>());
  } else if (task.op == "sigma") {
    const CoeffVector x = vector_from_json(task.params.at("x"), space.dim_cap);
    const SigmaTag tag =
        sigma_tag_from_string(task.params.at("kind").get<std::string>());
    SigmaKind kind{tag, std::nullopt};
    if (tag == SigmaTag::LeftDK || tag == SigmaTag::RightDK) {
      if (task.params.contains("ordering")) {
        GreedyOrdering rho;
        rho.order = task.params.at("ordering").get<std::vector<Index>>();
        kind.ordering = rho;
      } else {
        kind.ordering = canonical_ordering(x);
      }
    }
    value = sigma(space, kind, x, task.params.at("m").get<long long>());
  } else if (task.op == "constant") {
    ConstantKind kind(constant_tag_from_string(
                          task.params.at("kind").get<std::string>()),
                      task.params.value("lambda", 1.0));
    const ConstantEstimate est = estimate_constant(space, kind, budget);
    value = est.value;
    witness_json = to_json(est);
  } else if (task.op == "check") {
    const std::string name = task.params.at("name").get<std::string>();
    CheckReport report;
    bool is_construction = false;
    for (const auto& n : construction_check_names())
      if (n == name) is_construction = true;
    if (is_construction) {
      ConstructionParams params;
      params.dim_cap = space.dim_cap;
      if (space.kind == SpaceKind::WeightedL1 ||
          space.kind == SpaceKind::SchreierSqrtWeighted)
        params.weights = space.weights;
      if (task.params.contains("lambda"))
        params.lambda = task.params.at("lambda").get<double>();
      if (task.params.contains("k_list"))
        params.k_list = task.params.at("k_list").get<std::vector<long long>>();
      if (task.params.contains("base_exp"))
        params.base_exp = task.params.at("base_exp").get<long long>();
      report = check_construction(name, params, budget);
    } else {
      report = check_relation(name, space, task.params.value("lambda", 1.0),
                              budget);
    }
    value = report.passed ? 1.0 : 0.0;
    passed = report.passed;
    witness_json = to_json(report);
    if (!passed) note = "check " + name + " failed";
  } else {
    throw std::invalid_argument("unknown task op: " + task.op);
  }

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();

  std::ostringstream row;
  row << csv_escape(task.id) << ',' << csv_escape(task.space) << ','
      << csv_escape(task.op) << ',' << csv_escape(task.params.dump()) << ','
      << format_value(value) << ','
      << csv_escape(witness_json.is_null() ? "" : witness_json.dump()) << ','
      << elapsed << '\n';

  TaskOutcome outcome;
  outcome.csv_row = row.str();
  outcome.passed = passed;
  outcome.value = value;
  outcome.note = note;
  return outcome;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, path);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  if (j.contains("space")) config.spaces["default"] = space_from_json(j.at("space"));
  if (j.contains("spaces"))
    for (const auto& [name, spec] : j.at("spaces").items())
      config.spaces[name] = space_from_json(spec);
  if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("seed")) config.seed = j.at("seed").get<long long>();

  if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty())
    throw std::invalid_argument("config: a nonempty tasks array is required");
  long long auto_id = 0;
  for (const auto& tj : j.at("tasks")) {
    TaskSpec t;
    t.id = tj.value("id", "task" + std::to_string(auto_id));
    t.space = tj.value("space", "default");
    if (!tj.contains("op"))
      throw std::invalid_argument("task " + t.id + ": missing op");
    t.op = tj.at("op").get<std::string>();
    t.params = tj;
    config.tasks.push_back(std::move(t));
    ++auto_id;
  }
  // Every task must reference a resolvable space.
  for (const auto& t : config.tasks) config.resolve_space(t.space);
  return config;
}

SpaceSpec ExperimentConfig::resolve_space(const std::string& name) const {
  auto it = spaces.find(name);
  if (it != spaces.end()) return it->second;
  if (is_registry_name(name)) return registry_space(name);
  throw std::invalid_argument("task references undefined space: " + name);
}

RunResult run_config(const ExperimentConfig& config, const RunOptions& options) {
  const fs::path out_dir =
      options.output_dir.empty() ? config.output_dir : options.output_dir;
  fs::create_directories(out_dir);

  const std::string header =
      "task_id,space,operation,params_json,value,witness_json,elapsed_ms\n";

  std::vector<TaskOutcome> outcomes(config.tasks.size());
  std::vector<std::string> errors(config.tasks.size());

  // Tasks are independent; run up to `jobs` of them concurrently. Each
  // task writes its own file, the summary goes last.
  std::mutex next_mutex;
  std::size_t next = 0;
  auto worker = [&]() {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= config.tasks.size()) return;
        i = next++;
      }
      try {
        outcomes[i] = execute_task(config, config.tasks[i], options);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RunResult result;
  std::ostringstream summary;
  for (std::size_t i = 0; i < config.tasks.size(); ++i) {
    const TaskSpec& task = config.tasks[i];
    if (!errors[i].empty()) {
      result.exit_code = 2;
      result.failed_tasks.push_back(task.id);
      summary << "task " << task.id << ": error: " << errors[i] << "\n";
      if (!options.quiet)
        std::cerr << "task " << task.id << ": error: " << errors[i] << "\n";
      continue;
    }
    write_atomic(out_dir / ("task_" + task.id + ".csv"), header + outcomes[i].csv_row);
    if (outcomes[i].passed) {
      summary << "task " << task.id << ": ok value=" << format_value(outcomes[i].value)
              << "\n";
    } else {
      summary << "task " << task.id << ": FAILED (" << outcomes[i].note << ")\n";
      result.failed_tasks.push_back(task.id);
      if (result.exit_code == 0) result.exit_code = 1;
      if (!options.quiet) std::cerr << outcomes[i].note << "\n";
    }
  }
  summary << "seed " << config.seed << "\n";
  summary << (result.exit_code == 0 ? "all tasks passed\n" : "failures present\n");
  write_atomic(out_dir / "summary.txt", summary.str());
  if (!options.quiet)
    std::cout << "wrote " << config.tasks.size() << " task file(s) to "
              << out_dir.string() << "\n";
  return result;
}

}  // namespace gbw

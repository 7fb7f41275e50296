#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbw/constants.hpp"
#include "gbw/space.hpp"

#include "json.hpp"

namespace gbw {

// Outcome of one executable check. `passed == false` exactly when a
// counterexample payload is present; metrics hold named ratios and
// constants observed during the scan.
struct CheckReport {
  std::string name;
  long long instances_checked = 0;
  bool passed = true;
  std::optional<nlohmann::json> counterexample;
  std::map<std::string, double> metrics;
};

nlohmann::json to_json(const CheckReport& r);

// Parameters for the named norm constructions.
struct ConstructionParams {
  WeightSeq weights = WeightSeq::ones();     // renormed_l1 / schreier_em3
  double lambda = 0.0;                       // renormed_l1; 0 derives sup w / inf w
  std::vector<long long> k_list{4, 16, 64};  // schreier_m7 gap probe
  long long base_exp = -1;                   // schreier_m7 N; -1 picks the least
                                             // admissible N per k
  Index dim_cap = CoeffVector::kDefaultDimCap;
};

// Scans a construction's defining inequality over the budget.
//   renormed_l1   gamma_{ceil(lambda m)}(x) <= sigma_m(x) on weighted l1
//   schreier_m7   the sqrt(k)-vs-ln(k) indicator gap grows along k_list,
//                 plus a max-conservative spot check on small pairs
//   schreier_em3  gamma_{(N+1)m}(x) <= sigma-hat_m(x) on the sqrt-min-F
//                 Schreier norm, plus the unit-vector asymmetry witness
CheckReport check_construction(const std::string& name,
                               const ConstructionParams& params,
                               const SearchBudget& budget);

// Instance-level checks of the relation theorems. `lambda` parametrizes
// the property kind; every assertion is one the cited proof makes
// instance by instance on spaces whose suppression constant is 1.
CheckReport check_relation(const std::string& name, const SpaceSpec& space,
                           double lambda, const SearchBudget& budget);

const std::vector<std::string>& construction_check_names();
const std::vector<std::string>& relation_check_names();

}  // namespace gbw

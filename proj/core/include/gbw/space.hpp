#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gbw/coeff_vector.hpp"

#include "json.hpp"

namespace gbw {

// Weight sequences are a finite prefix followed by a tail rule, which is
// enough for every construction shipped here (eventually constant or
// periodic weights).
class WeightSeq {
 public:
  enum class TailType { Constant, Periodic };

  WeightSeq() : tail_type_(TailType::Constant), tail_value_(1.0) {}

  static WeightSeq ones() { return WeightSeq(); }
  static WeightSeq constant(double c);
  static WeightSeq periodic(std::vector<double> pattern);
  static WeightSeq prefix_then_constant(std::vector<double> prefix, double c);
  static WeightSeq prefix_then_periodic(std::vector<double> prefix,
                                        std::vector<double> pattern);

  double at(Index n) const;  // w(n), n >= 1
  double inf_over(Index hi) const;
  double sup_over(Index hi) const;

  const std::vector<double>& prefix() const { return prefix_; }
  TailType tail_type() const { return tail_type_; }
  double tail_value() const { return tail_value_; }
  const std::vector<double>& tail_pattern() const { return tail_pattern_; }

  // Distinct values taken on [1, hi] (small; prefix + one tail period).
  std::vector<double> values_over(Index hi) const;

  bool operator==(const WeightSeq&) const = default;

 private:
  std::vector<double> prefix_;
  TailType tail_type_;
  double tail_value_ = 1.0;
  std::vector<double> tail_pattern_;
};

enum class SpaceKind { WeightedL1, SchreierDichotomous, SchreierSqrtWeighted, PlainLp };

std::string to_string(SpaceKind k);
SpaceKind space_kind_from_string(const std::string& s);

// A named norm construction on the finite section [1, dim_cap].
//
//  WeightedL1           ||x|| = sum_n w(n) |x_n|
//  SchreierDichotomous  ||x|| = sup { sum_{n in F} w^F_{rank(n)} |x_n| } over
//                       F with min F >= |F| >= 1; rank weights are 1/sqrt(r)
//                       when F consists of powers of two, else 1/r
//  SchreierSqrtWeighted ||x|| = sup_{F : sqrt(min F) >= |F|} sum_{n in F} w(n) |x_n|
//  PlainLp              ||x|| = (sum_n |x_n|^p)^(1/p)
struct SpaceSpec {
  SpaceKind kind = SpaceKind::WeightedL1;
  WeightSeq weights;            // WeightedL1 / SchreierSqrtWeighted only
  Index dim_cap = CoeffVector::kDefaultDimCap;
  double p = 1.0;               // PlainLp only
  std::string name;             // optional registry label, not serialized

  bool is_schreier() const {
    return kind == SpaceKind::SchreierDichotomous ||
           kind == SpaceKind::SchreierSqrtWeighted;
  }

  // Throws InvalidSpaceError naming the violated requirement.
  void validate() const;

  std::string display_name() const { return name.empty() ? to_string(kind) : name; }
};

// All four kinds evaluate the norm through coefficient moduli only and the
// norm is entrywise monotone in them. That gives suppression
// unconditionality with constant 1, hence also quasi-greediness and a
// truncation-operator bound with constant 1, which several oracles and
// checks rely on.
bool suppression_unconditional_const_one(const SpaceSpec& space);

// Schreier admissibility of a nonempty index set under the space's family
// rule. Throws UnsupportedOperationError for non-Schreier kinds.
bool family_admissible(const SpaceSpec& space, const IndexSet& f);

bool is_power_of_two(Index n);

// Exact norm of x in the given space. For Schreier kinds the supremum is
// resolved by enumerating admissible subsets of supp(x), which requires
// |supp(x)| <= enum_limits().support_cap (EnumerationOverflowError beyond).
// The rank assignment in the dichotomous norm is resolved by pairing
// moduli sorted decreasingly with the decreasing rank weights.
double eval_norm(const SpaceSpec& space, const CoeffVector& x);

// Every nonempty admissible F contained in `support`, ordered by size then
// lexicographically. Schreier kinds only.
std::vector<IndexSet> admissible_sets(const SpaceSpec& space, const IndexSet& support);

double unit_vector_norm(const SpaceSpec& space, Index n);  // ||e_n||

// JSON wire format (exact key names):
//   {"kind": "...", "weights": {"prefix": [...], "tail": {...}},
//    "dim_cap": N, "p": ...}
// with tail either {"type":"constant","value":c} or
// {"type":"periodic","pattern":[...]}. "weights" and "p" may be omitted
// where the kind ignores them.
nlohmann::json to_json(const SpaceSpec& space);
SpaceSpec space_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WeightSeq& w);
WeightSeq weights_from_json(const nlohmann::json& j);

}  // namespace gbw

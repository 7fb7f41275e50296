#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbw/coeff_vector.hpp"
#include "gbw/greedy.hpp"
#include "gbw/space.hpp"

#include "json.hpp"

namespace gbw {

// Every greedy-type constant searched by the workbench. Parametrized kinds
// carry lambda >= 1; SuppUncond, Uncond and QuasiGreedy have none.
enum class ConstantTag {
  SuppUncond,
  Uncond,
  QuasiGreedy,
  Democracy,
  MaxConservative,
  Conservative,
  ReverseConservative,
  SLC,
  PSLC,
  LSLC,
  RSLC,
  AlmostGreedy,
  PartiallyGreedy,
  Greedy,
  DKPartial,
  ReversePartial,
  OmegaSLC,
  PsiPSLC,
};

std::string to_string(ConstantTag t);
ConstantTag constant_tag_from_string(const std::string& s);
bool tag_has_lambda(ConstantTag t);

struct ConstantKind {
  ConstantTag tag = ConstantTag::Democracy;
  double lambda = 1.0;

  ConstantKind() = default;
  ConstantKind(ConstantTag t, double l = 1.0) : tag(t), lambda(l) { validate(); }

  bool has_lambda() const { return tag_has_lambda(tag); }
  void validate() const;
  std::string display() const;
};

// The finite instance grid one estimator run scans. Estimates are exact
// maxima over this grid and therefore certified lower bounds for the true
// constants, never upper bounds.
struct SearchBudget {
  int max_support = 3;                 // |supp(x)| bound for vector scans
  std::vector<double> coeff_grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  Index window = 8;                    // index window [1, window]
  int max_m = 2;                       // greedy-sum sizes scanned
  int max_set = 4;                     // |A|, |B| bound in set scans (0 = none)
  long long ordering_cap = 12;         // greedy orderings per vector

  static SearchBudget standard() { return SearchBudget{}; }
  void validate() const;
};

// A self-contained instance achieving an estimate. Only the fields a kind
// quantifies over are populated; signs default to all +1 when absent.
struct Witness {
  std::optional<CoeffVector> x;
  std::optional<CoeffVector> x2;  // dominated comparison vector (Uncond)
  std::optional<IndexSet> A, B, D, Lambda;
  std::optional<SignVector> eps, delta;
  std::optional<long long> m;
  std::optional<GreedyOrdering> ordering;
};

struct ConstantEstimate {
  ConstantKind kind;
  double value = 0.0;            // exact max ratio over the scanned grid
  std::optional<Witness> witness;
  SearchBudget budget;
  bool domain_empty = false;     // no instance had a positive denominator
  long long instances_scanned = 0;
};

// Maximizes the kind's defining ratio over every instance in the budget.
// Deterministic: the witness is the first maximizer in the documented scan
// order (supports by size then lex, coefficient patterns over the grid's
// moduli, sets by size then lex). Signs are scanned implicitly: all four
// norm kinds read coefficients through their moduli, so each sign orbit is
// constant and the +1 representative stands for it.
ConstantEstimate estimate_constant(const SpaceSpec& space, const ConstantKind& kind,
                                   const SearchBudget& budget);

// Recomputes a witness's ratio definitionally (eval_norm + oracles, no
// table reuse). Estimates must reproduce to 1e-9.
double reevaluate(const SpaceSpec& space, const ConstantKind& kind,
                  const Witness& witness);

// Moves a witness across one of the proof constructions:
//   SLC(l)            -> AlmostGreedy(l) | Greedy(l)   via y = x + 1_eA + 1_dB
//   PSLC(l)           -> PartiallyGreedy(l)            via y = 1_D + 1_eA + x + 1_dB
//   AlmostGreedy(l)   -> OmegaSLC(l)
//   Greedy(l)         -> OmegaSLC(l)
//   PartiallyGreedy(l)-> PsiPSLC(l)
// plus the identity transport. Returns the derived instance and its
// achieved ratio for to_kind; on the shipped spaces (all suppression
// unconditional with constant 1) that ratio is >= the source ratio.
std::pair<Witness, double> witness_transport(const SpaceSpec& space,
                                             const ConstantKind& from_kind,
                                             const ConstantKind& to_kind,
                                             const Witness& witness);

// ceil(lambda * m) with a 1e-9 snap so dyadic lambdas stay exact.
long long ceil_scaled(double lambda, long long m);
// lhs <= rhs with the same snap, for cardinality constraints.
bool card_le(double lhs, double rhs);

nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const ConstantEstimate& e);
nlohmann::json to_json(const SearchBudget& b);
SearchBudget budget_from_json(const nlohmann::json& j);

}  // namespace gbw

#include "gbw/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gbw/errors.hpp"
#include "gbw/limits.hpp"

namespace gbw {

EnumLimits& enum_limits() {
  static EnumLimits limits;
  return limits;
}

WeightSeq WeightSeq::constant(double c) {
  WeightSeq w;
  w.tail_value_ = c;
  return w;
}

WeightSeq WeightSeq::periodic(std::vector<double> pattern) {
  if (pattern.empty()) throw std::invalid_argument("WeightSeq: empty period");
  WeightSeq w;
  w.tail_type_ = TailType::Periodic;
  w.tail_pattern_ = std::move(pattern);
  return w;
}

WeightSeq WeightSeq::prefix_then_constant(std::vector<double> prefix, double c) {
  WeightSeq w;
  w.prefix_ = std::move(prefix);
  w.tail_value_ = c;
  return w;
}

WeightSeq WeightSeq::prefix_then_periodic(std::vector<double> prefix,
                                          std::vector<double> pattern) {
  if (pattern.empty()) throw std::invalid_argument("WeightSeq: empty period");
  WeightSeq w;
  w.prefix_ = std::move(prefix);
  w.tail_type_ = TailType::Periodic;
  w.tail_pattern_ = std::move(pattern);
  return w;
}

double WeightSeq::at(Index n) const {
  if (n < 1) throw std::invalid_argument("WeightSeq: index must be >= 1");
  const Index len = static_cast<Index>(prefix_.size());
  if (n <= len) return prefix_[static_cast<std::size_t>(n - 1)];
  if (tail_type_ == TailType::Constant) return tail_value_;
  const Index off = (n - len - 1) % static_cast<Index>(tail_pattern_.size());
  return tail_pattern_[static_cast<std::size_t>(off)];
}

std::vector<double> WeightSeq::values_over(Index hi) const {
  std::vector<double> vals;
  const Index len = static_cast<Index>(prefix_.size());
  for (Index n = 1; n <= std::min(hi, len); ++n) vals.push_back(at(n));
  if (hi > len) {
    if (tail_type_ == TailType::Constant) {
      vals.push_back(tail_value_);
    } else {
      const Index period = static_cast<Index>(tail_pattern_.size());
      for (Index n = len + 1; n <= std::min(hi, len + period); ++n)
        vals.push_back(at(n));
    }
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

double WeightSeq::inf_over(Index hi) const {
  auto vals = values_over(hi);
  return vals.empty() ? 0.0 : vals.front();
}

double WeightSeq::sup_over(Index hi) const {
  auto vals = values_over(hi);
  return vals.empty() ? 0.0 : vals.back();
}

std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::WeightedL1: return "WeightedL1";
    case SpaceKind::SchreierDichotomous: return "SchreierDichotomous";
    case SpaceKind::SchreierSqrtWeighted: return "SchreierSqrtWeighted";
    case SpaceKind::PlainLp: return "PlainLp";
  }
  throw std::logic_error("unknown SpaceKind");
}

SpaceKind space_kind_from_string(const std::string& s) {
  if (s == "WeightedL1") return SpaceKind::WeightedL1;
  if (s == "SchreierDichotomous") return SpaceKind::SchreierDichotomous;
  if (s == "SchreierSqrtWeighted") return SpaceKind::SchreierSqrtWeighted;
  if (s == "PlainLp") return SpaceKind::PlainLp;
  throw InvalidSpaceError("unknown space kind: " + s);
}

void SpaceSpec::validate() const {
  if (dim_cap < 1) throw InvalidSpaceError("dim_cap must be >= 1");
  switch (kind) {
    case SpaceKind::WeightedL1: {
      const double lo = weights.inf_over(dim_cap);
      const double hi = weights.sup_over(dim_cap);
      if (!(lo > 0.0) || !std::isfinite(hi))
        throw InvalidSpaceError(
            "WeightedL1 weights must satisfy 0 < inf w <= sup w < inf over "
            "[1, dim_cap]; the basis would not be semi-normalized");
      break;
    }
    case SpaceKind::SchreierDichotomous:
      // Weights are fixed by the family rule; nothing user-supplied to check.
      break;
    case SpaceKind::SchreierSqrtWeighted: {
      const double lo = weights.inf_over(dim_cap);
      const double hi = weights.sup_over(dim_cap);
      if (!(lo > 0.0))
        throw InvalidSpaceError(
            "SchreierSqrtWeighted weights must be positive (semi-normalization)");
      if (hi > 1.0)
        throw InvalidSpaceError(
            "SchreierSqrtWeighted weights must satisfy 0 < w(n) <= 1");
      // The sub-unit set must be finite with recorded cardinality, so the
      // tail has to sit at 1 identically.
      bool tail_is_one = true;
      if (weights.tail_type() == WeightSeq::TailType::Constant) {
        tail_is_one = weights.tail_value() == 1.0;
      } else {
        for (double v : weights.tail_pattern()) tail_is_one = tail_is_one && v == 1.0;
      }
      if (static_cast<Index>(weights.prefix().size()) < dim_cap && !tail_is_one)
        throw InvalidSpaceError(
            "SchreierSqrtWeighted requires finitely many sub-unit weights: "
            "the tail rule must be identically 1");
      break;
    }
    case SpaceKind::PlainLp:
      if (!(p >= 1.0)) throw InvalidSpaceError("PlainLp requires p >= 1");
      break;
  }
}

bool suppression_unconditional_const_one(const SpaceSpec&) {
  // Each shipped kind computes the norm from |x_n| monotonically, so
  // dropping or shrinking coefficients never increases it.
  return true;
}

bool is_power_of_two(Index n) { return n >= 1 && (n & (n - 1)) == 0; }

namespace {

bool dichotomous_admissible(const IndexSet& f) {
  return !f.empty() && f.front() >= static_cast<Index>(f.size());
}

bool sqrt_admissible(const IndexSet& f) {
  if (f.empty()) return false;
  const Index sz = static_cast<Index>(f.size());
  return f.front() >= sz * sz;  // sqrt(min F) >= |F| for integers
}

// Value of one admissible F under the dichotomous rule: moduli sorted
// decreasingly against rank weights 1/sqrt(r) (F inside the powers of two)
// or 1/r (otherwise). Decreasing rank weights make the sorted pairing the
// optimal bijection.
double dichotomous_value(const IndexSet& f, const std::vector<double>& moduli) {
  bool in_d = true;
  for (Index n : f) in_d = in_d && is_power_of_two(n);
  std::vector<double> vals(moduli);
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  double total = 0.0;
  for (std::size_t r = 0; r < vals.size(); ++r) {
    const double w = in_d ? 1.0 / std::sqrt(static_cast<double>(r + 1))
                          : 1.0 / static_cast<double>(r + 1);
    total += w * vals[r];
  }
  return total;
}

}  // namespace

bool family_admissible(const SpaceSpec& space, const IndexSet& f) {
  switch (space.kind) {
    case SpaceKind::SchreierDichotomous: return dichotomous_admissible(f);
    case SpaceKind::SchreierSqrtWeighted: return sqrt_admissible(f);
    default:
      throw UnsupportedOperationError("not a Schreier space: " +
                                      to_string(space.kind));
  }
}

double eval_norm(const SpaceSpec& space, const CoeffVector& x) {
  space.validate();
  if (x.empty()) return 0.0;
  const IndexSet supp = x.support();
  if (supp.back() > space.dim_cap)
    throw std::invalid_argument("eval_norm: supp(x) exceeds the space dim_cap");

  switch (space.kind) {
    case SpaceKind::WeightedL1: {
      double total = 0.0;
      for (const auto& [n, v] : x.entries()) total += space.weights.at(n) * std::abs(v);
      return total;
    }
    case SpaceKind::PlainLp: {
      double total = 0.0;
      for (const auto& [n, v] : x.entries()) total += std::pow(std::abs(v), space.p);
      return std::pow(total, 1.0 / space.p);
    }
    case SpaceKind::SchreierDichotomous:
    case SpaceKind::SchreierSqrtWeighted: {
      const int k = static_cast<int>(supp.size());
      if (k > enum_limits().support_cap)
        throw EnumerationOverflowError(
            "Schreier norm over support of size " + std::to_string(k) +
            " exceeds the cap of " + std::to_string(enum_limits().support_cap));
      std::vector<double> mods(supp.size());
      for (std::size_t i = 0; i < supp.size(); ++i)
        mods[i] = std::abs(x.coeff(supp[i]));

      double best = 0.0;
      const std::uint32_t full = (k >= 32) ? 0xffffffffu : ((1u << k) - 1u);
      IndexSet f;
      std::vector<double> fmods;
      for (std::uint32_t mask = 1; mask <= full; ++mask) {
        f.clear();
        fmods.clear();
        for (int i = 0; i < k; ++i) {
          if (mask & (1u << i)) {
            f.push_back(supp[static_cast<std::size_t>(i)]);
            fmods.push_back(mods[static_cast<std::size_t>(i)]);
          }
        }
        if (space.kind == SpaceKind::SchreierSqrtWeighted) {
          if (!sqrt_admissible(f)) continue;
          double total = 0.0;
          for (std::size_t i = 0; i < f.size(); ++i)
            total += space.weights.at(f[i]) * fmods[i];
          best = std::max(best, total);
        } else {
          if (!dichotomous_admissible(f)) continue;
          best = std::max(best, dichotomous_value(f, fmods));
        }
      }
      return best;
    }
  }
  throw std::logic_error("unknown SpaceKind");
}

std::vector<IndexSet> admissible_sets(const SpaceSpec& space, const IndexSet& support) {
  if (!space.is_schreier())
    throw UnsupportedOperationError("not a Schreier space: " + to_string(space.kind));
  const IndexSet supp = sets::normalized(support);
  const int k = static_cast<int>(supp.size());
  if (k > enum_limits().support_cap)
    throw EnumerationOverflowError("admissible_sets over " + std::to_string(k) +
                                   " indices exceeds the cap");
  std::vector<IndexSet> out;
  const std::uint32_t full = (k == 0) ? 0u : ((1u << k) - 1u);
  for (std::uint32_t mask = 1; mask <= full && k > 0; ++mask) {
    IndexSet f;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) f.push_back(supp[static_cast<std::size_t>(i)]);
    if (family_admissible(space, f)) out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const IndexSet& a, const IndexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

double unit_vector_norm(const SpaceSpec& space, Index n) {
  return eval_norm(space, CoeffVector::unit(n, space.dim_cap));
}

nlohmann::json to_json(const WeightSeq& w) {
  nlohmann::json tail;
  if (w.tail_type() == WeightSeq::TailType::Constant) {
    tail = {{"type", "constant"}, {"value", w.tail_value()}};
  } else {
    tail = {{"type", "periodic"}, {"pattern", w.tail_pattern()}};
  }
  return {{"prefix", w.prefix()}, {"tail", tail}};
}

WeightSeq weights_from_json(const nlohmann::json& j) {
  std::vector<double> prefix;
  if (j.contains("prefix")) prefix = j.at("prefix").get<std::vector<double>>();
  if (!j.contains("tail")) return WeightSeq::prefix_then_constant(prefix, 1.0);
  const auto& tail = j.at("tail");
  const std::string type = tail.at("type").get<std::string>();
  if (type == "constant")
    return WeightSeq::prefix_then_constant(prefix, tail.at("value").get<double>());
  if (type == "periodic")
    return WeightSeq::prefix_then_periodic(
        prefix, tail.at("pattern").get<std::vector<double>>());
  throw InvalidSpaceError("weights.tail.type must be 'constant' or 'periodic'");
}

nlohmann::json to_json(const SpaceSpec& space) {
  nlohmann::json j;
  j["kind"] = to_string(space.kind);
  j["dim_cap"] = space.dim_cap;
  if (space.kind == SpaceKind::WeightedL1 ||
      space.kind == SpaceKind::SchreierSqrtWeighted)
    j["weights"] = to_json(space.weights);
  if (space.kind == SpaceKind::PlainLp) j["p"] = space.p;
  return j;
}

SpaceSpec space_from_json(const nlohmann::json& j) {
  SpaceSpec s;
  s.kind = space_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("dim_cap")) s.dim_cap = j.at("dim_cap").get<Index>();
  if (j.contains("weights")) {
    if (s.kind == SpaceKind::SchreierDichotomous)
      throw InvalidSpaceError(
          "SchreierDichotomous takes no free weights; they are fixed by the "
          "family rule");
    s.weights = weights_from_json(j.at("weights"));
  }
  if (j.contains("p")) s.p = j.at("p").get<double>();
  s.validate();
  return s;
}

}  // namespace gbw

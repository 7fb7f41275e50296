#include "gbw/registry.hpp"

#include <sstream>
#include <stdexcept>

namespace gbw {

const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names = {"unweighted_l1", "renormed_l1",
                                                 "schreier_m7", "schreier_em3"};
  return names;
}

bool is_registry_name(const std::string& name) {
  for (const auto& n : registry_names())
    if (n == name) return true;
  return false;
}

SpaceSpec registry_space(const std::string& name) {
  SpaceSpec s;
  s.name = name;
  if (name == "unweighted_l1") {
    s.kind = SpaceKind::WeightedL1;
    s.weights = WeightSeq::ones();
    return s;
  }
  if (name == "renormed_l1") {
    s.kind = SpaceKind::WeightedL1;
    s.weights = WeightSeq::periodic({1.0, 2.0});
    return s;
  }
  if (name == "schreier_m7") {
    s.kind = SpaceKind::SchreierDichotomous;
    s.dim_cap = Index{1} << 62;
    return s;
  }
  if (name == "schreier_em3") {
    s.kind = SpaceKind::SchreierSqrtWeighted;
    s.weights = WeightSeq::prefix_then_constant({1.0, 0.5}, 1.0);
    return s;
  }
  throw std::invalid_argument("unknown space name: " + name);
}

std::string describe_space(const std::string& name) {
  const SpaceSpec s = registry_space(name);
  std::ostringstream out;
  out << name << "\n";
  if (name == "unweighted_l1") {
    out << "  ||x|| = sum_n |x_n|\n"
        << "  The plain l1 norm on the finite section; every greedy-type\n"
        << "  constant equals 1 here, which makes it the calibration space.\n";
  } else if (name == "renormed_l1") {
    out << "  ||x|| = sum_n w(n) |x_n|,  w periodic (1, 2)\n"
        << "  Weighted l1 with bounded weights 0 < inf w <= sup w < inf.\n"
        << "  With lambda = sup w / inf w = 2 the canonical basis satisfies\n"
        << "  gamma_{ceil(lambda m)}(x) <= sigma_m(x) with constant 1, while\n"
        << "  equal-size symmetry for largest coefficients fails at constant 1\n"
        << "  (||e_i|| = w(i) differs across i).\n";
  } else if (name == "schreier_m7") {
    out << "  ||x|| = sup { sum_{n in F} w^F_{r(n)} |x_n| }\n"
        << "  over admissible F with min F >= |F| >= 1 and bijections\n"
        << "  r: F -> [1, |F|]; the rank weights are w^F_r = 1/sqrt(r) when\n"
        << "  F lies inside D = {2^j : j >= 0} and 1/r otherwise.\n"
        << "  Indicator vectors on k consecutive powers of two have norm\n"
        << "  ~ sqrt(k) while k consecutive non-powers give ~ ln k, so the\n"
        << "  basis is not conservative; it is lambda-max conservative for\n"
        << "  every lambda > 1.\n";
  } else if (name == "schreier_em3") {
    out << "  ||x|| = sup_{F : sqrt(min F) >= |F|} sum_{n in F} w(n) |x_n|\n"
        << "  with weights 0 < w(n) <= 1, finitely many below 1 (default\n"
        << "  w = (1, 1/2, 1, 1, ...), one sub-unit weight), and some i < j\n"
        << "  with w(i) > w(j). The basis fails partial symmetry for largest\n"
        << "  coefficients at constant 1 (||e_1|| > ||e_2||) yet satisfies\n"
        << "  gamma_{(N+1)m}(x) <= sigma-hat_m(x) with N = |{n : w(n) < 1}|.\n";
  }
  out << "  spec: " << to_json(s).dump() << "\n";
  return out.str();
}

}  // namespace gbw

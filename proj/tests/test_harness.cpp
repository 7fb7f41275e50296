#include <cmath>

#include "doctest.h"
#include "gbw/errors.hpp"
#include "gbw/harness.hpp"
#include "test_util.hpp"

using namespace gbw;

namespace {

SearchBudget check_budget(int support, Index window, int max_m = 2,
                          int max_set = 3) {
  SearchBudget b;
  b.max_support = support;
  b.window = window;
  b.max_m = max_m;
  b.max_set = max_set;
  b.coeff_grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
  return b;
}

}  // namespace

TEST_CASE("renormed_l1 construction check") {
  ConstructionParams params;
  params.weights = WeightSeq::periodic({1.0, 2.0});
  params.lambda = 2.0;
  SearchBudget b = check_budget(4, 8, 2);
  b.coeff_grid = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  const CheckReport report = check_construction("renormed_l1", params, b);
  CHECK(report.passed);
  CHECK_FALSE(report.counterexample);
  CHECK(report.instances_checked > 0);
  CHECK(report.metrics.at("max_gamma_over_sigma") <= 1.0 + 1e-9);

  ConstructionParams low = params;
  low.lambda = 1.5;  // below sup w / inf w
  CHECK_THROWS_AS(check_construction("renormed_l1", low, b), InvalidSpaceError);
}

TEST_CASE("schreier_m7 gap probe") {
  ConstructionParams params;
  params.k_list = {4, 16, 64};
  params.lambda = 2.0;
  const CheckReport report =
      check_construction("schreier_m7", params, check_budget(0, 10));
  CHECK(report.passed);
  CHECK(report.metrics.at("r_4") == doctest::Approx(1.3366).epsilon(1e-3));
  CHECK(report.metrics.at("r_16") == doctest::Approx(1.9719).epsilon(1e-3));
  CHECK(report.metrics.at("r_64") == doctest::Approx(3.0781).epsilon(1e-3));
  CHECK(report.metrics.at("max_delta_ratio") <=
        report.metrics.at("delta_bound") + 1e-9);

  ConstructionParams bad;
  bad.k_list = {4, 4};
  CHECK_THROWS_AS(check_construction("schreier_m7", bad, check_budget(0, 8)),
                  std::invalid_argument);
}

TEST_CASE("schreier_em3 construction check") {
  ConstructionParams params;
  params.weights = WeightSeq::prefix_then_constant({1.0, 0.5}, 1.0);
  const CheckReport report =
      check_construction("schreier_em3", params, check_budget(4, 8, 2));
  CHECK(report.passed);
  CHECK(report.metrics.at("n_w") == 1.0);
  CHECK(report.metrics.at("pslc_witness_i") == 1.0);
  CHECK(report.metrics.at("pslc_witness_j") == 2.0);
  CHECK(report.metrics.at("pslc_violation_ratio") == doctest::Approx(2.0));

  ConstructionParams overweight;
  overweight.weights = WeightSeq::prefix_then_constant({1.5}, 1.0);
  CHECK_THROWS_WITH_AS(
      check_construction("schreier_em3", overweight, check_budget(2, 6)),
      doctest::Contains("0 < w(n) <= 1"), InvalidSpaceError);

  ConstructionParams infinite;
  infinite.weights = WeightSeq::prefix_then_constant({1.0}, 0.5);
  CHECK_THROWS_WITH_AS(
      check_construction("schreier_em3", infinite, check_budget(2, 6)),
      doctest::Contains("finite"), InvalidSpaceError);

  ConstructionParams monotone;
  monotone.weights = WeightSeq::prefix_then_constant({0.5, 1.0}, 1.0);
  CHECK_THROWS_WITH_AS(
      check_construction("schreier_em3", monotone, check_budget(2, 6)),
      doctest::Contains("non-monotone"), InvalidSpaceError);
}

TEST_CASE("unknown check names are rejected") {
  CHECK_THROWS_AS(check_construction("foo", ConstructionParams{}, check_budget(1, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_relation("bar", testutil::unweighted_l1(), 1.0,
                                 check_budget(1, 4)),
                  std::invalid_argument);
}

TEST_CASE("transport relation checks pass on the constructions") {
  for (const auto& space : testutil::three_constructions()) {
    for (double lambda : {1.0, 2.0}) {
      for (const char* name : {"m2_transport", "m1_transport", "m4_transport"}) {
        const CheckReport report =
            check_relation(name, space, lambda, check_budget(2, 6, 2, 3));
        INFO(name << " lambda=" << lambda << " on " << space.name);
        CHECK(report.passed);
        CHECK(report.instances_checked > 0);
      }
    }
  }
}

TEST_CASE("transported ratios reach the source maximum on weighted l1") {
  const CheckReport report = check_relation("m2_transport", testutil::weighted21(),
                                            1.0, check_budget(2, 6, 2, 3));
  CHECK(report.passed);
  CHECK(report.metrics.at("max_source_ratio") == doctest::Approx(2.0));
  CHECK(report.metrics.at("max_transported_ratio") >= 2.0 - 1e-9);
}

TEST_CASE("ep1 democracy check") {
  SearchBudget b = check_budget(0, 24);
  const CheckReport report =
      check_relation("ep1_democracy", testutil::renormed12(), 2.0, b);
  CHECK(report.passed);
  CHECK(report.metrics.at("max_ratio") <= 1.0 + 1e-9);
  CHECK(report.instances_checked > 0);

  // weighted l1 with spread 2 carries no 1-SLC certificate
  CHECK_THROWS_AS(check_relation("ep1_democracy", testutil::renormed12(), 1.0, b),
                  UnsupportedOperationError);
  CHECK_NOTHROW(check_relation("ep1_democracy", testutil::unweighted_l1(), 1.0, b));
  CHECK_THROWS_AS(check_relation("ep1_democracy", testutil::em3(), 2.0, b),
                  UnsupportedOperationError);
}

TEST_CASE("remaining relation checks pass on the constructions") {
  for (const auto& space : testutil::three_constructions()) {
    for (const char* name : {"m6_equivalence", "slc_eq_1slc", "omega_psi_forms"}) {
      const CheckReport report =
          check_relation(name, space, 1.0, check_budget(2, 6, 2, 3));
      INFO(name << " on " << space.name);
      CHECK(report.passed);
      CHECK(report.instances_checked > 0);
    }
    for (const char* name : {"lemma_l2_democracy", "m5_dk_conservative",
                             "m8_reverse"}) {
      const CheckReport report =
          check_relation(name, space, 1.5, check_budget(0, 9, 2, 4));
      INFO(name << " on " << space.name);
      CHECK(report.passed);
      CHECK(report.instances_checked > 0);
    }
  }
}

TEST_CASE("slc_eq_1slc sees only unit ratios on unweighted l1") {
  const CheckReport report = check_relation("slc_eq_1slc", testutil::unweighted_l1(),
                                            1.0, check_budget(2, 6, 2, 3));
  CHECK(report.passed);
  CHECK(report.metrics.at("max_padded_ratio") == doctest::Approx(1.0));
}

TEST_CASE("check reports are reproducible") {
  const SearchBudget b = check_budget(2, 6, 2, 3);
  const CheckReport a = check_relation("m2_transport", testutil::em3(), 2.0, b);
  const CheckReport c = check_relation("m2_transport", testutil::em3(), 2.0, b);
  CHECK(to_json(a).dump() == to_json(c).dump());
  CHECK(a.passed == (a.counterexample == std::nullopt));
}

TEST_CASE("report JSON shape") {
  const CheckReport report = check_relation("lemma_l2_democracy",
                                            testutil::unweighted_l1(), 1.0,
                                            check_budget(0, 6));
  const nlohmann::json j = to_json(report);
  for (const char* key :
       {"name", "instances_checked", "passed", "counterexample", "metrics"})
    CHECK(j.contains(key));
  CHECK(j["passed"] == true);
  CHECK(j["counterexample"].is_null());
}

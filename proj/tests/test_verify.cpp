#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "totalk/errors.hpp"
#include "totalk/verify.hpp"

using namespace totalk;

namespace {

bool has_witness(const VerifyReport& r, const std::string& element, const std::string& lhs, const std::string& rhs) {
  for (const auto& w : r.witnesses)
    if (w.element == element && w.lhs == lhs && w.rhs == rhs) return true;
  return false;
}

}  // namespace

TEST_CASE("conjugation obstruction at levels 3 and 9") {
  CHECK(verify_de_conjugation(3, 9).pass);
  auto r9 = verify_de_conjugation(9, 9);
  CHECK_FALSE(r9.pass);
  CHECK(has_witness(r9, "([1]_9,[1]_3)", "[6]_9", "[0]_9"));
  auto claims = verify_de_claims(9);
  CHECK(claims.pass);
}

TEST_CASE("modified family conjugates at every level") {
  auto r = verify_family_conjugation(12, 12, 24);
  CHECK(r.pass);
  CHECK(verify_family_conjugation(6, 6, 12).pass);
}

TEST_CASE("gamma profile") { CHECK(verify_gamma_compat(24).pass); }

TEST_CASE("refutation is stable across windows") {
  for (long j : {3L, 6L, 12L}) {
    auto r = refute_isomorphism_cases(j, 24);
    CAPTURE(j);
    CHECK(r.pass);
  }
  auto r = refute_isomorphism_cases(12, 24);
  CHECK(has_witness(r, "([0]_3,[1]_3)", "[1]_3", "[2]_3"));
  CHECK(r.witnesses.size() == 4);
  CHECK_THROWS_AS(refute_isomorphism_cases(2, 24), OutOfRange);
}

TEST_CASE("beta is automatic") {
  auto fx = check_beta_automatic(beta_automatic_fixture_input(12));
  CHECK(fx.outcome == "pass");
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto r = check_beta_automatic(random_beta_instance(seed, 8));
    CAPTURE(seed);
    CHECK(r.outcome == "pass");
  }
  auto bad = beta_automatic_fixture_input(12);
  bad.eta = negate_graded_hom(bad.eta);
  CHECK(check_beta_automatic(bad).outcome == "hypothesis-failed");
  auto mixed = beta_automatic_fixture_input(12);
  mixed.gamma = gamma_map(9);
  CHECK_THROWS_AS(check_beta_automatic(mixed), BoundMismatch);
}

TEST_CASE("cone probes classify correctly") {
  auto probes = cone_probe_catalog(24);
  CHECK(probes.size() == 30);
  int per[4] = {0, 0, 0, 0};
  for (const auto& p : probes) ++per[p.expected_condition];
  CHECK(per[0] > 0);
  CHECK(verify_cones(24).pass);
  CHECK_THROWS_AS(cone_probe_catalog(8), OutOfRange);
}

TEST_CASE("run_all") {
  VerifyConfig cfg;
  cfg.max_coeff = 12;
  cfg.checks = {"de", "fixtures"};
  auto reports = run_all(cfg);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].check == "fixtures");
  CHECK(reports[1].check == "de");
  for (const auto& r : reports) CHECK(r.pass);
  cfg.checks = {"nope"};
  CHECK_THROWS_AS(run_all(cfg), InputError);
  CHECK(check_names().size() == 7);
}

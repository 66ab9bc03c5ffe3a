#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "totalk/fixtures.hpp"

namespace totalk {

struct ReportWitness {
  std::string location;
  std::string element;
  std::string image;  // intermediate value, empty when not meaningful
  std::string lhs;
  std::string rhs;
};

struct SubVerdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerifyReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> parameters;
  bool pass = true;
  std::string outcome;  // "pass", "fail", or a check-specific refinement
  std::vector<SubVerdict> subs;
  std::vector<ReportWitness> witnesses;
  double elapsed_seconds = 0;

  void add(SubVerdict s) {
    pass = pass && s.pass;
    subs.push_back(std::move(s));
  }
};

// Automorphisms theta of K0(B;Z_k) with theta∘K0(phi;Z_k) = K0(phi';Z_k).
// Passes when at least one theta conjugates.
VerifyReport verify_de_conjugation(long k, long bound = 24);
// k = 3 conjugates (theta = -id among the solutions), k = 9 does not.
VerifyReport verify_de_claims(long bound = 24);

VerifyReport verify_family_conjugation(long max_level, long max_index, long bound = 24);
VerifyReport verify_gamma_compat(long bound = 24);
VerifyReport refute_isomorphism_cases(long window, long bound = 24);

struct BetaAutomaticInput {
  TotalKPtr b1, e1, b2, e2;
  GradedHom gamma;  // b1 -> b2
  GradedHom eta;    // e1 -> e2
  GradedHom iota1;  // b1 -> e1
  GradedHom iota2;  // b2 -> e2
};
// outcome: "pass", "hypothesis-failed" or "conclusion-failed".
VerifyReport check_beta_automatic(const BetaAutomaticInput& in, long window = 12);
BetaAutomaticInput beta_automatic_fixture_input(long bound = 24);
// Random f.g. K-data with split inclusions and functorially induced gamma, eta.
BetaAutomaticInput random_beta_instance(std::uint64_t seed, long bound = 12);
VerifyReport verify_beta_automatic_suite(long bound = 24, int random_instances = 100);

struct ConeProbe {
  std::string label;
  TotalElement element;
  int expected_condition;  // 0 = not positive
};
std::vector<ConeProbe> cone_probe_catalog(long bound = 24);
VerifyReport verify_cones(long bound = 24);

VerifyReport verify_fixture_tables(long bound = 24);

struct VerifyConfig {
  long max_coeff = 24;
  long window = 12;
  std::vector<std::string> checks;  // empty = all, in canonical order
};
const std::vector<std::string>& check_names();
// Throws InputError for an unknown check name; constituent errors become failed reports.
std::vector<VerifyReport> run_all(const VerifyConfig& config);

}  // namespace totalk

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "totalk/fixtures.hpp"
#include "totalk/verify.hpp"

namespace totalk {

struct AssertionSpec {
  std::string kind;      // square, exact_at, lambda_linear, cone_member
  std::string expected;  // commutes, fails, exact, positive, negative
  std::string pointer;   // JSON pointer of the assertion
  std::map<std::string, std::string> operands;
  std::vector<std::string> ops;  // lambda_linear
  long bound = 0;                // lambda_linear, 0 = the map's own bound
  long window = 12;
  std::optional<Element> element;  // cone_member
  std::optional<ConeSpec> cone;
  std::optional<TotalElement> total_element;
};

struct InputDocument {
  int version = 1;
  std::map<std::string, GroupExpr> groups;
  std::map<std::string, HomExpr> homs;
  std::map<std::string, TotalKPtr> totalk;
  std::map<std::string, GradedHom> graded_homs;
  std::vector<AssertionSpec> assertions;
  std::string canonical;  // canonical JSON text of the document
};

// Throws ParseError (syntax, with line and column) or SemanticError (with JSON pointer).
InputDocument parse_input(const std::string& text);
// Canonical JSON: sorted keys, defaults filled in, two-space indentation.
std::string serialize(const InputDocument& doc);

struct AssertionResult {
  std::size_t index = 0;
  std::string kind;
  std::string expected;
  std::string observed;
  bool pass = true;
  std::string detail;
  std::optional<ReportWitness> witness;
};
std::vector<AssertionResult> run_assertions(const InputDocument& doc);

struct ReportOptions {
  std::string format = "text";  // text or json
  bool timing = false;
  long max_coeff = 24;
  long window = 12;
};
std::string emit_report(const std::vector<VerifyReport>& reports, const ReportOptions& options);
std::string emit_assertions(const std::vector<AssertionResult>& results, const std::string& format);

// Integer matrix from whitespace-separated rows or a JSON array of rows.
IntMatrix parse_matrix_text(const std::string& text);
std::string emit_snf(const IntMatrix& m, const std::string& format);

std::string dump_fixture(const FixtureBundle& bundle, const std::string& format);

}  // namespace totalk

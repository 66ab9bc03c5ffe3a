#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "totalk/cli.hpp"
#include "totalk/errors.hpp"
#include "totalk/io.hpp"

using namespace totalk;

namespace {

const std::string kData = TOTALK_TEST_DATA;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_file(const std::string& name, const std::string& content) {
  std::string path = std::string(TOTALK_TEST_TMP) + "/" + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("minimal document") {
  auto doc = parse_input(R"({"groups": {"G": {"kind": "cyclic", "n": 3}}})");
  REQUIRE(doc.groups.count("G"));
  CHECK(fg_structure(doc.groups.at("G")) == FgAbGroup::cyclic(3));
  CHECK(doc.version == 1);
  CHECK(doc.assertions.empty());
}

TEST_CASE("canonical form round-trips") {
  for (const char* f : {"de_k9.json", "de_k3.json", "all_kinds.json"}) {
    CAPTURE(f);
    auto doc = parse_input(slurp(kData + "/" + f));
    std::string once = serialize(doc);
    auto again = parse_input(once);
    CHECK(serialize(again) == once);
    CHECK(again.assertions.size() == doc.assertions.size());
  }
  auto a = parse_input(R"({"homs": {"h": {"kind": "scalar", "domain": {"kind": "rational"}, "codomain": {"kind": "rational"}, "factor": "6/4"}}})");
  CHECK(serialize(a).find("\"3/2\"") != std::string::npos);
}

TEST_CASE("semantic errors carry a pointer") {
  try {
    parse_input(R"({"homs": {"x": {"kind": "negate", "of": "h"}}})");
    FAIL("expected an error");
  } catch (const SemanticError& e) {
    CHECK(std::string(e.what()).find("/homs/x/of") != std::string::npos);
    CHECK(std::string(e.what()).find("'h'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_input(R"({"homs": {"a": {"kind": "negate", "of": "b"}, "b": {"kind": "negate", "of": "a"}}})"), SemanticError);
  CHECK_THROWS_AS(parse_input(R"({"groups": {"G": {"kind": "cyclic", "n": 3, "extra": 1}}})"), SemanticError);
  CHECK_THROWS_AS(parse_input(R"({"groups": {"G": {"kind": "cyclic", "n": -3}}})"), SemanticError);
  CHECK_THROWS_AS(parse_input(R"({"frobnicate": 1})"), SemanticError);
  CHECK_THROWS_AS(parse_input(R"({"groups": {"A": {"kind": "cyclic", "n": 2}, "B": {"kind": "cyclic", "n": 4}},
    "homs": {"h": {"kind": "matrix", "domain": "A", "codomain": "B", "entries": [[1]]}}})"), SemanticError);
  CHECK_THROWS_AS(parse_input(R"([1, 2])"), SemanticError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_input("{\n  \"groups\": {\n    \"G\": [1,}\n}");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.column > 1);
  }
}

TEST_CASE("the k=9 square fails as expected") {
  auto doc = parse_input(slurp(kData + "/de_k9.json"));
  auto results = run_assertions(doc);
  REQUIRE(results.size() == 1);
  CHECK(results[0].observed == "fails");
  CHECK(results[0].pass);
  auto r = run({"check", kData + "/de_k9.json"});
  CHECK(r.code == 0);
  auto r3 = run({"check", kData + "/de_k3.json", "--format", "json"});
  CHECK(r3.code == 0);
  CHECK(r3.out.find("\"observed\": \"commutes\"") != std::string::npos);
}

TEST_CASE("every assertion kind runs") {
  auto r = run({"check", kData + "/all_kinds.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("SUMMARY 12 assertions, verdict PASS") != std::string::npos);
}

TEST_CASE("a wrong expectation exits 1 with a witness") {
  std::string doc = slurp(kData + "/de_k9.json");
  auto pos = doc.find("\"fails\"");
  doc.replace(pos, 7, "\"commutes\"");
  auto r = run({"check", temp_file("k9_wrong.json", doc)});
  CHECK(r.code == 1);
  CHECK(r.out.find("witness") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"check", "missing.json"}).code == 2);
  CHECK(run({"check", temp_file("bad.json", "{not json")}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"paper", "verify", "--case", "nope"}).code == 2);
  CHECK(run({"paper", "verify", "--max-coeff", "2"}).code == 2);
  CHECK(run({"paper", "verify", "--window", "abc"}).code == 2);
  CHECK(run({"fixture", "dump", "Nope"}).code == 2);
  CHECK(run({"fixture", "dump", "A", "--max-coeff", "6"}).code == 0);
  CHECK(run({"snf", temp_file("m.txt", "2 4 4\n-6 6 12\n10 -4 -16\n")}).code == 0);
  CHECK(run({"snf", temp_file("m_bad.txt", "1 2\n3\n")}).code == 2);
  CHECK(run({"snf", temp_file("m_tok.txt", "1 x\n")}).code == 2);
}

TEST_CASE("snf output") {
  auto r = run({"snf", temp_file("m2.json", "[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]"), "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"cokernel\": \"Z_2+Z_6+Z_12\"") != std::string::npos);
}

TEST_CASE("paper verify de at max-coeff 9") {
  auto r = run({"paper", "verify", "--case", "de", "--max-coeff", "9", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"element\": \"([1]_9,[1]_3)\"") != std::string::npos);
  CHECK(r.out.find("\"[6]_9\"") != std::string::npos);
  CHECK(r.out.find("\"[0]_9\"") != std::string::npos);
  CHECK(r.out.find("\"max_coeff\": 9") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  auto a = run({"paper", "verify", "--case", "refute", "--format", "json"});
  auto b = run({"paper", "verify", "--case", "refute", "--format", "json"});
  CHECK(a.out == b.out);
  CHECK(a.out.find("elapsed_seconds") == std::string::npos);
  auto t = run({"paper", "verify", "--case", "refute", "--format", "json", "--timing"});
  CHECK(t.out.find("elapsed_seconds") != std::string::npos);
}

TEST_CASE("empty report list") {
  std::string text = emit_report({}, ReportOptions{});
  CHECK(text.find("SUMMARY 0 checks, verdict PASS") != std::string::npos);
  ReportOptions json;
  json.format = "json";
  CHECK(emit_report({}, json).find("\"verdict\": \"PASS\"") != std::string::npos);
}

TEST_CASE("parser survives random bytes") {
  std::mt19937_64 rng(0xf00d);
  const std::string alphabet = "{}[]\":,0123456789-/ abcdefghijklmnopqrstuvwxyz\n\\ekinds";
  std::string seed = slurp(kData + "/all_kinds.json");
  int parse_errors = 0, semantic = 0, valid = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    switch (i % 3) {
      case 0: {
        std::size_t n = rng() % 64;
        for (std::size_t k = 0; k < n; ++k) s.push_back(static_cast<char>(rng() % 256));
        break;
      }
      case 1: {
        std::size_t n = rng() % 96;
        for (std::size_t k = 0; k < n; ++k) s.push_back(alphabet[rng() % alphabet.size()]);
        break;
      }
      default: {
        s = seed;
        for (int k = 0; k < 3; ++k) s[rng() % s.size()] = alphabet[rng() % alphabet.size()];
      }
    }
    try {
      parse_input(s);
      ++valid;
    } catch (const ParseError&) {
      ++parse_errors;
    } catch (const SemanticError&) {
      ++semantic;
    }
  }
  CHECK(parse_errors + semantic + valid == 10000);
  CHECK(parse_errors > 0);
}

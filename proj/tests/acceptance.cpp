#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "oracles.hpp"
#include "totalk/cli.hpp"
#include "totalk/errors.hpp"
#include "totalk/io.hpp"
#include "totalk/verify.hpp"

using namespace totalk;
using namespace totalk::testing;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs < limit_seconds;
  bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("CRITERION %2d %s  %s  [%.3fs / limit %gs]%s%s\n", id, pass ? "PASS" : "FAIL", title, secs, limit_seconds,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  if (o.pass && !in_time) std::printf("             time limit exceeded\n");
  std::fflush(stdout);
}

bool has_witness(const VerifyReport& r, const std::string& element, const std::string& lhs, const std::string& rhs) {
  for (const auto& w : r.witnesses)
    if ((element.empty() || w.element == element) && w.lhs == lhs && w.rhs == rhs) return true;
  return false;
}

const SubVerdict* find_sub(const VerifyReport& r, const std::string& prefix) {
  for (const auto& s : r.subs)
    if (s.name.rfind(prefix, 0) == 0) return &s;
  return nullptr;
}

int dispatch_quiet(std::vector<std::string> args, std::string* out = nullptr) {
  std::ostringstream o, e;
  int code = dispatch(args, o, e);
  if (out) *out = o.str();
  return code;
}

}  // namespace

int main() {
  criterion(1, "odd-part sequence starts 1,1,3,1,5,3,7,1", 0.001, [] {
    const long want[] = {1, 1, 3, 1, 5, 3, 7, 1};
    for (long k = 1; k <= 8; ++k)
      if (odd_part(k) != want[k - 1]) return Outcome{false, "l_" + std::to_string(k) + " = " + std::to_string(odd_part(k))};
    return Outcome{true, ""};
  });

  criterion(2, "mod-k groups of A, B, F1, F2 for k <= 24", 1.0, [] {
    auto r = verify_fixture_tables(24);
    for (const char* s : {"mod-k groups of A and B", "mod-k groups of F1 and F2"}) {
      const SubVerdict* v = find_sub(r, s);
      if (!v || !v->pass) return Outcome{false, std::string(s) + " failed"};
    }
    return Outcome{r.pass, r.pass ? "" : "fixture table report failed"};
  });

  criterion(3, "conjugation square: k=3 commutes with -id, k=9 fails for all 6 automorphisms", 1.0, [] {
    auto r3 = verify_de_conjugation(3, 24);
    auto r9 = verify_de_conjugation(9, 24);
    auto claims = verify_de_claims(24);
    const SubVerdict* nine = find_sub(claims, "k=9 no automorphism conjugates");
    bool six = nine && nine->pass && nine->detail.find("6 automorphisms, none") != std::string::npos;
    bool witness = has_witness(r9, "([1]_9,[1]_3)", "[6]_9", "[0]_9");
    const SubVerdict* neg = find_sub(claims, "k=3 conjugates");
    bool minus_id = neg && neg->pass && neg->detail.find("-id") != std::string::npos;
    bool ok = r3.pass && !r9.pass && six && witness && minus_id && claims.pass;
    return Outcome{ok, ok ? "witness ([1]_9,[1]_3): theta=id gives [6]_9 vs [0]_9, theta=-id gives -[6]_9 = [3]_9" : "mismatch"};
  });

  criterion(4, "modified family conjugates for all k <= j <= 12 including kappa squares", 5.0, [] {
    auto r = verify_family_conjugation(12, 12, 24);
    std::string detail;
    for (const auto& s : r.subs)
      if (!s.pass) detail += s.name + "; ";
    return Outcome{r.pass, detail};
  });

  criterion(5, "gamma commutes with beta and kappa, fails rho at every odd k in 3..23", 2.0, [] {
    GradedHom g = gamma_map(24);
    auto bk = check_lambda_linear(g, {LambdaOp::Beta, LambdaOp::Kappa}, 24);
    if (!bk.commutes) return Outcome{false, "a beta or kappa square fails"};
    auto rho = check_lambda_linear(g, {LambdaOp::Rho}, 24);
    for (long k = 3; k <= 23; k += 2) {
      bool found = false;
      for (const auto& sq : rho.squares)
        if (sq.op == LambdaOp::Rho && sq.j == 0 && sq.from == k) found = !sq.commutes;
      if (!found) return Outcome{false, "rho square at K0(;Z_" + std::to_string(k) + ") commutes"};
    }
    auto report = verify_gamma_compat(24);
    return Outcome{report.pass, std::to_string(bk.squares.size()) + " beta/kappa squares commute"};
  });

  criterion(6, "isomorphism refutation: four contradictions, clean control", 1.0, [] {
    auto r = refute_isomorphism_cases(12, 24);
    bool case1 = false;
    for (const auto& w : r.witnesses)
      if (w.location.rfind("case 1", 0) == 0) case1 = w.lhs == "[1]_3" && w.rhs == "[2]_3";
    int cases = 0;
    for (int c = 1; c <= 4; ++c) {
      const SubVerdict* s = find_sub(r, "case " + std::to_string(c));
      if (s && s->pass) ++cases;
    }
    const SubVerdict* control = find_sub(r, "control");
    bool ok = r.pass && case1 && cases == 4 && control && control->pass;
    return Outcome{ok, ok ? "case 1 witness [1]_3 vs [2]_3" : "mismatch"};
  });

  criterion(7, "K0(E_i;Z_n) = K1(E_i;Z_n) = Z_3 iff 3 | n, n <= 24", 1.0, [] {
    for (const char* name : {"E1", "E2"}) {
      auto e = load_fixture(name, 24);
      for (long n = 1; n <= 24; ++n)
        for (int j = 0; j < 2; ++j) {
          FgAbGroup want = n % 3 == 0 ? FgAbGroup::cyclic(3) : FgAbGroup::cyclic(1);
          if (!(fg_structure(e.k->group(j, n)) == want))
            return Outcome{false, std::string(name) + " at " + level_string(j, n)};
        }
    }
    return Outcome{true, ""};
  });

  criterion(8, "cone conditions classify 30 probes; gamma/eta square commutes", 2.0, [] {
    auto probes = cone_probe_catalog(24);
    int per_condition[3] = {0, 0, 0};
    for (const auto& p : probes)
      if (p.label.size() > 1 && p.label[0] == 'c' && p.label[1] >= '1' && p.label[1] <= '3') ++per_condition[p.label[1] - '1'];
    bool shape = probes.size() == 30 && per_condition[0] == 10 && per_condition[1] == 10 && per_condition[2] == 10;
    auto r = verify_cones(24);
    return Outcome{shape && r.pass, shape ? "" : "catalog shape differs"};
  });

  criterion(9, "beta is automatic on fixtures and 100 random instances; corrupted eta caught", 10.0, [] {
    auto fx = check_beta_automatic(beta_automatic_fixture_input(24));
    if (fx.outcome != "pass") return Outcome{false, "fixture outcome " + fx.outcome};
    for (int i = 0; i < 100; ++i) {
      auto r = check_beta_automatic(random_beta_instance(0xacce0000u + static_cast<std::uint64_t>(i), 12));
      if (r.outcome != "pass") return Outcome{false, "random instance " + std::to_string(i) + ": " + r.outcome};
    }
    auto bad = beta_automatic_fixture_input(24);
    bad.eta = negate_graded_hom(bad.eta);
    auto b = check_beta_automatic(bad);
    return Outcome{b.outcome == "hypothesis-failed", "corrupted eta: " + b.outcome};
  });

  criterion(10, "SNF oracle x1000, six-term x200, colimit oracle m <= 10, n <= 12", 60.0, [] {
    std::mt19937_64 rng(0x51f);
    for (int i = 0; i < 1000; ++i) {
      IntMatrix m = random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6, i % 3 == 0 ? 2 : 9);
      std::string why = snf_mismatch(m);
      if (!why.empty()) return Outcome{false, why + " for " + m.to_string()};
    }
    for (int i = 0; i < 200; ++i) {
      GroupExpr k0 = random_fg(rng, 2, 3), k1 = random_fg(rng, 2, 3);
      if (!six_term_exact(*build_total_k(k0, k1, 24), 24))
        return Outcome{false, "six-term fails for " + k0.to_string() + ", " + k1.to_string()};
    }
    for (int i = 0; i < 8; ++i) {
      std::string why = colimit_mismatch(rng, 10, 12);
      if (!why.empty()) return Outcome{false, why};
    }
    return Outcome{true, ""};
  });

  criterion(11, "CLI: verify all exits 0, deterministic JSON, malformed input exits 2, fuzz 10^4", 120.0, [] {
    if (dispatch_quiet({"paper", "verify", "--case", "all"}) != 0) return Outcome{false, "paper verify exit code"};
    std::string a, b;
    dispatch_quiet({"paper", "verify", "--case", "all", "--format", "json"}, &a);
    dispatch_quiet({"paper", "verify", "--case", "all", "--format", "json"}, &b);
    if (a != b || a.empty()) return Outcome{false, "JSON differs between runs"};
    if (dispatch_quiet({"check", "/nonexistent/input.json"}) != 2) return Outcome{false, "missing file exit code"};
    if (dispatch_quiet({"paper", "verify", "--max-coeff", "x"}) != 2) return Outcome{false, "bad flag exit code"};
    std::mt19937_64 rng(0xfa22);
    int handled = 0;
    for (int i = 0; i < 10000; ++i) {
      std::string s;
      std::size_t n = rng() % 80;
      for (std::size_t k = 0; k < n; ++k) s.push_back(static_cast<char>(rng() % 256));
      if (i % 2) s = "{\"groups\":{\"G\":" + s + "}}";
      try {
        parse_input(s);
        ++handled;
      } catch (const ParseError&) {
        ++handled;
      } catch (const SemanticError&) {
        ++handled;
      }
    }
    return Outcome{handled == 10000, std::to_string(handled) + "/10000 fuzz inputs handled"};
  });

  std::printf("ACCEPTANCE %s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

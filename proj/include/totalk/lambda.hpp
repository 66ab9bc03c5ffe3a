#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "totalk/coefficients.hpp"
#include "totalk/group_expr.hpp"

namespace totalk {

// Level (j, n): j in {0, 1}, n = 0 for integral coefficients, n >= 1 for Z_n.
using Level = std::pair<int, long>;

std::string level_string(int j, long n);

// Total K-theory truncated at coefficient bound N, with the Bockstein maps:
// rho(j,n): K_j -> K_j(;Z_n), beta(j,n): K_j(;Z_n) -> K_{1-j},
// kappa(j,from,to): K_j(;Z_from) -> K_j(;Z_to) when one of from, to divides the other.
// Up maps send [1]_m to (to/from)[1]_to, down maps send [1]_from to [1]_to.
class TotalK {
 public:
  explicit TotalK(long bound) : bound_(bound) {}

  long bound() const { return bound_; }
  bool has(int j, long n) const;
  const GroupExpr& group(int j, long n) const;
  bool has_rho(int j, long n) const { return rho_.count({j, n}) > 0; }
  bool has_beta(int j, long n) const { return beta_.count({j, n}) > 0; }
  bool has_kappa(int j, long from, long to) const { return kappa_.count({j, from, to}) > 0; }
  const HomExpr& rho(int j, long n) const;
  const HomExpr& beta(int j, long n) const;
  const HomExpr& kappa(int j, long from, long to) const;
  std::vector<std::tuple<int, long, long>> kappa_keys() const;

  void set_group(int j, long n, GroupExpr g);
  void set_rho(int j, long n, HomExpr h);
  void set_beta(int j, long n, HomExpr h);
  void set_kappa(int j, long from, long to, HomExpr h);

 private:
  long bound_;
  std::map<Level, GroupExpr> groups_;
  std::map<Level, HomExpr> rho_, beta_;
  std::map<std::tuple<int, long, long>, HomExpr> kappa_;
};

using TotalKPtr = std::shared_ptr<const TotalK>;

// Coefficient pairs (from, to) with from != to and one dividing the other, both in [1, N].
std::vector<std::pair<long, long>> kappa_pairs(long bound);

// K_j(;Z_n) = (K_j (x) Z_n) + Tor(K_{1-j}, Z_n), for n = 1..N.
TotalKPtr build_total_k(const GroupExpr& k0, const GroupExpr& k1, long bound);

class GradedHom {
 public:
  GradedHom() = default;
  GradedHom(TotalKPtr source, TotalKPtr target) : source_(std::move(source)), target_(std::move(target)) {}

  const TotalKPtr& source() const { return source_; }
  const TotalKPtr& target() const { return target_; }
  long bound() const;
  bool has(int j, long n) const { return maps_.count({j, n}) > 0; }
  const HomExpr& at(int j, long n) const;
  void set(int j, long n, HomExpr h);
  const std::map<Level, HomExpr>& components() const { return maps_; }

 private:
  TotalKPtr source_, target_;
  std::map<Level, HomExpr> maps_;
};

// Maps induced on every level by f_j: K_j(A) -> K_j(B), for builder-made TotalK.
GradedHom induced_graded_hom(const TotalKPtr& source, const TotalKPtr& target, const HomExpr& f0,
                             const HomExpr& f1);
GradedHom identity_graded_hom(const TotalKPtr& k);
GradedHom negate_graded_hom(const GradedHom& h);
GradedHom compose_graded_homs(const GradedHom& outer, const GradedHom& inner);

// Graded hom of equal levels, compared componentwise.
struct GradedEquality {
  bool equal = true;
  std::optional<Level> level;
  std::optional<HomWitness> witness;
};
GradedEquality graded_homs_equal(const GradedHom& f, const GradedHom& g, long window = 12);

// Sequence data for the F-construction: coordinate m carries map
// period[(m-1) % p], with integral components additionally scaled by scale(m).
struct FData {
  TotalKPtr a, b;
  std::vector<GradedHom> period;
  ScalarSequence integral_scale;
  // Map at coordinate m >= 1 on level (j, n).
  HomExpr map_at(long m, int j, long n) const;
};

TotalKPtr f_construction_k(const FData& data);

struct SquareResult {
  bool commutes = true;
  std::optional<HomWitness> witness;
};
// right∘top versus bottom∘left.
SquareResult check_square(const HomExpr& top, const HomExpr& right, const HomExpr& left, const HomExpr& bottom,
                          long window = 12);

struct SixTermNode {
  std::string position;
  bool exact = true;
  bool decided = true;  // false when only probe evidence is available
  std::string reason;
  std::string witness;
};

struct SixTermResult {
  bool exact = true;
  std::string verdict;  // "exact", "probe-verified" or "fails"
  std::vector<SixTermNode> nodes;
};
SixTermResult check_six_term(const TotalK& k, int j, long n, long window = 12);

enum class LambdaOp { Rho, Beta, Kappa };
const char* op_name(LambdaOp op);

struct LambdaSquare {
  LambdaOp op;
  int j = 0;
  long from = 0, to = 0;  // rho/beta: from = n
  bool commutes = true;
  std::optional<HomWitness> witness;
  std::string location() const;
};

struct LambdaResult {
  bool commutes = true;
  std::vector<LambdaSquare> squares;
};
// Throws BoundMismatch when the hom's levels do not reach the requested bound.
LambdaResult check_lambda_linear(const GradedHom& h, const std::set<LambdaOp>& ops, long bound, long window = 12);

struct KStarMaps {
  HomExpr k0, k1;
};
KStarMaps restrict_to_kstar(const GradedHom& h);

// f composed with multiplication by c on its codomain.
HomExpr scaled(const HomExpr& f, const Integer& c);

}  // namespace totalk

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "totalk/errors.hpp"
#include "totalk/lambda.hpp"

using namespace totalk;
using namespace totalk::testing;

namespace {

std::string structure(const TotalK& k, int j, long n) { return fg_structure(k.group(j, n)).to_string(); }

}  // namespace

TEST_CASE("builder levels") {
  auto k = build_total_k(GroupExpr::dyadic(), GroupExpr::cyclic(3), 9);
  CHECK(structure(*k, 0, 9) == "Z_3+Z_9");
  CHECK(structure(*k, 1, 9) == "Z_3");
  CHECK(structure(*k, 0, 4) == "0");
  auto z = build_total_k(GroupExpr::cyclic(0), GroupExpr::trivial(), 12);
  for (long n = 1; n <= 12; ++n) {
    CHECK(fg_structure(z->group(0, n)) == FgAbGroup::cyclic(n));
    CHECK(fg_structure(z->group(1, n)).is_trivial());
  }
  CHECK_THROWS_AS(build_total_k(GroupExpr::cyclic(0), GroupExpr::trivial(), 0), OutOfRange);
}

TEST_CASE("six-term exactness on random finitely generated data") {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 200; ++i) {
    GroupExpr k0 = random_fg(rng, 2, 3), k1 = random_fg(rng, 2, 3);
    auto k = build_total_k(k0, k1, 24);
    CAPTURE(k0.to_string());
    CAPTURE(k1.to_string());
    CHECK(six_term_exact(*k, 24));
  }
}

TEST_CASE("six-term check detects a broken boundary map") {
  auto k = build_total_k(GroupExpr::cyclic(0), GroupExpr::cyclic(3), 9);
  TotalK broken = *k;
  broken.set_beta(0, 3, HomExpr::zero(k->group(0, 3), k->group(1, 0)));
  auto r = check_six_term(broken, 0, 3);
  CHECK_FALSE(r.exact);
  CHECK(r.verdict == "fails");
  CHECK(check_six_term(*k, 0, 3).exact);
}

TEST_CASE("six-term on structured groups is probe-verified") {
  GroupExpr q = GroupExpr::rational();
  auto k = build_total_k(q, GroupExpr::cyclic(3), 6);
  auto r = check_six_term(*k, 0, 3);
  CHECK(r.exact);
  CHECK(r.verdict == "probe-verified");
}

TEST_CASE("kappa composites equal the composite coefficient map") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    GroupExpr g[2] = {random_fg(rng), random_fg(rng)};
    auto k = build_total_k(g[0], g[1], 24);
    for (long m = 2; m <= 12; ++m)
      for (long n = 2; m * n <= 24; ++n)
        for (int j = 0; j < 2; ++j) {
          HomExpr composite = HomExpr::compose(k->kappa(j, m * n, n), k->kappa(j, m, m * n));
          HomExpr direct = HomExpr::direct_sum_of(
              {tensor_coefficient_map(g[j], m, n, n), tor_coefficient_map(g[1 - j], m, n, n)});
          CHECK(homexpr_equal(composite, direct).equal);
        }
  }
}

TEST_CASE("induced maps are lambda-linear") {
  std::mt19937_64 rng(5);
  const std::set<LambdaOp> all{LambdaOp::Rho, LambdaOp::Beta, LambdaOp::Kappa};
  for (int i = 0; i < 30; ++i) {
    GroupExpr a0 = random_fg(rng), a1 = random_fg(rng), b0 = random_fg(rng), b1 = random_fg(rng);
    auto s = build_total_k(a0, a1, 12), t = build_total_k(b0, b1, 12);
    auto h = induced_graded_hom(s, t, random_hom(rng, a0, b0), random_hom(rng, a1, b1));
    CHECK(check_lambda_linear(h, all, 12).commutes);
  }
  auto s = build_total_k(GroupExpr::cyclic(0), GroupExpr::cyclic(3), 12);
  CHECK(check_lambda_linear(identity_graded_hom(s), all, 12).commutes);
  auto id = restrict_to_kstar(identity_graded_hom(s));
  CHECK(homexpr_equal(id.k0, HomExpr::identity(s->group(0, 0))).equal);
  CHECK(homexpr_equal(id.k1, HomExpr::identity(s->group(1, 0))).equal);
}

TEST_CASE("a map breaking beta naturality is caught") {
  auto s = build_total_k(GroupExpr::cyclic(0), GroupExpr::cyclic(3), 9);
  GradedHom h = identity_graded_hom(s);
  h.set(0, 3, HomExpr::zero(s->group(0, 3), s->group(0, 3)));
  auto r = check_lambda_linear(h, {LambdaOp::Beta}, 9);
  CHECK_FALSE(r.commutes);
  auto rk = check_lambda_linear(h, {LambdaOp::Rho}, 9);
  CHECK_FALSE(rk.commutes);
}

TEST_CASE("square checker basics") {
  GroupExpr z4 = GroupExpr::cyclic(4);
  HomExpr id = HomExpr::identity(z4);
  CHECK(check_square(id, id, id, id).commutes);
  HomExpr two = HomExpr::fg_matrix(z4, z4, IntMatrix::from_rows({{2}}));
  HomExpr three = HomExpr::fg_matrix(z4, z4, IntMatrix::from_rows({{3}}));
  auto r = check_square(two, id, id, three);
  CHECK_FALSE(r.commutes);
  REQUIRE(r.witness);
  // conjugating every corner by the automorphism 3 keeps the verdict
  auto c = [&](const HomExpr& h) { return HomExpr::compose(three, HomExpr::compose(h, three)); };
  CHECK(check_square(c(two), c(id), c(id), c(three)).commutes == r.commutes);
  CHECK(check_square(c(two), c(id), c(id), c(two)).commutes);
}

TEST_CASE("F-construction matches the truncated colimit") {
  std::mt19937_64 rng(2718);
  for (int inst = 0; inst < 8; ++inst) CHECK(colimit_mismatch(rng, 10, 12) == "");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "generators.hpp"
#include "totalk/errors.hpp"
#include "totalk/group_expr.hpp"

using namespace totalk;

namespace {

GroupExpr doubling_tail(const GroupExpr& base, IndexSet idx = IndexSet::Positive) {
  TailRule rule;
  rule.index_set = idx;
  rule.maps = {HomExpr::fg_matrix(base, base, IntMatrix::from_rows({{2}}))};
  return GroupExpr::tail_product(base, base, rule);
}

}  // namespace

TEST_CASE("finitely generated elements reduce canonically") {
  GroupExpr z9 = GroupExpr::cyclic(9);
  Element a = Element::fg(z9, {7});
  Element b = Element::fg(z9, {5});
  CHECK((a + b).to_string() == "[3]_9");
  CHECK((-a).to_string() == "[2]_9");
  CHECK(a.times(9).is_zero());
  GroupExpr g = GroupExpr::direct_sum({z9, GroupExpr::cyclic(3)});
  Element x = Element::sum(g, {Element::fg(z9, {1}), Element::fg(GroupExpr::cyclic(3), {1})});
  CHECK(x.to_string() == "([1]_9,[1]_3)");
  CHECK(fg_structure(g).to_string() == "Z_3+Z_9");
  CHECK(from_flat_coords(g, flat_coords(x)) == x);
}

TEST_CASE("flat coordinates round-trip on random direct sums") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    GroupExpr g = GroupExpr::direct_sum({totalk::testing::random_fg(rng), totalk::testing::random_fg(rng)});
    Element x = totalk::testing::random_element(rng, g);
    Element y = totalk::testing::random_element(rng, g);
    CHECK(from_flat_coords(g, flat_coords(x)) == x);
    CHECK((x + y) - y == x);
    CHECK((x - x).is_zero());
  }
}

TEST_CASE("dyadic and rational scalars") {
  GroupExpr d = GroupExpr::dyadic(), q = GroupExpr::rational();
  CHECK(Element::scalar(d, Rational(3, 4)).to_string() == "3/4");
  CHECK_THROWS_AS(Element::scalar(d, Rational(1, 3)), ShapeMismatch);
  CHECK(Element::scalar(q, Rational(1, 3)).to_string() == "1/3");
  CHECK(!is_finitely_generated(d));
  CHECK(!flat_orders(q));
  CHECK(is_member(Element::scalar(q, Rational(5, 8)), d));
  CHECK(!is_member(Element::scalar(q, Rational(5, 6)), d));
}

TEST_CASE("tail product coordinates follow the rule") {
  GroupExpr z = GroupExpr::cyclic(0);
  GroupExpr t = doubling_tail(z);
  Element x = Element::tail(t, Element::fg(z, {3}), {});
  CHECK(x.coordinate(1).to_string() == "6");
  CHECK(x.coordinate(40).to_string() == "6");
  Element y = Element::tail_from_values(t, Element::fg(z, {3}), {{2, Element::fg(z, {1})}});
  CHECK(y.coordinate(2).to_string() == "1");
  CHECK(y.coordinate(3).to_string() == "6");
  CHECK(y.tail_start() == 2);
  CHECK((y - x).base().is_zero());
  CHECK((y - x).coordinate(2).to_string() == "-5");
  CHECK((y - x).coordinate(5).is_zero());
  CHECK(y.to_string() == "(3,(6,1,...))");
  CHECK_THROWS(x.coordinate(0));
}

TEST_CASE("nonzero-integer index sets and odd factorial scales") {
  GroupExpr z = GroupExpr::cyclic(0);
  TailRule rule;
  rule.index_set = IndexSet::NonzeroInteger;
  rule.maps = {HomExpr::identity(z)};
  rule.scale = ScalarSequence::odd_factorial(1);
  GroupExpr t = GroupExpr::tail_product(z, z, rule);
  Element x = Element::tail(t, Element::fg(z, {1}), {});
  CHECK(x.coordinate(-3).to_string() == "3");
  CHECK(x.coordinate(5).to_string() == "15");
  CHECK(x.coordinate(6).to_string() == "45");
  CHECK(ScalarSequence::odd_factorial(2).at(5) == 3);
}

TEST_CASE("quotients by dyadics") {
  GroupExpr q = GroupExpr::rational(), d = GroupExpr::dyadic();
  GroupExpr qd = GroupExpr::quotient(q, d);
  Element a = Element::coset(qd, Element::scalar(q, Rational(1, 2)));
  CHECK(a.is_zero());
  Element b = Element::coset(qd, Element::scalar(q, Rational(4, 3)));
  Element c = Element::coset(qd, Element::scalar(q, Rational(1, 3)));
  CHECK(b == c);
  CHECK(b.times(3).is_zero());
}

TEST_CASE("hom expressions compose and compare") {
  GroupExpr z6 = GroupExpr::cyclic(6), z3 = GroupExpr::cyclic(3);
  HomExpr reduce = HomExpr::fg_matrix(z6, z3, IntMatrix::from_rows({{1}}));
  HomExpr twice = HomExpr::fg_matrix(z3, z3, IntMatrix::from_rows({{2}}));
  HomExpr neg = HomExpr::negate(reduce);
  CHECK(homexpr_equal(HomExpr::compose(twice, reduce), neg).equal);
  CHECK(homexpr_equal(HomExpr::sum(reduce, neg), HomExpr::zero(z6, z3)).equal);
  auto diff = homexpr_equal(reduce, neg);
  CHECK_FALSE(diff.equal);
  REQUIRE(diff.witness);
  CHECK(diff.witness->lhs.to_string() == "[1]_3");
  CHECK_THROWS_AS(HomExpr::compose(reduce, reduce), DomainMismatch);
  CHECK_THROWS_AS(HomExpr::fg_matrix(z3, z6, IntMatrix::from_rows({{1}})), DomainMismatch);
  CHECK(is_injective(twice) == std::optional<bool>(true));
  CHECK(is_injective(reduce) == std::optional<bool>(false));
}

TEST_CASE("family maps act coordinatewise") {
  GroupExpr z = GroupExpr::cyclic(0);
  GroupExpr t = doubling_tail(z);
  CHECK_THROWS(HomExpr::family(t, t, HomExpr::identity(z), CoordFamily::constant(HomExpr::negate(HomExpr::identity(z)))));
  Element x = Element::tail(t, Element::fg(z, {1}), {});
  HomExpr both = HomExpr::family(t, t, HomExpr::negate(HomExpr::identity(z)),
                                 CoordFamily::constant(HomExpr::negate(HomExpr::identity(z))));
  CHECK(both.apply(x) == -x);
  HomExpr pb = HomExpr::project_base(t);
  CHECK(pb.apply(x).to_string() == "1");
  CHECK(HomExpr::coordinate(t, 4).apply(x).to_string() == "2");
}

TEST_CASE("probe preimages through finite maps") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    GroupExpr a = totalk::testing::random_fg(rng), b = totalk::testing::random_fg(rng);
    HomExpr h = totalk::testing::random_hom(rng, a, b);
    Element x = totalk::testing::random_element(rng, a);
    auto p = preimage(h, h.apply(x));
    REQUIRE(p);
    CHECK(h.apply(*p) == h.apply(x));
  }
}

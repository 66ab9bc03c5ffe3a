#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "totalk/errors.hpp"
#include "totalk/fixtures.hpp"

using namespace totalk;

namespace {

long odd_by_division(long k) {
  while (k % 2 == 0) k /= 2;
  return k;
}

FgAbGroup orders(std::vector<Integer> os) { return presentation_from_orders(os).group; }

}  // namespace

TEST_CASE("odd parts") {
  std::vector<long> first;
  for (long k = 1; k <= 8; ++k) first.push_back(odd_part(k));
  CHECK(first == std::vector<long>{1, 1, 3, 1, 5, 3, 7, 1});
  for (long k = 1; k <= 200; ++k) CHECK(odd_part(k) == odd_by_division(k));
  CHECK(odd_part_factorial(5) == 15);
  CHECK(odd_part_factorial(6) == 45);
}

TEST_CASE("fixture names and loading") {
  CHECK(fixture_names().size() == 11);
  for (const auto& n : fixture_names()) CHECK(load_fixture(n, 12).name == n);
  CHECK_THROWS_AS(load_fixture("nope"), UnknownFixture);
  CHECK_THROWS_AS(load_fixture("A", 0), OutOfRange);
}

TEST_CASE("integral invariants of A, B and E1") {
  auto a = load_fixture("A", 12), b = load_fixture("B", 12), e = load_fixture("E1", 12);
  CHECK(a.k->group(0, 0).kind() == GroupKind::Dyadic);
  CHECK(fg_structure(a.k->group(1, 0)) == FgAbGroup::cyclic(3));
  REQUIRE(a.scale);
  CHECK(a.scale->to_string() == "1");
  CHECK(a.cone.kind == ConeKind::Nonnegative);
  REQUIRE(b.scale);
  CHECK(b.scale->to_string() == "3");
  CHECK(b.k->group(1, 0).is_trivial());
  CHECK(e.k->group(0, 0).kind() == GroupKind::DirectSum);
  CHECK(fg_structure(e.k->group(1, 0)) == FgAbGroup::cyclic(3));
  CHECK(e.graded_maps.count("iota"));
  CHECK(e.graded_maps.count("eta"));
  CHECK(e.maps.count("pi"));
}

TEST_CASE("mod-k tables") {
  auto a = load_fixture("A", 24), b = load_fixture("B", 24);
  auto f1 = load_fixture("F1", 24), f2 = load_fixture("F2", 24);
  auto e1 = load_fixture("E1", 24), e2 = load_fixture("E2", 24);
  for (long k = 1; k <= 24; ++k) {
    CAPTURE(k);
    long l = odd_by_division(k);
    bool three = k % 3 == 0;
    CHECK(fg_structure(a.k->group(0, k)) == (three ? orders({l, 3}) : orders({l})));
    CHECK(fg_structure(b.k->group(0, k)) == orders({l}));
    for (const auto* f : {&f1, &f2}) {
      CHECK(fg_structure(f->k->group(1, k)) == (three ? orders({3}) : orders({})));
      CHECK(fg_structure(f->k->group(0, k).base()) == fg_structure(a.k->group(0, k)));
      CHECK(fg_structure(f->k->group(0, k).component()) == orders({l}));
    }
    for (const auto* e : {&e1, &e2})
      for (int j = 0; j < 2; ++j) CHECK(fg_structure(e->k->group(j, k)) == (three ? orders({3}) : orders({})));
  }
}

TEST_CASE("omega examples") {
  auto apply = [](const HomExpr& h, std::vector<Integer> coords) { return h.apply(from_flat_coords(h.domain(), coords)); };
  HomExpr w = omega_map(3, false, 3), wp = omega_map(3, true, 3);
  CHECK(apply(w, {0, 1}).to_string() == "[1]_3");
  CHECK(apply(wp, {0, 1}).to_string() == "[2]_3");
  CHECK(apply(w, {1, 0}).is_zero());
  for (bool p : {false, true}) CHECK(apply(omega_map(4, p, 5), {1}).is_zero());
  CHECK(apply(omega_map(6, false, 5), {1}).to_string() == "[" + std::to_string(45 % 5) + "]_5");
  CHECK_THROWS_AS(omega_map(0, false, 3), OutOfRange);
  CHECK_THROWS_AS(omega_map(1, false, 25), OutOfRange);
}

TEST_CASE("gamma, zeta and eta components") {
  auto g = gamma_map(24);
  // F1 and F2 share coordinates, so identity means equal flat coordinates
  auto fixes_generators = [](const HomExpr& h) {
    auto n = flat_orders(h.domain())->size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Integer> c(n, 0);
      c[i] = 1;
      if (flat_coords(h.apply(from_flat_coords(h.domain(), c))) != c) return false;
    }
    return true;
  };
  CHECK(fixes_generators(g.at(1, 3)));
  CHECK(g.at(1, 3).apply(from_flat_coords(g.at(1, 3).domain(), {1})).to_string() == "[1]_3");
  CHECK(fg_structure(g.at(1, 5).codomain()).is_trivial());
  auto ks = restrict_to_kstar(g);
  CHECK(fixes_generators(ks.k1));
  Element one = Element::scalar(ks.k0.domain().base(), 1);
  Element x = Element::tail(ks.k0.domain(), one, {{1, Element::scalar(ks.k0.domain().component(), 5)}});
  Element gx = ks.k0.apply(x);
  CHECK(gx.base().to_string() == "1");
  for (long m = 1; m <= 8; ++m) CHECK(gx.coordinate(m).to_string() == x.coordinate(m).to_string());
  auto z = zeta_map(24);
  HomExpr z9 = z.at(0, 9);
  CHECK(homexpr_equal(z9, HomExpr::negate(HomExpr::identity(z9.domain()))).equal);
  auto eta = eta_map(24);
  CHECK(graded_homs_equal(eta, identity_graded_hom(eta.source())).equal);
  CHECK_THROWS_AS(iota_map(3, 12), OutOfRange);
}

TEST_CASE("cones on E1") {
  auto e = load_fixture("E1", 12);
  const GroupExpr& k0 = e.k->group(0, 0);
  GroupExpr q = GroupExpr::rational();
  Element y = Element::tail(bold_q(), Element::scalar(q, 5), {});
  Element half = Element::sum(k0, {Element::scalar(q, Rational(1, 2)), y});
  Element neg = Element::sum(k0, {Element::scalar(q, Rational(-1, 2)), y});
  CHECK(cone_membership(e.cone, half));
  CHECK_FALSE(cone_membership(e.cone, neg));
  CHECK(cone_membership(e.cone, half + half));
  REQUIRE(e.total_cone);
  HomExpr iota = iota_map(1, 12).at(0, 0);
  auto f1 = load_fixture("F1", 12);
  Element from_b = iota.apply(Element::tail(f1.k->group(0, 0), Element::scalar(GroupExpr::dyadic(), 1), {}));
  TotalElement t2{{{0, 0}, from_b}};
  CHECK(total_cone_condition(*e.total_cone, t2) == 2);
  Element zero_base = iota.apply(Element::tail(f1.k->group(0, 0), Element::zero(GroupExpr::dyadic()),
                                               {{1, Element::scalar(GroupExpr::dyadic(), 1)}}));
  TotalElement t3{{{0, 0}, zero_base}, {{1, 0}, from_flat_coords(e.k->group(1, 0), {1})}};
  CHECK(total_cone_condition(*e.total_cone, t3) == 0);
  TotalElement t3ok{{{0, 0}, zero_base}};
  CHECK(total_cone_condition(*e.total_cone, t3ok) == 3);
}

TEST_CASE("extension cone is closed under addition") {
  auto e = load_fixture("E1", 12);
  const GroupExpr& k0 = e.k->group(0, 0);
  GroupExpr q = GroupExpr::rational();
  std::mt19937_64 rng(17);
  auto random_x = [&] {
    Rational first(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 4));
    std::map<long, Element> dev;
    for (long m = -3; m <= 3; ++m)
      if (m != 0 && rng() % 2) dev.emplace(m, Element::scalar(q, Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3))));
    Element y = Element::tail(bold_q(), Element::scalar(q, Rational(static_cast<long>(rng() % 7) - 3)), dev);
    first.canonicalize();
    return Element::sum(k0, {Element::scalar(q, first), y});
  };
  int positives = 0;
  for (int i = 0; i < 300; ++i) {
    Element x = random_x(), y = random_x();
    if (cone_membership(e.cone, x) && cone_membership(e.cone, y)) {
      ++positives;
      CHECK(cone_membership(e.cone, x + y));
    }
  }
  CHECK(positives > 20);
}

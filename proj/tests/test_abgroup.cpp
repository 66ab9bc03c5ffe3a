#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <set>

#include "oracles.hpp"
#include "totalk/abgroup.hpp"
#include "totalk/errors.hpp"

using namespace totalk;
using namespace totalk::testing;

namespace {

// Brute-force automorphism count of Z_{d_1} + ... + Z_{d_t}.
std::size_t brute_aut_count(const std::vector<long>& orders) {
  std::vector<std::vector<long>> elems{{}};
  for (long d : orders) {
    std::vector<std::vector<long>> next;
    for (const auto& e : elems)
      for (long v = 0; v < d; ++v) {
        auto x = e;
        x.push_back(v);
        next.push_back(x);
      }
    elems = next;
  }
  std::size_t t = orders.size(), count = 0;
  std::vector<std::size_t> choice(t, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == t) {
      std::set<std::vector<long>> image;
      for (const auto& x : elems) {
        std::vector<long> y(t, 0);
        for (std::size_t g = 0; g < t; ++g)
          for (std::size_t c = 0; c < t; ++c) y[c] = (y[c] + x[g] * elems[choice[g]][c]) % orders[c];
        image.insert(y);
      }
      if (image.size() == elems.size()) ++count;
      return;
    }
    for (std::size_t e = 0; e < elems.size(); ++e) {
      bool ok = true;
      for (std::size_t c = 0; c < t; ++c) ok = ok && (orders[i] * elems[e][c]) % orders[c] == 0;
      if (!ok) continue;
      choice[i] = e;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

}  // namespace

TEST_CASE("smith form matches determinantal divisors on random matrices") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    long range = trial % 3 == 0 ? 2 : 9;
    IntMatrix m = random_matrix(rng, rows, cols, range);
    SmithForm f = smith_normal_form(m);
    CAPTURE(m.to_string());
    CHECK(snf_mismatch(m) == "");
    CHECK(f.rank == static_cast<std::size_t>(std::count_if(f.diagonal.begin(), f.diagonal.end(), [](const Integer& d) { return d != 0; })));
    for (std::size_t i = 0; i + 1 < f.diagonal.size(); ++i)
      if (f.diagonal[i + 1] != 0) CHECK(f.diagonal[i + 1] % f.diagonal[i] == 0);
  }
}

TEST_CASE("smith form of fixed matrices") {
  IntMatrix m = IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  auto f = smith_normal_form(m);
  CHECK(f.diagonal == std::vector<Integer>{2, 6, 12});
  CHECK(f.rank == 3);
  CHECK(smith_normal_form(IntMatrix(2, 3)).rank == 0);
}

TEST_CASE("cokernel presentations are canonical") {
  auto p = cokernel_presentation(IntMatrix::from_rows({{2, 0}, {0, 3}}));
  CHECK(p.group.to_string() == "Z_6");
  CHECK(presentation_from_orders({4, 0, 6, 1}).group.to_string() == "Z_2+Z_12+Z");
  CHECK(FgAbGroup::cyclic(0).to_string() == "Z");
  CHECK(FgAbGroup::cyclic(1).is_trivial());
  CHECK(FgAbGroup(0, {3, 9}).order() == 27);
  CHECK(FgAbGroup(0, {3, 9}).exponent() == 9);
}

TEST_CASE("automorphism counts match brute force") {
  for (const auto& orders : std::vector<std::vector<long>>{{9}, {3, 3}, {2, 4}, {2, 2, 2}, {3, 9}, {12}, {2, 6}}) {
    std::vector<Integer> os(orders.begin(), orders.end());
    FgAbGroup g = presentation_from_orders(os).group;
    CAPTURE(g.to_string());
    CHECK(enumerate_automorphisms(g).size() == brute_aut_count(orders));
  }
  CHECK(enumerate_automorphisms(FgAbGroup::cyclic(9)).size() == 6);
  CHECK(enumerate_automorphisms(FgAbGroup(0, {3, 3})).size() == 48);
  CHECK(enumerate_automorphisms(FgAbGroup(0, {2, 2, 2})).size() == 168);
  CHECK_THROWS_AS(enumerate_automorphisms(FgAbGroup::cyclic(0)), InfiniteGroup);
}

TEST_CASE("homomorphisms, kernels and exactness") {
  FgAbGroup z = FgAbGroup::cyclic(0), z2 = FgAbGroup::cyclic(2);
  FgHom twice = FgHom::scalar(z, 2);
  FgHom reduce(z, z2, IntMatrix::from_rows({{1}}));
  CHECK(is_exact_at(twice, reduce).exact);
  CHECK(is_injective(twice));
  CHECK_FALSE(is_surjective(twice));
  CHECK(is_surjective(reduce));
  CHECK_FALSE(is_exact_at(FgHom::scalar(z, 4), reduce).exact);
  CHECK_THROWS_AS(FgHom(z2, z, IntMatrix::from_rows({{1}})), DomainMismatch);
  auto ki = kernel_image(FgHom(FgAbGroup::cyclic(12), FgAbGroup::cyclic(12), IntMatrix::from_rows({{4}})));
  CHECK(ki.kernel.group.to_string() == "Z_4");
  CHECK(ki.image.group.to_string() == "Z_3");
  auto pre = preimage(reduce, {1});
  REQUIRE(pre);
  CHECK(mod_floor((*pre)[0], 2) == 1);
}

TEST_CASE("tensor and tor with cyclic groups") {
  auto tt = tensor_tor_cyclic(FgAbGroup::cyclic(12), 8);
  CHECK(tt.tensor.to_string() == "Z_4");
  CHECK(tt.tor.to_string() == "Z_4");
  auto zt = tensor_tor_cyclic(FgAbGroup::cyclic(0), 9);
  CHECK(zt.tensor.to_string() == "Z_9");
  CHECK(zt.tor.is_trivial());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto orders = totalk::testing::random_orders(rng, 2, 3);
    FgAbGroup g = presentation_from_orders(orders).group;
    long n = 1 + static_cast<long>(rng() % 24);
    auto t = tensor_tor_cyclic(g, n);
    Integer tensor_order = 1, tor_order = 1;
    for (const auto& d : orders) {
      Integer gcd;
      Integer nn = n;
      mpz_gcd(gcd.get_mpz_t(), d.get_mpz_t(), nn.get_mpz_t());
      tensor_order *= gcd;
      tor_order *= d == 0 ? Integer(1) : gcd;
    }
    CHECK(t.tensor.order() == tensor_order);
    CHECK(t.tor.order() == tor_order);
  }
}

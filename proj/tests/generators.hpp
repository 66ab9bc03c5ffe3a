#pragma once

#include <random>
#include <vector>

#include "totalk/group_expr.hpp"

namespace totalk::testing {

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long range) {
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = static_cast<long>(rng() % (2 * range + 1)) - range;
  return m;
}

// Orders of a random f.g. group: 0 for free summands, torsion orders from a small menu.
inline std::vector<Integer> random_orders(std::mt19937_64& rng, int max_free = 1, int max_torsion = 3) {
  static const long menu[] = {2, 3, 4, 5, 6, 8, 9, 10, 12, 25, 27, 100};
  std::vector<Integer> orders;
  int f = static_cast<int>(rng() % (max_free + 1));
  for (int i = 0; i < f; ++i) orders.push_back(0);
  int t = static_cast<int>(rng() % (max_torsion + 1));
  for (int i = 0; i < t; ++i) orders.push_back(menu[rng() % 12]);
  return orders;
}

inline GroupExpr random_fg(std::mt19937_64& rng, int max_free = 1, int max_torsion = 3) {
  return GroupExpr::fg(presentation_from_orders(random_orders(rng, max_free, max_torsion)).group);
}

// Random well-defined homomorphism between f.g. groups, on flat coordinates.
inline HomExpr random_hom(std::mt19937_64& rng, const GroupExpr& dom, const GroupExpr& cod) {
  auto src = *flat_orders(dom);
  auto dst = *flat_orders(cod);
  IntMatrix m(dst.size(), src.size());
  for (std::size_t r = 0; r < dst.size(); ++r)
    for (std::size_t c = 0; c < src.size(); ++c) {
      Integer v = static_cast<long>(rng() % 7) - 3;
      if (src[c] == 0) m(r, c) = v;
      else if (dst[r] == 0) m(r, c) = 0;
      else {
        Integer g;
        mpz_gcd(g.get_mpz_t(), src[c].get_mpz_t(), dst[r].get_mpz_t());
        m(r, c) = v * (dst[r] / g);
      }
    }
  return HomExpr::fg_matrix(dom, cod, m);
}

inline Element random_element(std::mt19937_64& rng, const GroupExpr& g) {
  auto orders = *flat_orders(g);
  std::vector<Integer> coords;
  for (const auto& o : orders) coords.push_back(o == 0 ? Integer(static_cast<long>(rng() % 21) - 10) : Integer(static_cast<long>(rng() % 1000)) % o);
  return from_flat_coords(g, coords);
}

}  // namespace totalk::testing

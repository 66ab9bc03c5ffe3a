#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "generators.hpp"
#include "totalk/lambda.hpp"

namespace totalk::testing {

inline Integer bareiss_det(std::vector<std::vector<Integer>> a) {
  std::size_t n = a.size();
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

// Invariant factors from determinantal divisors d_k = gcd of the k x k minors.
inline std::vector<Integer> oracle_invariants(const IntMatrix& m) {
  std::size_t r = std::min(m.rows(), m.cols());
  std::vector<Integer> out;
  Integer prev = 1;
  for (std::size_t k = 1; k <= r; ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    subsets(m.rows(), k, rs);
    subsets(m.cols(), k, cs);
    Integer g = 0;
    for (const auto& ri : rs)
      for (const auto& ci : cs) {
        std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = m(ri[i], ci[j]);
        Integer d = bareiss_det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    if (g == 0) {
      for (; k <= r; ++k) out.push_back(0);
      break;
    }
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

// Empty string when the Smith form of m agrees with the oracle, else a description.
inline std::string snf_mismatch(const IntMatrix& m) {
  SmithForm f = smith_normal_form(m);
  if (!(f.U * m * f.V == f.S)) return "U*M*V != S";
  if (!(f.U * f.U_inverse == IntMatrix::identity(m.rows()))) return "U not unimodular";
  if (!(f.V * f.V_inverse == IntMatrix::identity(m.cols()))) return "V not unimodular";
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (r != c && f.S(r, c) != 0) return "S not diagonal";
  if (f.diagonal != oracle_invariants(m)) return "invariant factors differ from determinantal divisors";
  return "";
}

inline bool six_term_exact(const TotalK& k, long bound) {
  for (int j = 0; j < 2; ++j)
    for (long n = 1; n <= bound; ++n) {
      auto r = check_six_term(k, j, n);
      if (!r.exact || r.verdict != "exact") return false;
    }
  return true;
}

// Order of x equals d (0: infinite order, tested up to 64).
inline bool has_order(const Element& x, const Integer& d) {
  if (d == 0) {
    for (long t = 1; t <= 64; ++t)
      if (x.times(t).is_zero()) return false;
    return true;
  }
  if (!x.times(d).is_zero()) return false;
  for (Integer p = 2; p <= d; ++p)
    if (d % p == 0 && x.times(d / p).is_zero()) return false;
  return true;
}

// Compares the F-construction with the direct system A + B^m, chi_m(a, b) = (a, b, phi_{m+1}(a)).
// For each stage m the embedding into the tail product must be a homomorphism, be inverted
// by reading off the first m coordinates, commute with chi_m, and preserve the orders of the
// canonical SNF generators of the stage; every tail element must come from a finite stage.
inline std::string colimit_mismatch(std::mt19937_64& rng, long max_stage, long max_level) {
  GroupExpr a0 = random_fg(rng, 1, 2), a1 = random_fg(rng, 1, 2), b0 = random_fg(rng, 1, 2), b1 = random_fg(rng, 1, 2);
  FData data;
  data.a = build_total_k(a0, a1, max_level);
  data.b = build_total_k(b0, b1, max_level);
  long period = 1 + static_cast<long>(rng() % 2);
  for (long p = 0; p < period; ++p)
    data.period.push_back(induced_graded_hom(data.a, data.b, random_hom(rng, a0, b0), random_hom(rng, a1, b1)));
  auto f = f_construction_k(data);
  for (int j = 0; j < 2; ++j)
    for (long n = 0; n <= max_level; ++n) {
      std::string at = level_string(j, n) + " over " + a0.to_string() + "," + a1.to_string() + " / " +
                       b0.to_string() + "," + b1.to_string();
      const GroupExpr& ga = data.a->group(j, n);
      const GroupExpr& gb = data.b->group(j, n);
      const GroupExpr& tp = f->group(j, n);
      for (long m = 0; m <= max_stage; ++m) {
        std::vector<GroupExpr> parts{ga};
        for (long i = 0; i < m; ++i) parts.push_back(gb);
        GroupExpr stage = GroupExpr::direct_sum(parts);
        std::vector<GroupExpr> next_parts = parts;
        next_parts.push_back(gb);
        GroupExpr next_stage = GroupExpr::direct_sum(next_parts);
        auto embed = [&](const Element& x, long len) {
          std::map<long, Element> values;
          for (long i = 1; i <= len; ++i) values.emplace(i, x.parts()[static_cast<std::size_t>(i)]);
          return Element::tail_from_values(tp, x.parts()[0], values);
        };
        for (int s = 0; s < 4; ++s) {
          Element x = random_element(rng, stage), y = random_element(rng, stage);
          Element ex = embed(x, m);
          std::vector<Element> read{ex.base()};
          for (long i = 1; i <= m; ++i) read.push_back(ex.coordinate(i));
          if (!(Element::sum(stage, read) == x)) return "readout fails at " + at;
          if (!(embed(x + y, m) == ex + embed(y, m))) return "embedding not additive at " + at;
          std::vector<Element> nx = x.parts();
          nx.push_back(data.period[static_cast<std::size_t>(m % period)].at(j, n).apply(x.parts()[0]));
          if (!(embed(Element::sum(next_stage, nx), m + 1) == ex)) return "bonding map mismatch at " + at;
        }
        Presentation pres = flat_presentation(stage);
        for (std::size_t g = 0; g < pres.group.generator_count(); ++g) {
          Element gen = from_flat_coords(stage, pres.from_canonical.column(g));
          if (!has_order(embed(gen, m), pres.group.generator_order(g))) return "generator order changes at " + at;
        }
      }
      for (int s = 0; s < 6; ++s) {
        std::map<long, Element> dev;
        long last = 1 + static_cast<long>(rng() % 6);
        for (long i = 1; i <= last; ++i) dev.emplace(i, random_element(rng, gb));
        Element z = Element::tail(tp, random_element(rng, ga), dev);
        std::map<long, Element> values;
        for (long i = 1; i <= std::max<long>(z.tail_start(), 0); ++i) values.emplace(i, z.coordinate(i));
        if (!(Element::tail_from_values(tp, z.base(), values) == z)) return "tail element outside the stages at " + at;
      }
    }
  return "";
}

}  // namespace totalk::testing

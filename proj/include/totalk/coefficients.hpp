#pragma once

#include "totalk/group_expr.hpp"

namespace totalk {

// G (x) Z_n and Tor(G, Z_n) with the reduction and the inclusion of the Tor part
// as the n-torsion of G.
struct CoefficientReduction {
  GroupExpr tensor;
  GroupExpr tor;
  HomExpr reduction;      // G -> G (x) Z_n
  HomExpr tor_inclusion;  // Tor(G, Z_n) -> G
};

// Throws UnsupportedKind for quotient groups.
const CoefficientReduction& coeff_reduce(const GroupExpr& g, long n);

// A preimage under the reduction G -> G (x) Z_n.
Element lift_from_tensor(const GroupExpr& g, long n, const Element& x);
// Inverse of the Tor inclusion on n-torsion elements of G.
Element tor_preimage(const GroupExpr& g, long n, const Element& y);

// Maps induced by the coefficient map Z_m -> Z_n, [1] -> c[1] (requires n | c m).
// On Tor the induced map is multiplication by c m / n on n-torsion.
HomExpr tensor_coefficient_map(const GroupExpr& g, long m, long n, const Integer& c);
HomExpr tor_coefficient_map(const GroupExpr& g, long m, long n, const Integer& c);

struct ReducedHom {
  HomExpr tensor;  // h (x) Z_n
  HomExpr tor;     // Tor(h, Z_n)
};
ReducedHom reduce_hom(const HomExpr& h, long n);

}  // namespace totalk

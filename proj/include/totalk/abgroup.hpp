#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "totalk/integer.hpp"

namespace totalk {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix operator*(const IntMatrix& other) const;
  bool operator==(const IntMatrix& other) const = default;
  IntMatrix transpose() const;
  std::vector<Integer> apply(const std::vector<Integer>& v) const;
  std::vector<Integer> column(std::size_t c) const;
  void set_column(std::size_t c, const std::vector<Integer>& v);
  std::vector<std::vector<Integer>> to_rows() const;
  std::string to_string() const;

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  // row i += q * row j
  void add_row_multiple(std::size_t i, std::size_t j, const Integer& q);
  // col i += q * col j
  void add_col_multiple(std::size_t i, std::size_t j, const Integer& q);
  void negate_row(std::size_t i);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// S = U * M * V with U, V unimodular and S diagonal, d_1 | d_2 | ... , d_i >= 0.
struct SmithForm {
  IntMatrix U, S, V;
  IntMatrix U_inverse, V_inverse;
  std::vector<Integer> diagonal;  // length min(rows, cols)
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const IntMatrix& m);

// Z^r + Z_{d_1} + ... + Z_{d_t} with 2 <= d_1 | ... | d_t.
// Canonical generators: the torsion generators first, then the free ones.
class FgAbGroup {
 public:
  FgAbGroup() = default;
  FgAbGroup(std::size_t free_rank, std::vector<Integer> torsion);
  static FgAbGroup cyclic(const Integer& n);  // n = 0 gives Z, n = 1 the trivial group

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Integer>& torsion() const { return torsion_; }
  std::size_t generator_count() const { return torsion_.size() + free_rank_; }
  // Order of a canonical generator, 0 for free generators.
  Integer generator_order(std::size_t i) const;
  std::vector<Integer> orders() const;
  bool is_finite() const { return free_rank_ == 0; }
  bool is_trivial() const { return generator_count() == 0; }
  Integer order() const;
  Integer exponent() const;

  std::vector<Integer> reduce(std::vector<Integer> coords) const;
  bool is_zero(const std::vector<Integer>& coords) const;
  std::vector<std::vector<Integer>> elements() const;  // finite groups only

  std::string to_string() const;
  std::string element_string(const std::vector<Integer>& coords) const;
  bool operator==(const FgAbGroup& other) const = default;

 private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> torsion_;
};

// Group given by generators and relations, together with coordinate changes
// between the given generators and the canonical ones of `group`.
struct Presentation {
  FgAbGroup group;
  IntMatrix to_canonical;    // canonical coords = to_canonical * given coords
  IntMatrix from_canonical;  // column i: canonical generator i in given coords
  std::size_t generator_count() const { return from_canonical.rows(); }
  std::vector<Integer> canonical(const std::vector<Integer>& coords) const;
};

// Relations are the columns of `relations`; rows index generators.
Presentation cokernel_presentation(const IntMatrix& relations);
Presentation cokernel_presentation(std::size_t generators, const IntMatrix& relations);
Presentation presentation_from_orders(const std::vector<Integer>& orders);

class FgHom {
 public:
  FgHom() = default;
  // Matrix on canonical generators; throws DomainMismatch if not well defined.
  FgHom(FgAbGroup domain, FgAbGroup codomain, IntMatrix matrix);
  static FgHom from_presentations(const Presentation& domain, const Presentation& codomain,
                                  const IntMatrix& matrix);
  static FgHom zero(FgAbGroup domain, FgAbGroup codomain);
  static FgHom identity(const FgAbGroup& group);
  static FgHom scalar(const FgAbGroup& group, const Integer& factor);

  const FgAbGroup& domain() const { return domain_; }
  const FgAbGroup& codomain() const { return codomain_; }
  const IntMatrix& matrix() const { return matrix_; }
  std::vector<Integer> apply(const std::vector<Integer>& coords) const;
  std::vector<Integer> image_of_generator(std::size_t i) const;
  bool is_zero() const;
  bool operator==(const FgHom& other) const;

 private:
  FgAbGroup domain_;
  FgAbGroup codomain_;
  IntMatrix matrix_;
};

FgHom compose_homs(const FgHom& outer, const FgHom& inner);
FgHom add_homs(const FgHom& f, const FgHom& g);
FgHom negate_hom(const FgHom& f);

struct HomComparison {
  bool equal = true;
  std::size_t generator = 0;
  std::vector<Integer> lhs, rhs;
};
HomComparison homs_equal(const FgHom& f, const FgHom& g);

struct Subgroup {
  FgAbGroup group;
  FgHom inclusion;
};

// Subgroup of `ambient` generated by the columns of `generators` (ambient coords).
Subgroup subgroup_generated(const FgAbGroup& ambient, const IntMatrix& generators);

struct KernelImage {
  Subgroup kernel;
  Subgroup image;
};
KernelImage kernel_image(const FgHom& h);

// Solves h(x) = y; returns a preimage in domain coordinates if one exists.
std::optional<std::vector<Integer>> preimage(const FgHom& h, const std::vector<Integer>& y);

bool is_injective(const FgHom& h);
bool is_surjective(const FgHom& h);

struct Exactness {
  bool exact = true;
  std::string reason;            // empty when exact
  std::vector<Integer> witness;  // middle-group coordinates
};
// Exactness of A -f-> B -g-> C at B; throws DomainMismatch when cod f != dom g.
Exactness is_exact_at(const FgHom& f, const FgHom& g);

// G (x) Z_n and Tor(G, Z_n) in canonical form, with the reduction G -> G (x) Z_n,
// the inclusion of Tor(G, Z_n) as the n-torsion of G, and lifts of tensor generators.
struct TensorTor {
  FgAbGroup tensor;
  FgAbGroup tor;
  FgHom reduction;
  FgHom tor_inclusion;
  IntMatrix tensor_lift;  // column i: G coords of a preimage of tensor generator i
};
TensorTor tensor_tor_cyclic(const FgAbGroup& g, const Integer& n);

// All automorphisms of a finite group. Throws InfiniteGroup, or BoundExceeded when
// |G| or the number of candidate generator images exceeds the bound.
std::vector<FgHom> enumerate_automorphisms(const FgAbGroup& g, std::size_t bound = 10000);

}  // namespace totalk

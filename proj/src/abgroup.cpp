#include "totalk/abgroup.hpp"

#include <algorithm>
#include <sstream>

#include "totalk/errors.hpp"

namespace totalk {

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ShapeMismatch("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (cols_ != other.rows_) throw ShapeMismatch("matrix product shape mismatch");
  IntMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<Integer> IntMatrix::apply(const std::vector<Integer>& v) const {
  if (v.size() != cols_) throw ShapeMismatch("vector length does not match matrix columns");
  std::vector<Integer> out(rows_, Integer(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

std::vector<Integer> IntMatrix::column(std::size_t c) const {
  std::vector<Integer> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
  return out;
}

void IntMatrix::set_column(std::size_t c, const std::vector<Integer>& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = v[i];
}

std::vector<std::vector<Integer>> IntMatrix::to_rows() const {
  std::vector<std::vector<Integer>> out(rows_, std::vector<Integer>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMatrix::add_row_multiple(std::size_t i, std::size_t j, const Integer& q) {
  if (q == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) += q * (*this)(j, c);
}

void IntMatrix::add_col_multiple(std::size_t i, std::size_t j, const Integer& q) {
  if (q == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) += q * (*this)(r, j);
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
}

// ---------------------------------------------------------------- Smith form

namespace {

struct SmithWork {
  IntMatrix A, U, Ui, V, Vi;

  void swap_rows(std::size_t i, std::size_t j) {
    A.swap_rows(i, j);
    U.swap_rows(i, j);
    Ui.swap_cols(i, j);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    A.swap_cols(i, j);
    V.swap_cols(i, j);
    Vi.swap_rows(i, j);
  }
  void add_row(std::size_t i, std::size_t j, const Integer& q) {
    A.add_row_multiple(i, j, q);
    U.add_row_multiple(i, j, q);
    Ui.add_col_multiple(j, i, -q);
  }
  void add_col(std::size_t i, std::size_t j, const Integer& q) {
    A.add_col_multiple(i, j, q);
    V.add_col_multiple(i, j, q);
    Vi.add_row_multiple(j, i, -q);
  }
  void negate_row(std::size_t i) {
    A.negate_row(i);
    U.negate_row(i);
    for (std::size_t r = 0; r < Ui.rows(); ++r) Ui(r, i) = -Ui(r, i);
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SmithWork w{m, IntMatrix::identity(rows), IntMatrix::identity(rows), IntMatrix::identity(cols),
              IntMatrix::identity(cols)};
  IntMatrix& A = w.A;
  const std::size_t diag = std::min(rows, cols);
  std::size_t t = 0;
  for (; t < diag; ++t) {
    // Smallest nonzero entry of the remaining block becomes the pivot.
    auto bring_smallest = [&](bool whole_block) {
      bool found = false;
      std::size_t bi = t, bj = t;
      Integer best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (!whole_block && i != t && j != t) continue;
          if (A(i, j) == 0) continue;
          Integer a = abs(A(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            bi = i;
            bj = j;
          }
        }
      if (found) {
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
      }
      return found;
    };
    if (!bring_smallest(true)) break;
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (A(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A(i, t).get_mpz_t(), A(t, t).get_mpz_t());
        w.add_row(i, t, -q);
        if (A(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (A(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A(t, j).get_mpz_t(), A(t, t).get_mpz_t());
        w.add_col(j, t, -q);
        if (A(t, j) != 0) dirty = true;
      }
      if (dirty) {
        bring_smallest(false);
        continue;
      }
      // Row and column are clear; enforce divisibility on the remaining block.
      bool fixed = true;
      for (std::size_t i = t + 1; i < rows && fixed; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(A(i, j).get_mpz_t(), A(t, t).get_mpz_t())) {
            w.add_row(t, i, 1);
            fixed = false;
            break;
          }
      if (fixed) break;
    }
    if (A(t, t) < 0) w.negate_row(t);
  }
  SmithForm out;
  out.rank = t;
  out.diagonal.assign(diag, Integer(0));
  for (std::size_t i = 0; i < diag; ++i) out.diagonal[i] = A(i, i);
  out.S = std::move(w.A);
  out.U = std::move(w.U);
  out.U_inverse = std::move(w.Ui);
  out.V = std::move(w.V);
  out.V_inverse = std::move(w.Vi);
  return out;
}

// ---------------------------------------------------------------- FgAbGroup

FgAbGroup::FgAbGroup(std::size_t free_rank, std::vector<Integer> torsion)
    : free_rank_(free_rank), torsion_(std::move(torsion)) {
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    if (torsion_[i] < 2) throw ShapeMismatch("invariant factors must be at least 2");
    if (i > 0 && !mpz_divisible_p(torsion_[i].get_mpz_t(), torsion_[i - 1].get_mpz_t()))
      throw ShapeMismatch("invariant factors must form a divisibility chain");
  }
}

FgAbGroup FgAbGroup::cyclic(const Integer& n) {
  if (n == 0) return FgAbGroup(1, {});
  Integer a = abs(n);
  if (a == 1) return FgAbGroup();
  return FgAbGroup(0, {a});
}

Integer FgAbGroup::generator_order(std::size_t i) const {
  return i < torsion_.size() ? torsion_[i] : Integer(0);
}

std::vector<Integer> FgAbGroup::orders() const {
  std::vector<Integer> out(torsion_);
  out.resize(generator_count(), Integer(0));
  return out;
}

Integer FgAbGroup::order() const {
  if (!is_finite()) throw InfiniteGroup("group " + to_string() + " is infinite");
  Integer o = 1;
  for (const auto& d : torsion_) o *= d;
  return o;
}

Integer FgAbGroup::exponent() const {
  if (!is_finite()) return 0;
  return torsion_.empty() ? Integer(1) : torsion_.back();
}

std::vector<Integer> FgAbGroup::reduce(std::vector<Integer> coords) const {
  if (coords.size() != generator_count())
    throw ShapeMismatch("coordinate vector of length " + std::to_string(coords.size()) +
                        " for group " + to_string());
  for (std::size_t i = 0; i < torsion_.size(); ++i) coords[i] = mod_floor(coords[i], torsion_[i]);
  return coords;
}

bool FgAbGroup::is_zero(const std::vector<Integer>& coords) const {
  auto r = reduce(coords);
  return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
}

std::vector<std::vector<Integer>> FgAbGroup::elements() const {
  Integer total = order();
  std::vector<std::vector<Integer>> out;
  std::vector<Integer> cur(torsion_.size(), Integer(0));
  for (Integer k = 0; k < total; ++k) {
    out.push_back(cur);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      cur[i] += 1;
      if (cur[i] < torsion_[i]) break;
      cur[i] = 0;
    }
  }
  return out;
}

std::string FgAbGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : torsion_) {
    os << (first ? "" : "+") << "Z_" << d.get_str();
    first = false;
  }
  if (free_rank_ > 0) {
    os << (first ? "" : "+") << "Z";
    if (free_rank_ > 1) os << "^" << free_rank_;
  }
  return os.str();
}

std::string FgAbGroup::element_string(const std::vector<Integer>& coords) const {
  auto r = reduce(coords);
  std::ostringstream os;
  if (r.empty()) return "0";
  if (r.size() > 1) os << "(";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) os << ",";
    if (i < torsion_.size())
      os << "[" << r[i].get_str() << "]_" << torsion_[i].get_str();
    else
      os << r[i].get_str();
  }
  if (r.size() > 1) os << ")";
  return os.str();
}

// ---------------------------------------------------------------- Presentation

std::vector<Integer> Presentation::canonical(const std::vector<Integer>& coords) const {
  return group.reduce(to_canonical.apply(coords));
}

Presentation cokernel_presentation(std::size_t generators, const IntMatrix& relations) {
  if (relations.rows() != generators) throw ShapeMismatch("relation matrix row count");
  SmithForm snf = smith_normal_form(relations);
  std::vector<std::size_t> kept;
  std::vector<Integer> torsion;
  for (std::size_t i = 0; i < snf.rank; ++i)
    if (snf.diagonal[i] != 1) {
      kept.push_back(i);
      torsion.push_back(snf.diagonal[i]);
    }
  for (std::size_t i = snf.rank; i < generators; ++i) kept.push_back(i);
  Presentation p;
  p.group = FgAbGroup(generators - snf.rank, torsion);
  p.to_canonical = IntMatrix(kept.size(), generators);
  p.from_canonical = IntMatrix(generators, kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (std::size_t j = 0; j < generators; ++j) {
      p.to_canonical(k, j) = snf.U(kept[k], j);
      p.from_canonical(j, k) = snf.U_inverse(j, kept[k]);
    }
  }
  return p;
}

Presentation cokernel_presentation(const IntMatrix& relations) {
  return cokernel_presentation(relations.rows(), relations);
}

Presentation presentation_from_orders(const std::vector<Integer>& orders) {
  IntMatrix rel(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) rel(i, i) = orders[i];
  return cokernel_presentation(orders.size(), rel);
}

// ---------------------------------------------------------------- FgHom

FgHom::FgHom(FgAbGroup domain, FgAbGroup codomain, IntMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.generator_count() || matrix_.cols() != domain_.generator_count())
    throw ShapeMismatch("matrix shape does not match " + domain_.to_string() + " -> " +
                        codomain_.to_string());
  for (std::size_t j = 0; j < matrix_.cols(); ++j) {
    auto col = codomain_.reduce(matrix_.column(j));
    Integer d = domain_.generator_order(j);
    if (d != 0) {
      std::vector<Integer> scaled(col);
      for (auto& x : scaled) x *= d;
      if (!codomain_.is_zero(scaled))
        throw DomainMismatch("not well defined: generator " + std::to_string(j) + " of order " +
                             d.get_str() + " maps to " + codomain_.element_string(col));
    }
    matrix_.set_column(j, col);
  }
}

FgHom FgHom::from_presentations(const Presentation& domain, const Presentation& codomain,
                                const IntMatrix& matrix) {
  IntMatrix canonical = codomain.to_canonical * matrix * domain.from_canonical;
  return FgHom(domain.group, codomain.group, canonical);
}

FgHom FgHom::zero(FgAbGroup domain, FgAbGroup codomain) {
  IntMatrix m(codomain.generator_count(), domain.generator_count());
  return FgHom(std::move(domain), std::move(codomain), std::move(m));
}

FgHom FgHom::identity(const FgAbGroup& group) {
  return FgHom(group, group, IntMatrix::identity(group.generator_count()));
}

FgHom FgHom::scalar(const FgAbGroup& group, const Integer& factor) {
  IntMatrix m = IntMatrix::identity(group.generator_count());
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) = factor;
  return FgHom(group, group, m);
}

std::vector<Integer> FgHom::apply(const std::vector<Integer>& coords) const {
  return codomain_.reduce(matrix_.apply(domain_.reduce(coords)));
}

std::vector<Integer> FgHom::image_of_generator(std::size_t i) const { return matrix_.column(i); }

bool FgHom::is_zero() const {
  for (std::size_t j = 0; j < matrix_.cols(); ++j)
    if (!codomain_.is_zero(matrix_.column(j))) return false;
  return true;
}

bool FgHom::operator==(const FgHom& other) const {
  return domain_ == other.domain_ && codomain_ == other.codomain_ && matrix_ == other.matrix_;
}

FgHom compose_homs(const FgHom& outer, const FgHom& inner) {
  if (!(outer.domain() == inner.codomain()))
    throw DomainMismatch("cannot compose: " + inner.codomain().to_string() + " vs " +
                         outer.domain().to_string());
  return FgHom(inner.domain(), outer.codomain(), outer.matrix() * inner.matrix());
}

FgHom add_homs(const FgHom& f, const FgHom& g) {
  if (!(f.domain() == g.domain()) || !(f.codomain() == g.codomain()))
    throw DomainMismatch("cannot add homs with different domains or codomains");
  IntMatrix m = f.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += g.matrix()(i, j);
  return FgHom(f.domain(), f.codomain(), m);
}

FgHom negate_hom(const FgHom& f) {
  IntMatrix m = f.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
  return FgHom(f.domain(), f.codomain(), m);
}

HomComparison homs_equal(const FgHom& f, const FgHom& g) {
  if (!(f.domain() == g.domain()) || !(f.codomain() == g.codomain()))
    throw DomainMismatch("comparing homs between different groups");
  HomComparison out;
  for (std::size_t j = 0; j < f.domain().generator_count(); ++j) {
    auto a = f.image_of_generator(j), b = g.image_of_generator(j);
    if (a != b) {
      out.equal = false;
      out.generator = j;
      out.lhs = a;
      out.rhs = b;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------- kernels and images

namespace {

IntMatrix diagonal_of(const std::vector<Integer>& orders) {
  IntMatrix d(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) d(i, i) = orders[i];
  return d;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

// Basis of the integer kernel of m, as columns.
IntMatrix integer_kernel(const IntMatrix& m) {
  SmithForm snf = smith_normal_form(m);
  IntMatrix out(m.cols(), m.cols() - snf.rank);
  for (std::size_t k = snf.rank; k < m.cols(); ++k)
    for (std::size_t i = 0; i < m.cols(); ++i) out(i, k - snf.rank) = snf.V(i, k);
  return out;
}

// Solves m z = y over the integers.
std::optional<std::vector<Integer>> integer_solve(const IntMatrix& m, const std::vector<Integer>& y) {
  SmithForm snf = smith_normal_form(m);
  auto uy = snf.U.apply(y);
  std::vector<Integer> w(m.cols(), Integer(0));
  for (std::size_t i = 0; i < uy.size(); ++i) {
    if (i < snf.rank) {
      if (!mpz_divisible_p(uy[i].get_mpz_t(), snf.diagonal[i].get_mpz_t())) return std::nullopt;
      w[i] = uy[i] / snf.diagonal[i];
    } else if (uy[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V.apply(w);
}

}  // namespace

Subgroup subgroup_generated(const FgAbGroup& ambient, const IntMatrix& generators) {
  const std::size_t k = generators.cols();
  if (generators.rows() != ambient.generator_count()) throw ShapeMismatch("generator matrix rows");
  IntMatrix kernel = integer_kernel(hconcat(generators, diagonal_of(ambient.orders())));
  IntMatrix relations(k, kernel.cols());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < kernel.cols(); ++j) relations(i, j) = kernel(i, j);
  Presentation p = cokernel_presentation(k, relations);
  IntMatrix incl = generators * p.from_canonical;
  return Subgroup{p.group, FgHom(p.group, ambient, incl)};
}

KernelImage kernel_image(const FgHom& h) {
  const FgAbGroup& dom = h.domain();
  const FgAbGroup& cod = h.codomain();
  IntMatrix lattice = integer_kernel(hconcat(h.matrix(), diagonal_of(cod.orders())));
  IntMatrix gens(dom.generator_count(), lattice.cols());
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < gens.cols(); ++j) gens(i, j) = lattice(i, j);
  return KernelImage{subgroup_generated(dom, gens), subgroup_generated(cod, h.matrix())};
}

std::optional<std::vector<Integer>> preimage(const FgHom& h, const std::vector<Integer>& y) {
  const FgAbGroup& cod = h.codomain();
  auto sol = integer_solve(hconcat(h.matrix(), diagonal_of(cod.orders())), cod.reduce(y));
  if (!sol) return std::nullopt;
  sol->resize(h.domain().generator_count());
  return h.domain().reduce(*sol);
}

bool is_injective(const FgHom& h) { return kernel_image(h).kernel.group.is_trivial(); }

bool is_surjective(const FgHom& h) {
  for (std::size_t i = 0; i < h.codomain().generator_count(); ++i) {
    std::vector<Integer> e(h.codomain().generator_count(), Integer(0));
    e[i] = 1;
    if (!preimage(h, e)) return false;
  }
  return true;
}

Exactness is_exact_at(const FgHom& f, const FgHom& g) {
  if (!(f.codomain() == g.domain()))
    throw DomainMismatch("exactness check: codomain " + f.codomain().to_string() +
                         " differs from domain " + g.domain().to_string());
  Exactness out;
  for (std::size_t j = 0; j < f.domain().generator_count(); ++j) {
    auto y = f.image_of_generator(j);
    if (!g.codomain().is_zero(g.apply(y))) {
      out.exact = false;
      out.reason = "image not contained in kernel";
      out.witness = y;
      return out;
    }
  }
  Subgroup ker = kernel_image(g).kernel;
  for (std::size_t j = 0; j < ker.group.generator_count(); ++j) {
    auto y = ker.inclusion.image_of_generator(j);
    if (!preimage(f, y)) {
      out.exact = false;
      out.reason = "kernel not contained in image";
      out.witness = y;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------- coefficients

TensorTor tensor_tor_cyclic(const FgAbGroup& g, const Integer& n) {
  if (n < 1) throw ShapeMismatch("coefficient modulus must be positive");
  std::vector<std::size_t> tensor_src, tor_src;
  std::vector<Integer> tensor_orders, tor_orders;
  for (std::size_t i = 0; i < g.generator_count(); ++i) {
    Integer d = g.generator_order(i);
    Integer c = gcd(d, n);  // gcd(0, n) = n
    if (c == 1) continue;
    tensor_src.push_back(i);
    tensor_orders.push_back(c);
    if (d != 0) {
      tor_src.push_back(i);
      tor_orders.push_back(c);
    }
  }
  TensorTor out;
  out.tensor = FgAbGroup(0, tensor_orders);
  out.tor = FgAbGroup(0, tor_orders);
  IntMatrix red(tensor_src.size(), g.generator_count());
  out.tensor_lift = IntMatrix(g.generator_count(), tensor_src.size());
  for (std::size_t k = 0; k < tensor_src.size(); ++k) {
    red(k, tensor_src[k]) = 1;
    out.tensor_lift(tensor_src[k], k) = 1;
  }
  out.reduction = FgHom(g, out.tensor, red);
  IntMatrix incl(g.generator_count(), tor_src.size());
  for (std::size_t k = 0; k < tor_src.size(); ++k)
    incl(tor_src[k], k) = g.generator_order(tor_src[k]) / tor_orders[k];
  out.tor_inclusion = FgHom(out.tor, g, incl);
  return out;
}

std::vector<FgHom> enumerate_automorphisms(const FgAbGroup& g, std::size_t bound) {
  if (!g.is_finite()) throw InfiniteGroup("automorphisms of infinite group " + g.to_string());
  if (g.order() > bound)
    throw BoundExceeded("group order " + g.order().get_str() + " exceeds bound " + std::to_string(bound));
  auto elements = g.elements();
  const std::size_t n = g.generator_count();
  std::vector<std::vector<std::vector<Integer>>> choices(n);
  Integer candidates = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& x : elements) {
      std::vector<Integer> y(x);
      for (auto& c : y) c *= g.generator_order(i);
      if (g.is_zero(y)) choices[i].push_back(x);
    }
    candidates *= static_cast<unsigned long>(choices[i].size());
  }
  if (candidates > Integer(bound) * Integer(bound))
    throw BoundExceeded("too many candidate endomorphisms (" + candidates.get_str() + ")");
  std::vector<FgHom> out;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    IntMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) m.set_column(j, choices[j][idx[j]]);
    FgHom h(g, g, m);
    if (is_injective(h)) out.push_back(h);
    std::size_t k = 0;
    while (k < n && ++idx[k] == choices[k].size()) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

}  // namespace totalk

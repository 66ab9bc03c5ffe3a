#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "totalk/abgroup.hpp"

namespace totalk {

enum class GroupKind { Fg, Dyadic, Rational, TailProduct, DirectSum, Quotient };
enum class IndexSet { Positive, NonzeroInteger };

const char* kind_name(GroupKind k);

// Scalar factor applied to the rule map at a given rank.
struct ScalarSequence {
  enum class Kind { One, OddFactorial };
  Kind kind = Kind::One;
  long divisor = 1;  // OddFactorial: factor l_{ceil(rank/divisor)!}

  static ScalarSequence one() { return {}; }
  static ScalarSequence odd_factorial(long divisor) { return {Kind::OddFactorial, divisor}; }
  Integer at(long rank) const;
  bool operator==(const ScalarSequence&) const = default;
  std::string to_string() const;
};

class GroupExpr;
class HomExpr;
class Element;
struct GroupNode;
struct HomNode;

// Eventual shape of the coordinates of a tail product: from rank `stabilization`
// on, coordinate m equals scale(rank) * maps[(rank - stabilization) % period](base).
// Below the stabilization rank the default coordinate is 0.
struct TailRule {
  IndexSet index_set = IndexSet::Positive;
  long stabilization = 1;
  std::vector<HomExpr> maps;
  ScalarSequence scale;

  long period() const { return static_cast<long>(maps.size()); }
  long rank(long coordinate) const;
  bool valid_coordinate(long coordinate) const;
};

class GroupExpr {
 public:
  GroupExpr();  // trivial group
  static GroupExpr fg(FgAbGroup group);
  static GroupExpr cyclic(const Integer& n);
  static GroupExpr trivial();
  static GroupExpr dyadic();
  static GroupExpr rational();
  static GroupExpr tail_product(GroupExpr base, GroupExpr component, TailRule rule);
  static GroupExpr direct_sum(std::vector<GroupExpr> summands);
  static GroupExpr quotient(GroupExpr ambient, GroupExpr sub);

  GroupKind kind() const;
  const FgAbGroup& fg_group() const;
  const std::vector<GroupExpr>& summands() const;
  const GroupExpr& base() const;
  const GroupExpr& component() const;
  const TailRule& rule() const;
  const GroupExpr& ambient() const;
  const GroupExpr& sub() const;

  // Structurally trivial (no nonzero elements).
  bool is_trivial() const;
  bool operator==(const GroupExpr& other) const;
  bool same_node(const GroupExpr& other) const { return node_ == other.node_; }
  const void* id() const { return node_.get(); }
  std::string to_string() const;

 private:
  explicit GroupExpr(std::shared_ptr<const GroupNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const GroupNode> node_;
};

class Element {
 public:
  static Element zero(const GroupExpr& group);
  static Element fg(const GroupExpr& group, std::vector<Integer> coords);
  static Element scalar(const GroupExpr& group, const Rational& value);
  static Element sum(const GroupExpr& group, std::vector<Element> parts);
  // Tail-product element from its deviations from the rule defaults.
  static Element tail(const GroupExpr& group, Element base, const std::map<long, Element>& deviations);
  // Tail-product element from explicit coordinate values (unlisted ones follow the rule).
  static Element tail_from_values(const GroupExpr& group, Element base,
                                  const std::map<long, Element>& values);
  static Element coset(const GroupExpr& group, const Element& representative);

  const GroupExpr& owner() const { return owner_; }
  const std::vector<Integer>& coords() const { return coords_; }
  const Rational& value() const { return value_; }
  const std::vector<Element>& parts() const { return children_; }
  const Element& base() const;
  const std::vector<std::pair<long, Element>>& deviations() const { return deviations_; }
  Element coordinate(long m) const;
  // Largest rank carrying a deviation (0 if none).
  long tail_start() const;
  const Element& representative() const;

  Element operator+(const Element& other) const;
  Element operator-() const;
  Element operator-(const Element& other) const;
  Element times(const Integer& k) const;
  bool operator==(const Element& other) const;
  bool is_zero() const;
  std::string to_string() const;

 private:
  explicit Element(GroupExpr owner) : owner_(std::move(owner)) {}
  GroupExpr owner_;
  std::vector<Integer> coords_;
  Rational value_;
  std::vector<Element> children_;
  std::vector<std::pair<long, Element>> deviations_;
};

// Default coordinate m of a tail product element with the given base.
Element default_coordinate(const GroupExpr& tail_product, const Element& base, long m);

// Expresses x (an element of an ambient group) as an element of `sub` if it lies there.
std::optional<Element> restrict_to(const Element& x, const GroupExpr& sub);
bool is_member(const Element& x, const GroupExpr& sub);

// Finitely generated structure: coordinates with respect to cyclic generators.
std::optional<std::vector<Integer>> flat_orders(const GroupExpr& g);
bool is_finitely_generated(const GroupExpr& g);
std::vector<Integer> flat_coords(const Element& x);
Element from_flat_coords(const GroupExpr& g, const std::vector<Integer>& coords);
Presentation flat_presentation(const GroupExpr& g);
// Canonical invariant-factor form of a finitely generated group expression.
FgAbGroup fg_structure(const GroupExpr& g);

// Exponent of a finite group expression, 0 when infinite or unknown.
Integer exponent_of(const GroupExpr& g);

// Probe elements: a generating set for f.g. parts and section/unit-vector
// families over the coordinate window for tail products.
std::vector<Element> probe_elements(const GroupExpr& g, long window);

enum class HomKind {
  FgMatrix,
  Scalar,
  DyadicToFinite,
  Identity,
  Zero,
  Negate,
  Sum,
  Compose,
  Family,
  Section,
  ProjectBase,
  Coordinate,
  Insert,
  Inject,
  Project,
  DirectSumOf,
  QuotientMap
};

const char* kind_name(HomKind k);

// Coordinate map family: explicit maps below the stabilization rank, periodic after.
struct CoordFamily {
  long stabilization = 1;
  std::vector<HomExpr> head;    // ranks 1 .. stabilization-1
  std::vector<HomExpr> period;  // ranks >= stabilization
  static CoordFamily constant(HomExpr map);
  static CoordFamily periodic(std::vector<HomExpr> maps);
  const HomExpr& at(long rank) const;
};

// How target coordinates pick source coordinates in a family map.
enum class IndexMap { Same, PairsToSigned };

class HomExpr {
 public:
  HomExpr();
  static HomExpr fg_matrix(GroupExpr domain, GroupExpr codomain, const IntMatrix& flat_matrix);
  static HomExpr scalar(GroupExpr domain, GroupExpr codomain, const Rational& factor);
  static HomExpr dyadic_to_finite(GroupExpr codomain, Element image_of_one);
  static HomExpr identity(GroupExpr group);
  static HomExpr zero(GroupExpr domain, GroupExpr codomain);
  static HomExpr negate(HomExpr h);
  static HomExpr sum(HomExpr f, HomExpr g);
  // outer after inner
  static HomExpr compose(HomExpr outer, HomExpr inner);
  // maps applied left to right
  static HomExpr chain(std::vector<HomExpr> maps);
  static HomExpr family(GroupExpr domain, GroupExpr codomain, HomExpr base_map, CoordFamily components,
                        IndexMap index_map = IndexMap::Same);
  static HomExpr section(GroupExpr codomain, HomExpr base_map);
  static HomExpr project_base(GroupExpr domain);
  static HomExpr coordinate(GroupExpr domain, long m);
  static HomExpr insert(GroupExpr codomain, long m);
  static HomExpr inject(GroupExpr codomain, std::size_t index);
  static HomExpr project(GroupExpr domain, std::size_t index);
  static HomExpr direct_sum_of(std::vector<HomExpr> maps);
  static HomExpr quotient_map(GroupExpr quotient);

  HomKind kind() const;
  const GroupExpr& domain() const;
  const GroupExpr& codomain() const;
  const std::vector<HomExpr>& children() const;
  const CoordFamily& components() const;
  IndexMap index_map() const;
  long index() const;
  const Rational& factor() const;
  const Element& image_of_one() const;
  const IntMatrix& flat_matrix() const;

  Element apply(const Element& x) const;
  // Coordinate rank beyond which the map is periodic on unit vectors.
  long horizon() const;
  bool structurally_equal(const HomExpr& other) const;
  std::string to_string() const;

 private:
  explicit HomExpr(std::shared_ptr<const HomNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const HomNode> node_;
};

struct HomWitness {
  Element probe;
  Element lhs;
  Element rhs;
};

struct HomEquality {
  bool equal = true;
  std::optional<HomWitness> witness;
};

// Exact equality by evaluation on a complete probe set.
HomEquality homexpr_equal(const HomExpr& f, const HomExpr& g, long window = 12);

// Finitely generated homs as FgHom on canonical generators.
FgHom to_fg_hom(const HomExpr& h);

// Preimage under an injective structural map (inclusions, injections, families of those).
std::optional<Element> preimage(const HomExpr& h, const Element& y);

// Injectivity, when structurally decidable.
std::optional<bool> is_injective(const HomExpr& h);

}  // namespace totalk

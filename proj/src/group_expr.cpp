#include "totalk/group_expr.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "totalk/errors.hpp"

namespace totalk {

struct GroupNode {
  GroupKind kind = GroupKind::Fg;
  FgAbGroup fg;
  std::vector<GroupExpr> children;
  TailRule rule;
};

struct HomNode {
  HomKind kind = HomKind::Zero;
  GroupExpr domain, codomain;
  std::vector<HomExpr> children;
  CoordFamily family;
  IndexMap index_map = IndexMap::Same;
  long index = 0;
  Rational factor;
  std::vector<Element> images;
  IntMatrix matrix;
  long horizon = 0;
};

const char* kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::Fg: return "fg";
    case GroupKind::Dyadic: return "dyadic";
    case GroupKind::Rational: return "rational";
    case GroupKind::TailProduct: return "tail_product";
    case GroupKind::DirectSum: return "sum";
    case GroupKind::Quotient: return "quotient";
  }
  return "?";
}

const char* kind_name(HomKind k) {
  switch (k) {
    case HomKind::FgMatrix: return "matrix";
    case HomKind::Scalar: return "scalar";
    case HomKind::DyadicToFinite: return "dyadic_to_finite";
    case HomKind::Identity: return "identity";
    case HomKind::Zero: return "zero";
    case HomKind::Negate: return "negate";
    case HomKind::Sum: return "sum";
    case HomKind::Compose: return "compose";
    case HomKind::Family: return "family";
    case HomKind::Section: return "section";
    case HomKind::ProjectBase: return "project_base";
    case HomKind::Coordinate: return "coordinate";
    case HomKind::Insert: return "insert";
    case HomKind::Inject: return "inject";
    case HomKind::Project: return "project";
    case HomKind::DirectSumOf: return "direct_sum";
    case HomKind::QuotientMap: return "quotient_map";
  }
  return "?";
}

// ---------------------------------------------------------------- ScalarSequence / TailRule

Integer ScalarSequence::at(long rank) const {
  if (kind == Kind::One) return 1;
  long j = (rank + divisor - 1) / divisor;
  return odd_part_factorial(std::max(j, 0L));
}

std::string ScalarSequence::to_string() const {
  if (kind == Kind::One) return "one";
  return "odd_factorial/" + std::to_string(divisor);
}

long TailRule::rank(long coordinate) const {
  return index_set == IndexSet::Positive ? coordinate : std::labs(coordinate);
}

bool TailRule::valid_coordinate(long coordinate) const {
  return index_set == IndexSet::Positive ? coordinate >= 1 : coordinate != 0;
}

// ---------------------------------------------------------------- GroupExpr

namespace {

std::shared_ptr<const GroupNode> make_group(GroupNode n) {
  return std::make_shared<const GroupNode>(std::move(n));
}

const std::shared_ptr<const GroupNode>& trivial_node() {
  static const auto node = make_group(GroupNode{});
  return node;
}

long lcm_long(long a, long b) { return std::lcm(std::max(a, 1L), std::max(b, 1L)); }

}  // namespace

GroupExpr::GroupExpr() : node_(trivial_node()) {}

GroupExpr GroupExpr::fg(FgAbGroup group) {
  GroupNode n;
  n.fg = std::move(group);
  return GroupExpr(make_group(std::move(n)));
}

GroupExpr GroupExpr::cyclic(const Integer& n) { return fg(FgAbGroup::cyclic(n)); }

GroupExpr GroupExpr::trivial() { return GroupExpr(); }

GroupExpr GroupExpr::dyadic() {
  static const GroupExpr g = [] {
    GroupNode n;
    n.kind = GroupKind::Dyadic;
    return GroupExpr(make_group(std::move(n)));
  }();
  return g;
}

GroupExpr GroupExpr::rational() {
  static const GroupExpr g = [] {
    GroupNode n;
    n.kind = GroupKind::Rational;
    return GroupExpr(make_group(std::move(n)));
  }();
  return g;
}

GroupExpr GroupExpr::tail_product(GroupExpr base, GroupExpr component, TailRule rule) {
  if (rule.maps.empty()) throw ShapeMismatch("tail rule needs at least one map");
  if (rule.stabilization < 1) throw ShapeMismatch("tail rule stabilization must be >= 1");
  for (const auto& m : rule.maps)
    if (!(m.domain() == base) || !(m.codomain() == component))
      throw DomainMismatch("tail rule map " + m.to_string() + " is not " + base.to_string() + " -> " +
                           component.to_string());
  GroupNode n;
  n.kind = GroupKind::TailProduct;
  n.children = {std::move(base), std::move(component)};
  n.rule = std::move(rule);
  return GroupExpr(make_group(std::move(n)));
}

GroupExpr GroupExpr::direct_sum(std::vector<GroupExpr> summands) {
  GroupNode n;
  n.kind = GroupKind::DirectSum;
  n.children = std::move(summands);
  return GroupExpr(make_group(std::move(n)));
}

GroupExpr GroupExpr::quotient(GroupExpr ambient, GroupExpr sub) {
  GroupNode n;
  n.kind = GroupKind::Quotient;
  n.children = {std::move(ambient), std::move(sub)};
  return GroupExpr(make_group(std::move(n)));
}

GroupKind GroupExpr::kind() const { return node_->kind; }

const FgAbGroup& GroupExpr::fg_group() const {
  if (kind() != GroupKind::Fg) throw ShapeMismatch("not a finitely generated group literal: " + to_string());
  return node_->fg;
}

const std::vector<GroupExpr>& GroupExpr::summands() const {
  if (kind() != GroupKind::DirectSum) throw ShapeMismatch("not a direct sum: " + to_string());
  return node_->children;
}

const GroupExpr& GroupExpr::base() const {
  if (kind() != GroupKind::TailProduct) throw ShapeMismatch("not a tail product: " + to_string());
  return node_->children[0];
}

const GroupExpr& GroupExpr::component() const {
  if (kind() != GroupKind::TailProduct) throw ShapeMismatch("not a tail product: " + to_string());
  return node_->children[1];
}

const TailRule& GroupExpr::rule() const {
  if (kind() != GroupKind::TailProduct) throw ShapeMismatch("not a tail product: " + to_string());
  return node_->rule;
}

const GroupExpr& GroupExpr::ambient() const {
  if (kind() != GroupKind::Quotient) throw ShapeMismatch("not a quotient: " + to_string());
  return node_->children[0];
}

const GroupExpr& GroupExpr::sub() const {
  if (kind() != GroupKind::Quotient) throw ShapeMismatch("not a quotient: " + to_string());
  return node_->children[1];
}

bool GroupExpr::is_trivial() const {
  switch (kind()) {
    case GroupKind::Fg: return node_->fg.is_trivial();
    case GroupKind::Dyadic:
    case GroupKind::Rational: return false;
    case GroupKind::TailProduct: return base().is_trivial() && component().is_trivial();
    case GroupKind::DirectSum:
      return std::all_of(node_->children.begin(), node_->children.end(),
                         [](const GroupExpr& g) { return g.is_trivial(); });
    case GroupKind::Quotient: return ambient() == sub();
  }
  return false;
}

bool GroupExpr::operator==(const GroupExpr& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case GroupKind::Fg: return node_->fg == other.node_->fg;
    case GroupKind::Dyadic:
    case GroupKind::Rational: return true;
    case GroupKind::TailProduct: {
      const TailRule& a = rule();
      const TailRule& b = other.rule();
      if (a.index_set != b.index_set || a.stabilization != b.stabilization || !(a.scale == b.scale) ||
          a.maps.size() != b.maps.size())
        return false;
      if (!(base() == other.base()) || !(component() == other.component())) return false;
      for (std::size_t i = 0; i < a.maps.size(); ++i)
        if (!a.maps[i].structurally_equal(b.maps[i])) return false;
      return true;
    }
    case GroupKind::DirectSum:
    case GroupKind::Quotient: {
      const auto& a = node_->children;
      const auto& b = other.node_->children;
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
      return true;
    }
  }
  return false;
}

std::string GroupExpr::to_string() const {
  switch (kind()) {
    case GroupKind::Fg: return node_->fg.to_string();
    case GroupKind::Dyadic: return "Z[1/2]";
    case GroupKind::Rational: return "Q";
    case GroupKind::TailProduct: {
      std::ostringstream os;
      os << "Tail(" << base().to_string() << "; " << component().to_string() << "; "
         << (rule().index_set == IndexSet::Positive ? "N+" : "Z\\0") << ", s=" << rule().stabilization
         << ", p=" << rule().period();
      if (rule().scale.kind != ScalarSequence::Kind::One) os << ", " << rule().scale.to_string();
      os << ")";
      return os.str();
    }
    case GroupKind::DirectSum: {
      std::string s;
      for (const auto& g : node_->children) {
        if (!s.empty()) s += " + ";
        s += g.kind() == GroupKind::DirectSum ? "(" + g.to_string() + ")" : g.to_string();
      }
      return s.empty() ? "0" : s;
    }
    case GroupKind::Quotient: return "(" + ambient().to_string() + ")/(" + sub().to_string() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- Element

namespace {

void require_owner(const Element& x, const GroupExpr& g, const char* what) {
  if (!(x.owner() == g))
    throw OwnerMismatch(std::string(what) + ": element of " + x.owner().to_string() + " used in " +
                        g.to_string());
}

void require_same(const Element& a, const Element& b) {
  if (!(a.owner() == b.owner()))
    throw OwnerMismatch("elements of " + a.owner().to_string() + " and " + b.owner().to_string());
}

// Canonical coset representative of x modulo sub (x in ambient).
Element canonical_mod(const Element& x, const GroupExpr& sub);

Rational rational_mod_dyadic(const Rational& q) {
  const Integer& den = q.get_den();
  unsigned long v = two_adic_valuation(den);
  Integer odd = den >> v;
  Integer pow = Integer(1) << v;
  Integer c = mod_floor(q.get_num() * mod_inverse(pow, odd), odd);
  Rational r(c, odd);
  r.canonicalize();
  return r;
}

}  // namespace

Element Element::zero(const GroupExpr& g) {
  Element e(g);
  switch (g.kind()) {
    case GroupKind::Fg: e.coords_.assign(g.fg_group().generator_count(), Integer(0)); break;
    case GroupKind::Dyadic:
    case GroupKind::Rational: e.value_ = 0; break;
    case GroupKind::DirectSum:
      for (const auto& s : g.summands()) e.children_.push_back(zero(s));
      break;
    case GroupKind::TailProduct: e.children_.push_back(zero(g.base())); break;
    case GroupKind::Quotient: e.children_.push_back(zero(g.ambient())); break;
  }
  return e;
}

Element Element::fg(const GroupExpr& g, std::vector<Integer> coords) {
  Element e(g);
  e.coords_ = g.fg_group().reduce(std::move(coords));
  return e;
}

Element Element::scalar(const GroupExpr& g, const Rational& value) {
  if (g.kind() != GroupKind::Dyadic && g.kind() != GroupKind::Rational)
    throw ShapeMismatch("scalar payload for " + g.to_string());
  if (g.kind() == GroupKind::Dyadic && !is_dyadic(value))
    throw ShapeMismatch(value.get_str() + " is not in Z[1/2]");
  Element e(g);
  e.value_ = value;
  e.value_.canonicalize();
  return e;
}

Element Element::sum(const GroupExpr& g, std::vector<Element> parts) {
  const auto& s = g.summands();
  if (parts.size() != s.size())
    throw ShapeMismatch("direct sum " + g.to_string() + " needs " + std::to_string(s.size()) + " parts");
  for (std::size_t i = 0; i < s.size(); ++i) require_owner(parts[i], s[i], "direct sum part");
  Element e(g);
  e.children_ = std::move(parts);
  return e;
}

Element Element::tail(const GroupExpr& g, Element base, const std::map<long, Element>& deviations) {
  require_owner(base, g.base(), "tail base");
  Element e(g);
  e.children_.push_back(std::move(base));
  for (const auto& [m, d] : deviations) {
    if (!g.rule().valid_coordinate(m))
      throw ShapeMismatch("coordinate " + std::to_string(m) + " outside the index set");
    require_owner(d, g.component(), "tail coordinate");
    if (!d.is_zero()) e.deviations_.emplace_back(m, d);
  }
  return e;
}

Element Element::tail_from_values(const GroupExpr& g, Element base, const std::map<long, Element>& values) {
  require_owner(base, g.base(), "tail base");
  std::map<long, Element> dev;
  for (const auto& [m, v] : values) {
    if (!g.rule().valid_coordinate(m))
      throw ShapeMismatch("coordinate " + std::to_string(m) + " outside the index set");
    dev.emplace(m, v - default_coordinate(g, base, m));
  }
  return tail(g, std::move(base), dev);
}

Element Element::coset(const GroupExpr& g, const Element& representative) {
  require_owner(representative, g.ambient(), "coset representative");
  Element e(g);
  e.children_.push_back(canonical_mod(representative, g.sub()));
  return e;
}

const Element& Element::base() const {
  if (owner_.kind() != GroupKind::TailProduct) throw ShapeMismatch("base of a non tail element");
  return children_[0];
}

const Element& Element::representative() const {
  if (owner_.kind() != GroupKind::Quotient) throw ShapeMismatch("representative of a non coset");
  return children_[0];
}

Element Element::coordinate(long m) const {
  if (owner_.kind() != GroupKind::TailProduct) throw ShapeMismatch("coordinate of a non tail element");
  if (!owner_.rule().valid_coordinate(m))
    throw ShapeMismatch("coordinate " + std::to_string(m) + " outside the index set");
  Element v = default_coordinate(owner_, base(), m);
  for (const auto& [k, d] : deviations_)
    if (k == m) return v + d;
  return v;
}

long Element::tail_start() const {
  long r = 0;
  for (const auto& [m, d] : deviations_) r = std::max(r, std::labs(m));
  return r;
}

Element Element::operator+(const Element& other) const {
  require_same(*this, other);
  Element e(owner_);
  switch (owner_.kind()) {
    case GroupKind::Fg: {
      std::vector<Integer> c(coords_);
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.coords_[i];
      e.coords_ = owner_.fg_group().reduce(std::move(c));
      break;
    }
    case GroupKind::Dyadic:
    case GroupKind::Rational: e.value_ = value_ + other.value_; break;
    case GroupKind::DirectSum:
      for (std::size_t i = 0; i < children_.size(); ++i) e.children_.push_back(children_[i] + other.children_[i]);
      break;
    case GroupKind::TailProduct: {
      e.children_.push_back(children_[0] + other.children_[0]);
      std::map<long, Element> dev;
      for (const auto& [m, d] : deviations_) dev.emplace(m, d);
      for (const auto& [m, d] : other.deviations_) {
        auto it = dev.find(m);
        if (it == dev.end())
          dev.emplace(m, d);
        else
          it->second = it->second + d;
      }
      for (const auto& [m, d] : dev)
        if (!d.is_zero()) e.deviations_.emplace_back(m, d);
      break;
    }
    case GroupKind::Quotient:
      e.children_.push_back(canonical_mod(children_[0] + other.children_[0], owner_.sub()));
      break;
  }
  return e;
}

Element Element::operator-() const { return times(-1); }

Element Element::operator-(const Element& other) const { return *this + (-other); }

Element Element::times(const Integer& k) const {
  Element e(owner_);
  switch (owner_.kind()) {
    case GroupKind::Fg: {
      std::vector<Integer> c(coords_);
      for (auto& x : c) x *= k;
      e.coords_ = owner_.fg_group().reduce(std::move(c));
      break;
    }
    case GroupKind::Dyadic:
    case GroupKind::Rational: e.value_ = value_ * Rational(k); break;
    case GroupKind::DirectSum:
      for (const auto& c : children_) e.children_.push_back(c.times(k));
      break;
    case GroupKind::TailProduct:
      e.children_.push_back(children_[0].times(k));
      for (const auto& [m, d] : deviations_) {
        Element t = d.times(k);
        if (!t.is_zero()) e.deviations_.emplace_back(m, t);
      }
      break;
    case GroupKind::Quotient: e.children_.push_back(canonical_mod(children_[0].times(k), owner_.sub())); break;
  }
  return e;
}

bool Element::operator==(const Element& other) const {
  require_same(*this, other);
  switch (owner_.kind()) {
    case GroupKind::Fg: return coords_ == other.coords_;
    case GroupKind::Dyadic:
    case GroupKind::Rational: return value_ == other.value_;
    case GroupKind::DirectSum:
    case GroupKind::Quotient:
      for (std::size_t i = 0; i < children_.size(); ++i)
        if (!(children_[i] == other.children_[i])) return false;
      return true;
    case GroupKind::TailProduct:
      if (!(children_[0] == other.children_[0]) || deviations_.size() != other.deviations_.size()) return false;
      for (std::size_t i = 0; i < deviations_.size(); ++i)
        if (deviations_[i].first != other.deviations_[i].first ||
            !(deviations_[i].second == other.deviations_[i].second))
          return false;
      return true;
  }
  return false;
}

bool Element::is_zero() const {
  switch (owner_.kind()) {
    case GroupKind::Fg:
      return std::all_of(coords_.begin(), coords_.end(), [](const Integer& x) { return x == 0; });
    case GroupKind::Dyadic:
    case GroupKind::Rational: return value_ == 0;
    case GroupKind::DirectSum:
    case GroupKind::Quotient:
      return std::all_of(children_.begin(), children_.end(), [](const Element& c) { return c.is_zero(); });
    case GroupKind::TailProduct: return children_[0].is_zero() && deviations_.empty();
  }
  return false;
}

std::string Element::to_string() const {
  switch (owner_.kind()) {
    case GroupKind::Fg: return owner_.fg_group().element_string(coords_);
    case GroupKind::Dyadic:
    case GroupKind::Rational: return value_.get_str();
    case GroupKind::DirectSum: {
      std::vector<std::string> shown;
      const auto& s = owner_.summands();
      for (std::size_t i = 0; i < children_.size(); ++i)
        if (!s[i].is_trivial()) shown.push_back(children_[i].to_string());
      if (shown.empty()) return "0";
      if (shown.size() == 1) return shown[0];
      std::string out = "(";
      for (std::size_t i = 0; i < shown.size(); ++i) out += (i ? "," : "") + shown[i];
      return out + ")";
    }
    case GroupKind::TailProduct: {
      const TailRule& r = owner_.rule();
      if (owner_.component().is_trivial()) return children_[0].to_string();
      long last = std::max<long>(tail_start(), r.stabilization + r.period());
      std::string out = "(" + children_[0].to_string() + ",(";
      bool first = true;
      auto emit = [&](long m) {
        out += (first ? "" : ",");
        if (r.index_set == IndexSet::NonzeroInteger) out += std::to_string(m) + ":";
        out += coordinate(m).to_string();
        first = false;
      };
      if (r.index_set == IndexSet::NonzeroInteger)
        for (long m = -last; m <= -1; ++m) emit(m);
      for (long m = 1; m <= last; ++m) emit(m);
      return out + ",...))";
    }
    case GroupKind::Quotient: return "[" + children_[0].to_string() + "]";
  }
  return "?";
}

Element default_coordinate(const GroupExpr& g, const Element& base, long m) {
  const TailRule& r = g.rule();
  long rank = r.rank(m);
  if (rank < r.stabilization) return Element::zero(g.component());
  const HomExpr& map = r.maps[static_cast<std::size_t>((rank - r.stabilization) % r.period())];
  Element y = map.apply(base);
  Integer c = r.scale.at(rank);
  return c == 1 ? y : y.times(c);
}

namespace {

Element canonical_mod(const Element& x, const GroupExpr& sub) {
  const GroupExpr& amb = x.owner();
  if (amb == sub) return Element::zero(amb);
  if (sub.is_trivial()) return x;
  if (amb.kind() == GroupKind::Rational && sub.kind() == GroupKind::Dyadic)
    return Element::scalar(amb, rational_mod_dyadic(x.value()));
  if (amb.kind() == GroupKind::DirectSum && sub.kind() == GroupKind::DirectSum &&
      amb.summands().size() == sub.summands().size()) {
    std::vector<Element> parts;
    for (std::size_t i = 0; i < x.parts().size(); ++i) parts.push_back(canonical_mod(x.parts()[i], sub.summands()[i]));
    return Element::sum(amb, std::move(parts));
  }
  if (amb.kind() == GroupKind::TailProduct && sub.kind() == GroupKind::TailProduct) {
    Element base = canonical_mod(x.base(), sub.base());
    std::map<long, Element> dev;
    for (const auto& [m, d] : x.deviations()) dev.emplace(m, canonical_mod(d, sub.component()));
    return Element::tail(amb, base, dev);
  }
  throw UnsupportedKind("no canonical cosets for " + amb.to_string() + " modulo " + sub.to_string());
}

}  // namespace

// ---------------------------------------------------------------- membership / flat structure

std::optional<Element> restrict_to(const Element& x, const GroupExpr& sub) {
  const GroupExpr& g = x.owner();
  if (g == sub) return x;
  if ((sub.kind() == GroupKind::Dyadic || sub.kind() == GroupKind::Rational) &&
      (g.kind() == GroupKind::Dyadic || g.kind() == GroupKind::Rational)) {
    if (sub.kind() == GroupKind::Dyadic && !is_dyadic(x.value())) return std::nullopt;
    return Element::scalar(sub, x.value());
  }
  if (sub.kind() == GroupKind::DirectSum && g.kind() == GroupKind::DirectSum &&
      sub.summands().size() == g.summands().size()) {
    std::vector<Element> parts;
    for (std::size_t i = 0; i < x.parts().size(); ++i) {
      auto p = restrict_to(x.parts()[i], sub.summands()[i]);
      if (!p) return std::nullopt;
      parts.push_back(*p);
    }
    return Element::sum(sub, std::move(parts));
  }
  if (sub.kind() == GroupKind::TailProduct && g.kind() == GroupKind::TailProduct &&
      sub.rule().index_set == g.rule().index_set) {
    auto base = restrict_to(x.base(), sub.base());
    if (!base) return std::nullopt;
    std::map<long, Element> values;
    for (const auto& [m, d] : x.deviations()) {
      auto v = restrict_to(x.coordinate(m), sub.component());
      if (!v) return std::nullopt;
      values.emplace(m, *v);
    }
    Element y = Element::tail_from_values(sub, *base, values);
    const TailRule& r = sub.rule();
    long limit = std::max({x.tail_start(), r.stabilization + 2 * lcm_long(r.period(), g.rule().period()),
                           g.rule().stabilization}) + 1;
    for (long k = 1; k <= limit; ++k)
      for (long m : {k, -k}) {
        if (!r.valid_coordinate(m)) continue;
        auto v = restrict_to(x.coordinate(m), sub.component());
        if (!v || !(*v == y.coordinate(m))) return std::nullopt;
      }
    return y;
  }
  return std::nullopt;
}

bool is_member(const Element& x, const GroupExpr& sub) { return restrict_to(x, sub).has_value(); }

std::optional<std::vector<Integer>> flat_orders(const GroupExpr& g) {
  switch (g.kind()) {
    case GroupKind::Fg: return g.fg_group().orders();
    case GroupKind::DirectSum: {
      std::vector<Integer> out;
      for (const auto& s : g.summands()) {
        auto o = flat_orders(s);
        if (!o) return std::nullopt;
        out.insert(out.end(), o->begin(), o->end());
      }
      return out;
    }
    case GroupKind::TailProduct:
      if (g.component().is_trivial()) return flat_orders(g.base());
      return std::nullopt;
    default: return std::nullopt;
  }
}

bool is_finitely_generated(const GroupExpr& g) { return flat_orders(g).has_value(); }

std::vector<Integer> flat_coords(const Element& x) {
  switch (x.owner().kind()) {
    case GroupKind::Fg: return x.coords();
    case GroupKind::DirectSum: {
      std::vector<Integer> out;
      for (const auto& p : x.parts()) {
        auto c = flat_coords(p);
        out.insert(out.end(), c.begin(), c.end());
      }
      return out;
    }
    case GroupKind::TailProduct:
      if (x.owner().component().is_trivial()) return flat_coords(x.base());
      break;
    default: break;
  }
  throw UnsupportedKind("no finite coordinates for " + x.owner().to_string());
}

namespace {

Element from_flat_at(const GroupExpr& g, const std::vector<Integer>& coords, std::size_t& pos) {
  switch (g.kind()) {
    case GroupKind::Fg: {
      std::size_t n = g.fg_group().generator_count();
      if (pos + n > coords.size()) throw ShapeMismatch("too few coordinates for " + g.to_string());
      std::vector<Integer> c(coords.begin() + static_cast<long>(pos), coords.begin() + static_cast<long>(pos + n));
      pos += n;
      return Element::fg(g, std::move(c));
    }
    case GroupKind::DirectSum: {
      std::vector<Element> parts;
      for (const auto& s : g.summands()) parts.push_back(from_flat_at(s, coords, pos));
      return Element::sum(g, std::move(parts));
    }
    case GroupKind::TailProduct:
      if (g.component().is_trivial()) return Element::tail(g, from_flat_at(g.base(), coords, pos), {});
      break;
    default: break;
  }
  throw UnsupportedKind("no finite coordinates for " + g.to_string());
}

}  // namespace

Element from_flat_coords(const GroupExpr& g, const std::vector<Integer>& coords) {
  std::size_t pos = 0;
  Element e = from_flat_at(g, coords, pos);
  if (pos != coords.size()) throw ShapeMismatch("too many coordinates for " + g.to_string());
  return e;
}

Presentation flat_presentation(const GroupExpr& g) {
  auto o = flat_orders(g);
  if (!o) throw UnsupportedKind(g.to_string() + " is not finitely generated");
  return presentation_from_orders(*o);
}

FgAbGroup fg_structure(const GroupExpr& g) { return flat_presentation(g).group; }

Integer exponent_of(const GroupExpr& g) {
  auto o = flat_orders(g);
  if (!o) return 0;
  Integer e = 1;
  for (const auto& d : *o) {
    if (d == 0) return 0;
    e = lcm(e, d);
  }
  return e;
}

std::vector<Element> probe_elements(const GroupExpr& g, long window) {
  std::vector<Element> out;
  switch (g.kind()) {
    case GroupKind::Fg:
      for (std::size_t i = 0; i < g.fg_group().generator_count(); ++i) {
        std::vector<Integer> c(g.fg_group().generator_count(), Integer(0));
        c[i] = 1;
        out.push_back(Element::fg(g, c));
      }
      break;
    case GroupKind::Dyadic:
      for (const char* q : {"1", "1/2", "1/4"}) out.push_back(Element::scalar(g, Rational(q)));
      break;
    case GroupKind::Rational:
      for (const char* q : {"1", "1/2", "1/3"}) out.push_back(Element::scalar(g, Rational(q)));
      break;
    case GroupKind::DirectSum: {
      const auto& s = g.summands();
      for (std::size_t i = 0; i < s.size(); ++i)
        for (const auto& p : probe_elements(s[i], window)) {
          std::vector<Element> parts;
          for (std::size_t k = 0; k < s.size(); ++k) parts.push_back(k == i ? p : Element::zero(s[k]));
          out.push_back(Element::sum(g, std::move(parts)));
        }
      break;
    }
    case GroupKind::TailProduct: {
      for (const auto& p : probe_elements(g.base(), window)) out.push_back(Element::tail(g, p, {}));
      auto comp = probe_elements(g.component(), window);
      Element zero_base = Element::zero(g.base());
      for (long k = 1; k <= window; ++k)
        for (long m : {-k, k}) {
          if (!g.rule().valid_coordinate(m)) continue;
          for (const auto& c : comp) out.push_back(Element::tail(g, zero_base, {{m, c}}));
        }
      break;
    }
    case GroupKind::Quotient:
      for (const auto& p : probe_elements(g.ambient(), window)) out.push_back(Element::coset(g, p));
      break;
  }
  return out;
}

// ---------------------------------------------------------------- HomExpr

CoordFamily CoordFamily::constant(HomExpr map) {
  CoordFamily f;
  f.period.push_back(std::move(map));
  return f;
}

CoordFamily CoordFamily::periodic(std::vector<HomExpr> maps) {
  CoordFamily f;
  f.period = std::move(maps);
  return f;
}

const HomExpr& CoordFamily::at(long rank) const {
  if (rank < stabilization) return head.at(static_cast<std::size_t>(rank - 1));
  return period[static_cast<std::size_t>((rank - stabilization) % static_cast<long>(period.size()))];
}

namespace {

std::shared_ptr<HomNode> new_hom(HomKind kind, GroupExpr dom, GroupExpr cod) {
  auto n = std::make_shared<HomNode>();
  n->kind = kind;
  n->domain = std::move(dom);
  n->codomain = std::move(cod);
  return n;
}

void require_kind(const GroupExpr& g, GroupKind k, const char* what) {
  if (g.kind() != k) throw ShapeMismatch(std::string(what) + " needs a " + kind_name(k) + " group, got " + g.to_string());
}

long group_horizon(const GroupExpr& g) {
  switch (g.kind()) {
    case GroupKind::TailProduct: {
      long h = g.rule().stabilization + 2 * g.rule().period();
      return std::max({h, group_horizon(g.base()), group_horizon(g.component())});
    }
    case GroupKind::DirectSum: {
      long h = 0;
      for (const auto& s : g.summands()) h = std::max(h, group_horizon(s));
      return h;
    }
    case GroupKind::Quotient: return group_horizon(g.ambient());
    default: return 0;
  }
}

// Rank after which scale(rank) kills every element of a group of exponent e.
long settle_rank(const ScalarSequence& scale, const Integer& e) {
  if (scale.kind == ScalarSequence::Kind::One || e == 0) return 0;
  Integer odd = odd_part(e);
  long j = 0;
  while (!mpz_divisible_p(odd_part_factorial(j).get_mpz_t(), odd.get_mpz_t())) ++j;
  return scale.divisor * j;
}

long source_coordinate(IndexMap map, long target) {
  if (map == IndexMap::Same) return target;
  return target < 0 ? 2 * (-target) - 1 : 2 * target;
}

long target_coordinate(IndexMap map, long source) {
  if (map == IndexMap::Same) return source;
  return source % 2 == 1 ? -(source + 1) / 2 : source / 2;
}

}  // namespace

HomExpr::HomExpr() : node_(new_hom(HomKind::Zero, GroupExpr(), GroupExpr())) {}

HomExpr HomExpr::fg_matrix(GroupExpr domain, GroupExpr codomain, const IntMatrix& flat_matrix) {
  auto pd = flat_presentation(domain);
  auto pc = flat_presentation(codomain);
  if (flat_matrix.rows() != pc.generator_count() || flat_matrix.cols() != pd.generator_count())
    throw ShapeMismatch("matrix of shape " + std::to_string(flat_matrix.rows()) + "x" +
                        std::to_string(flat_matrix.cols()) + " for " + domain.to_string() + " -> " +
                        codomain.to_string());
  // Well-definedness on the given generators.
  auto dord = *flat_orders(domain);
  for (std::size_t j = 0; j < dord.size(); ++j) {
    if (dord[j] == 0) continue;
    std::vector<Integer> col = flat_matrix.column(j);
    for (auto& c : col) c *= dord[j];
    if (!from_flat_coords(codomain, col).is_zero())
      throw DomainMismatch("matrix not well defined on generator " + std::to_string(j) + " of " + domain.to_string());
  }
  auto n = new_hom(HomKind::FgMatrix, std::move(domain), std::move(codomain));
  n->matrix = flat_matrix;
  return HomExpr(n);
}

HomExpr HomExpr::scalar(GroupExpr domain, GroupExpr codomain, const Rational& factor) {
  auto ordered = [](const GroupExpr& g) { return g.kind() == GroupKind::Dyadic || g.kind() == GroupKind::Rational; };
  if (!ordered(domain) || !ordered(codomain))
    throw ShapeMismatch("scalar map needs Z[1/2] or Q, got " + domain.to_string() + " -> " + codomain.to_string());
  if (codomain.kind() == GroupKind::Dyadic &&
      ((domain.kind() == GroupKind::Rational && factor != 0) || !is_dyadic(factor)))
    throw DomainMismatch("scalar " + factor.get_str() + " does not map " + domain.to_string() + " into Z[1/2]");
  auto n = new_hom(HomKind::Scalar, std::move(domain), std::move(codomain));
  n->factor = factor;
  n->factor.canonicalize();
  return HomExpr(n);
}

HomExpr HomExpr::dyadic_to_finite(GroupExpr codomain, Element image_of_one) {
  Integer e = exponent_of(codomain);
  if (e == 0 || e % 2 == 0) throw DomainMismatch("Z[1/2] maps only into groups of odd exponent, not " + codomain.to_string());
  require_owner(image_of_one, codomain, "image of 1");
  auto n = new_hom(HomKind::DyadicToFinite, GroupExpr::dyadic(), std::move(codomain));
  n->images.push_back(std::move(image_of_one));
  return HomExpr(n);
}

HomExpr HomExpr::identity(GroupExpr group) {
  GroupExpr g2 = group;
  return HomExpr(new_hom(HomKind::Identity, std::move(group), std::move(g2)));
}

HomExpr HomExpr::zero(GroupExpr domain, GroupExpr codomain) {
  return HomExpr(new_hom(HomKind::Zero, std::move(domain), std::move(codomain)));
}

HomExpr HomExpr::negate(HomExpr h) {
  auto n = new_hom(HomKind::Negate, h.domain(), h.codomain());
  n->horizon = h.horizon();
  n->children.push_back(std::move(h));
  return HomExpr(n);
}

HomExpr HomExpr::sum(HomExpr f, HomExpr g) {
  if (!(f.domain() == g.domain()) || !(f.codomain() == g.codomain()))
    throw DomainMismatch("sum of maps with different domains or codomains");
  auto n = new_hom(HomKind::Sum, f.domain(), f.codomain());
  n->horizon = std::max(f.horizon(), g.horizon());
  n->children = {std::move(f), std::move(g)};
  return HomExpr(n);
}

HomExpr HomExpr::compose(HomExpr outer, HomExpr inner) { return chain({std::move(inner), std::move(outer)}); }

HomExpr HomExpr::chain(std::vector<HomExpr> maps) {
  if (maps.empty()) throw ShapeMismatch("empty composition");
  if (maps.size() == 1) return maps[0];
  for (std::size_t i = 1; i < maps.size(); ++i)
    if (!(maps[i - 1].codomain() == maps[i].domain()))
      throw DomainMismatch("cannot compose " + maps[i - 1].codomain().to_string() + " with a map from " +
                           maps[i].domain().to_string());
  auto n = new_hom(HomKind::Compose, maps.front().domain(), maps.back().codomain());
  for (const auto& m : maps) n->horizon = std::max(n->horizon, m.horizon());
  n->children = std::move(maps);
  return HomExpr(n);
}

HomExpr HomExpr::family(GroupExpr domain, GroupExpr codomain, HomExpr base_map, CoordFamily components,
                        IndexMap index_map) {
  require_kind(domain, GroupKind::TailProduct, "family map");
  require_kind(codomain, GroupKind::TailProduct, "family map");
  const TailRule& rd = domain.rule();
  const TailRule& rc = codomain.rule();
  if (index_map == IndexMap::Same && rd.index_set != rc.index_set)
    throw ShapeMismatch("family map between different index sets");
  if (index_map == IndexMap::PairsToSigned &&
      (rd.index_set != IndexSet::Positive || rc.index_set != IndexSet::NonzeroInteger))
    throw ShapeMismatch("pair reindexing needs N+ source and Z\\0 target");
  if (!(base_map.domain() == domain.base()) || !(base_map.codomain() == codomain.base()))
    throw DomainMismatch("family base map " + base_map.to_string() + " does not match the bases");
  if (components.period.empty()) throw ShapeMismatch("family needs a periodic part");
  if (static_cast<long>(components.head.size()) != components.stabilization - 1)
    throw ShapeMismatch("family head length must be stabilization - 1");
  for (const auto* list : {&components.head, &components.period})
    for (const auto& m : *list)
      if (!(m.domain() == domain.component()) || !(m.codomain() == codomain.component()))
        throw DomainMismatch("family coordinate map " + m.to_string() + " does not match the components");

  long L = lcm_long(lcm_long(rd.period(), rc.period()), static_cast<long>(components.period.size()));
  Integer e = exponent_of(codomain.component());
  long H = std::max({rd.stabilization, rc.stabilization, components.stabilization, base_map.horizon()}) +
           std::max(settle_rank(rd.scale, e), settle_rank(rc.scale, e)) + L;
  auto n = new_hom(HomKind::Family, domain, codomain);
  n->children.push_back(base_map);
  n->family = components;
  n->index_map = index_map;
  n->horizon = H;
  for (const auto& m : components.period) n->horizon = std::max(n->horizon, H + m.horizon());

  // Tail compatibility beyond the horizon, checked over two full periods.
  for (const auto& p : probe_elements(domain.base(), 1)) {
    Element fp = base_map.apply(p);
    for (long rank = H + 1; rank <= H + 2 * L; ++rank)
      for (long t : {-rank, rank}) {
        if (!rc.valid_coordinate(t)) continue;
        Element lhs = components.at(rank).apply(default_coordinate(domain, p, source_coordinate(index_map, t)));
        Element rhs = default_coordinate(codomain, fp, t);
        if (!(lhs == rhs))
          throw IllDefined("family map does not preserve the tail rule at coordinate " + std::to_string(t) +
                           " on base " + p.to_string() + ": " + lhs.to_string() + " vs " + rhs.to_string());
      }
  }
  return HomExpr(n);
}

HomExpr HomExpr::section(GroupExpr codomain, HomExpr base_map) {
  require_kind(codomain, GroupKind::TailProduct, "section");
  if (!(base_map.codomain() == codomain.base())) throw DomainMismatch("section base map lands outside the base");
  auto n = new_hom(HomKind::Section, base_map.domain(), codomain);
  n->horizon = std::max(base_map.horizon(), group_horizon(codomain));
  n->children.push_back(std::move(base_map));
  return HomExpr(n);
}

HomExpr HomExpr::project_base(GroupExpr domain) {
  require_kind(domain, GroupKind::TailProduct, "base projection");
  GroupExpr cod = domain.base();
  auto n = new_hom(HomKind::ProjectBase, std::move(domain), std::move(cod));
  return HomExpr(n);
}

HomExpr HomExpr::coordinate(GroupExpr domain, long m) {
  require_kind(domain, GroupKind::TailProduct, "coordinate map");
  if (!domain.rule().valid_coordinate(m)) throw ShapeMismatch("coordinate outside the index set");
  GroupExpr cod = domain.component();
  auto n = new_hom(HomKind::Coordinate, std::move(domain), std::move(cod));
  n->index = m;
  n->horizon = std::labs(m);
  return HomExpr(n);
}

HomExpr HomExpr::insert(GroupExpr codomain, long m) {
  require_kind(codomain, GroupKind::TailProduct, "coordinate insertion");
  if (!codomain.rule().valid_coordinate(m)) throw ShapeMismatch("coordinate outside the index set");
  GroupExpr dom = codomain.component();
  auto n = new_hom(HomKind::Insert, std::move(dom), std::move(codomain));
  n->index = m;
  n->horizon = std::labs(m);
  return HomExpr(n);
}

HomExpr HomExpr::inject(GroupExpr codomain, std::size_t index) {
  require_kind(codomain, GroupKind::DirectSum, "injection");
  if (index >= codomain.summands().size()) throw ShapeMismatch("summand index out of range");
  GroupExpr dom = codomain.summands()[index];
  auto n = new_hom(HomKind::Inject, std::move(dom), std::move(codomain));
  n->index = static_cast<long>(index);
  return HomExpr(n);
}

HomExpr HomExpr::project(GroupExpr domain, std::size_t index) {
  require_kind(domain, GroupKind::DirectSum, "projection");
  if (index >= domain.summands().size()) throw ShapeMismatch("summand index out of range");
  GroupExpr cod = domain.summands()[index];
  auto n = new_hom(HomKind::Project, std::move(domain), std::move(cod));
  n->index = static_cast<long>(index);
  return HomExpr(n);
}

HomExpr HomExpr::direct_sum_of(std::vector<HomExpr> maps) {
  std::vector<GroupExpr> doms, cods;
  long h = 0;
  for (const auto& m : maps) {
    doms.push_back(m.domain());
    cods.push_back(m.codomain());
    h = std::max(h, m.horizon());
  }
  auto n = new_hom(HomKind::DirectSumOf, GroupExpr::direct_sum(doms), GroupExpr::direct_sum(cods));
  n->children = std::move(maps);
  n->horizon = h;
  return HomExpr(n);
}

HomExpr HomExpr::quotient_map(GroupExpr quotient) {
  require_kind(quotient, GroupKind::Quotient, "quotient map");
  GroupExpr amb = quotient.ambient();
  return HomExpr(new_hom(HomKind::QuotientMap, std::move(amb), std::move(quotient)));
}

HomKind HomExpr::kind() const { return node_->kind; }
const GroupExpr& HomExpr::domain() const { return node_->domain; }
const GroupExpr& HomExpr::codomain() const { return node_->codomain; }
const std::vector<HomExpr>& HomExpr::children() const { return node_->children; }
const CoordFamily& HomExpr::components() const { return node_->family; }
IndexMap HomExpr::index_map() const { return node_->index_map; }
long HomExpr::index() const { return node_->index; }
const Rational& HomExpr::factor() const { return node_->factor; }
const Element& HomExpr::image_of_one() const { return node_->images.at(0); }
const IntMatrix& HomExpr::flat_matrix() const { return node_->matrix; }
long HomExpr::horizon() const { return node_->horizon; }

Element HomExpr::apply(const Element& x) const {
  const HomNode& n = *node_;
  require_owner(x, n.domain, "map argument");
  switch (n.kind) {
    case HomKind::FgMatrix: return from_flat_coords(n.codomain, n.matrix.apply(flat_coords(x)));
    case HomKind::Scalar: return Element::scalar(n.codomain, x.value() * n.factor);
    case HomKind::DyadicToFinite: {
      Integer e = exponent_of(n.codomain);
      return n.images[0].times(dyadic_mod(x.value(), e));
    }
    case HomKind::Identity: return x;
    case HomKind::Zero: return Element::zero(n.codomain);
    case HomKind::Negate: return -n.children[0].apply(x);
    case HomKind::Sum: return n.children[0].apply(x) + n.children[1].apply(x);
    case HomKind::Compose: {
      Element y = x;
      for (const auto& m : n.children) y = m.apply(y);
      return y;
    }
    case HomKind::Family: {
      const GroupExpr& cod = n.codomain;
      Element fa = n.children[0].apply(x.base());
      std::set<long> coords;
      for (long k = 1; k <= n.horizon; ++k)
        for (long t : {-k, k})
          if (cod.rule().valid_coordinate(t)) coords.insert(t);
      for (const auto& [m, d] : x.deviations()) coords.insert(target_coordinate(n.index_map, m));
      std::map<long, Element> dev;
      for (long t : coords) {
        Element v = n.family.at(cod.rule().rank(t)).apply(x.coordinate(source_coordinate(n.index_map, t)));
        dev.emplace(t, v - default_coordinate(cod, fa, t));
      }
      return Element::tail(cod, fa, dev);
    }
    case HomKind::Section: return Element::tail(n.codomain, n.children[0].apply(x), {});
    case HomKind::ProjectBase: return x.base();
    case HomKind::Coordinate: return x.coordinate(n.index);
    case HomKind::Insert: return Element::tail(n.codomain, Element::zero(n.codomain.base()), {{n.index, x}});
    case HomKind::Inject: {
      std::vector<Element> parts;
      const auto& s = n.codomain.summands();
      for (std::size_t i = 0; i < s.size(); ++i)
        parts.push_back(static_cast<long>(i) == n.index ? x : Element::zero(s[i]));
      return Element::sum(n.codomain, std::move(parts));
    }
    case HomKind::Project: return x.parts()[static_cast<std::size_t>(n.index)];
    case HomKind::DirectSumOf: {
      std::vector<Element> parts;
      for (std::size_t i = 0; i < n.children.size(); ++i) parts.push_back(n.children[i].apply(x.parts()[i]));
      return Element::sum(n.codomain, std::move(parts));
    }
    case HomKind::QuotientMap: return Element::coset(n.codomain, x);
  }
  throw UnsupportedKind("unknown map kind");
}

bool HomExpr::structurally_equal(const HomExpr& other) const {
  if (node_ == other.node_) return true;
  const HomNode& a = *node_;
  const HomNode& b = *other.node_;
  if (a.kind != b.kind || a.index != b.index || a.index_map != b.index_map || a.factor != b.factor ||
      !(a.matrix == b.matrix) || a.children.size() != b.children.size() || a.images.size() != b.images.size())
    return false;
  if (!(a.domain == b.domain) || !(a.codomain == b.codomain)) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!a.children[i].structurally_equal(b.children[i])) return false;
  for (std::size_t i = 0; i < a.images.size(); ++i)
    if (!(a.images[i] == b.images[i])) return false;
  if (a.kind == HomKind::Family) {
    const auto& fa = a.family;
    const auto& fb = b.family;
    if (fa.stabilization != fb.stabilization || fa.head.size() != fb.head.size() ||
        fa.period.size() != fb.period.size())
      return false;
    for (std::size_t i = 0; i < fa.head.size(); ++i)
      if (!fa.head[i].structurally_equal(fb.head[i])) return false;
    for (std::size_t i = 0; i < fa.period.size(); ++i)
      if (!fa.period[i].structurally_equal(fb.period[i])) return false;
  }
  return true;
}

std::string HomExpr::to_string() const {
  const HomNode& n = *node_;
  std::ostringstream os;
  os << kind_name(n.kind);
  switch (n.kind) {
    case HomKind::FgMatrix: os << n.matrix.to_string(); break;
    case HomKind::Scalar: os << "(" << n.factor.get_str() << ")"; break;
    case HomKind::Coordinate:
    case HomKind::Insert:
    case HomKind::Inject:
    case HomKind::Project: os << "(" << n.index << ")"; break;
    default: break;
  }
  os << ": " << n.domain.to_string() << " -> " << n.codomain.to_string();
  return os.str();
}

HomEquality homexpr_equal(const HomExpr& f, const HomExpr& g, long window) {
  if (!(f.domain() == g.domain()) || !(f.codomain() == g.codomain()))
    throw DomainMismatch("comparing " + f.to_string() + " with " + g.to_string());
  long w = std::max({window, f.horizon(), g.horizon(), group_horizon(f.domain())});
  if (w > 100000) throw Undecidable("comparison window " + std::to_string(w) + " is too large");
  HomEquality out;
  for (const auto& p : probe_elements(f.domain(), w)) {
    Element a = f.apply(p);
    Element b = g.apply(p);
    if (!(a == b)) {
      out.equal = false;
      out.witness = HomWitness{p, a, b};
      return out;
    }
  }
  return out;
}

FgHom to_fg_hom(const HomExpr& h) {
  auto pd = flat_presentation(h.domain());
  auto pc = flat_presentation(h.codomain());
  IntMatrix m(pc.generator_count(), pd.generator_count());
  for (std::size_t j = 0; j < pd.generator_count(); ++j) {
    std::vector<Integer> e(pd.generator_count(), Integer(0));
    e[j] = 1;
    m.set_column(j, flat_coords(h.apply(from_flat_coords(h.domain(), e))));
  }
  return FgHom::from_presentations(pd, pc, m);
}

std::optional<Element> preimage(const HomExpr& h, const Element& y) {
  require_owner(y, h.codomain(), "preimage target");
  auto check = [&](const std::optional<Element>& x) -> std::optional<Element> {
    if (x && h.apply(*x) == y) return x;
    return std::nullopt;
  };
  if (is_finitely_generated(h.domain()) && is_finitely_generated(h.codomain())) {
    FgHom f = to_fg_hom(h);
    auto pd = flat_presentation(h.domain());
    auto pc = flat_presentation(h.codomain());
    auto x = preimage(f, pc.canonical(flat_coords(y)));
    if (!x) return std::nullopt;
    return check(from_flat_coords(h.domain(), pd.from_canonical.apply(*x)));
  }
  switch (h.kind()) {
    case HomKind::Identity: return y;
    case HomKind::Scalar: {
      if (h.factor() == 0) return y.is_zero() ? std::optional<Element>(Element::zero(h.domain())) : std::nullopt;
      Rational v = y.value() / h.factor();
      if (h.domain().kind() == GroupKind::Dyadic && !is_dyadic(v)) return std::nullopt;
      return Element::scalar(h.domain(), v);
    }
    case HomKind::Negate: {
      auto x = preimage(h.children()[0], -y);
      return x;
    }
    case HomKind::Inject: {
      for (std::size_t i = 0; i < y.parts().size(); ++i)
        if (static_cast<long>(i) != h.index() && !y.parts()[i].is_zero()) return std::nullopt;
      return y.parts()[static_cast<std::size_t>(h.index())];
    }
    case HomKind::Compose: {
      std::optional<Element> x = y;
      const auto& c = h.children();
      for (auto it = c.rbegin(); it != c.rend() && x; ++it) x = preimage(*it, *x);
      return check(x);
    }
    case HomKind::DirectSumOf: {
      std::vector<Element> parts;
      for (std::size_t i = 0; i < h.children().size(); ++i) {
        auto x = preimage(h.children()[i], y.parts()[i]);
        if (!x) return std::nullopt;
        parts.push_back(*x);
      }
      return Element::sum(h.domain(), std::move(parts));
    }
    case HomKind::Section: {
      if (!y.deviations().empty()) return std::nullopt;
      auto a = preimage(h.children()[0], y.base());
      return a ? check(a) : std::nullopt;
    }
    case HomKind::ProjectBase:
      if (h.domain().component().is_trivial()) return Element::tail(h.domain(), y, {});
      break;
    case HomKind::Family: {
      auto a = preimage(h.children()[0], y.base());
      if (!a) return std::nullopt;
      const GroupExpr& dom = h.domain();
      Element guess = Element::tail(dom, *a, {});
      Element image = h.apply(guess);
      std::map<long, Element> values;
      std::set<long> coords;
      for (const auto& [t, d] : y.deviations()) coords.insert(t);
      for (const auto& [t, d] : image.deviations()) coords.insert(t);
      for (long t : coords) {
        const HomExpr& g = h.components().at(h.codomain().rule().rank(t));
        auto v = preimage(g, y.coordinate(t));
        if (!v) return std::nullopt;
        values.emplace(source_coordinate(h.index_map(), t), *v);
      }
      return check(Element::tail_from_values(dom, *a, values));
    }
    default: break;
  }
  throw UnsupportedKind(std::string("no preimage solver for ") + kind_name(h.kind()) + " maps");
}

std::optional<bool> is_injective(const HomExpr& h) {
  if (is_finitely_generated(h.domain()) && is_finitely_generated(h.codomain()))
    return is_injective(to_fg_hom(h));
  switch (h.kind()) {
    case HomKind::Identity:
    case HomKind::Inject: return true;
    case HomKind::Zero: return h.domain().is_trivial();
    case HomKind::Scalar: return h.factor() != 0;
    case HomKind::DyadicToFinite: return false;
    case HomKind::Negate: return is_injective(h.children()[0]);
    case HomKind::Section: return is_injective(h.children()[0]);
    case HomKind::ProjectBase:
      if (h.domain().component().is_trivial()) return true;
      return std::nullopt;
    case HomKind::Compose: {
      bool all = true;
      for (const auto& c : h.children()) {
        auto r = is_injective(c);
        if (!r || !*r) all = false;
      }
      if (all) return true;
      auto first = is_injective(h.children().front());
      if (first && !*first) return false;
      return std::nullopt;
    }
    case HomKind::DirectSumOf:
    case HomKind::Family: {
      std::vector<HomExpr> parts = h.children();
      if (h.kind() == HomKind::Family) {
        parts.insert(parts.end(), h.components().head.begin(), h.components().head.end());
        parts.insert(parts.end(), h.components().period.begin(), h.components().period.end());
      }
      bool all = true;
      for (const auto& c : parts) {
        auto r = is_injective(c);
        if (!r) return std::nullopt;
        all = all && *r;
      }
      if (all) return true;
      if (h.kind() == HomKind::DirectSumOf) return false;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

}  // namespace totalk

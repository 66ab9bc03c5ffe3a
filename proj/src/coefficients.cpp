#include "totalk/coefficients.hpp"

#include <functional>
#include <map>
#include <mutex>

#include "totalk/errors.hpp"

namespace totalk {

namespace {

std::recursive_mutex cache_lock;
std::map<std::pair<const void*, long>, std::pair<GroupExpr, CoefficientReduction>>& cache() {
  static std::map<std::pair<const void*, long>, std::pair<GroupExpr, CoefficientReduction>> c;
  return c;
}

CoefficientReduction compute(const GroupExpr& g, long n) {
  CoefficientReduction r;
  switch (g.kind()) {
    case GroupKind::Fg: {
      TensorTor tt = tensor_tor_cyclic(g.fg_group(), n);
      r.tensor = GroupExpr::fg(tt.tensor);
      r.tor = GroupExpr::fg(tt.tor);
      r.reduction = HomExpr::fg_matrix(g, r.tensor, tt.reduction.matrix());
      r.tor_inclusion = HomExpr::fg_matrix(r.tor, g, tt.tor_inclusion.matrix());
      return r;
    }
    case GroupKind::Dyadic: {
      long l = odd_part(n);
      r.tensor = GroupExpr::cyclic(l);
      r.tor = GroupExpr::trivial();
      Element one = l == 1 ? Element::zero(r.tensor) : Element::fg(r.tensor, {Integer(1)});
      r.reduction = HomExpr::dyadic_to_finite(r.tensor, one);
      r.tor_inclusion = HomExpr::zero(r.tor, g);
      return r;
    }
    case GroupKind::Rational:
      r.tensor = GroupExpr::trivial();
      r.tor = GroupExpr::trivial();
      r.reduction = HomExpr::zero(g, r.tensor);
      r.tor_inclusion = HomExpr::zero(r.tor, g);
      return r;
    case GroupKind::DirectSum: {
      std::vector<GroupExpr> tensors, tors;
      std::vector<HomExpr> reds, incls;
      for (const auto& s : g.summands()) {
        const auto& c = coeff_reduce(s, n);
        tensors.push_back(c.tensor);
        tors.push_back(c.tor);
        reds.push_back(c.reduction);
        incls.push_back(c.tor_inclusion);
      }
      r.reduction = HomExpr::direct_sum_of(reds);
      r.tor_inclusion = HomExpr::direct_sum_of(incls);
      r.tensor = r.reduction.codomain();
      r.tor = r.tor_inclusion.domain();
      return r;
    }
    case GroupKind::TailProduct: {
      const auto& cb = coeff_reduce(g.base(), n);
      const auto& cc = coeff_reduce(g.component(), n);
      TailRule tensor_rule{g.rule().index_set, g.rule().stabilization, {}, g.rule().scale};
      TailRule tor_rule = tensor_rule;
      for (const auto& m : g.rule().maps) {
        ReducedHom rh = reduce_hom(m, n);
        tensor_rule.maps.push_back(rh.tensor);
        tor_rule.maps.push_back(rh.tor);
      }
      r.tensor = GroupExpr::tail_product(cb.tensor, cc.tensor, tensor_rule);
      r.tor = GroupExpr::tail_product(cb.tor, cc.tor, tor_rule);
      r.reduction = HomExpr::family(g, r.tensor, cb.reduction, CoordFamily::constant(cc.reduction));
      r.tor_inclusion = HomExpr::family(r.tor, g, cb.tor_inclusion, CoordFamily::constant(cc.tor_inclusion));
      return r;
    }
    case GroupKind::Quotient: break;
  }
  throw UnsupportedKind("coefficient reduction of " + g.to_string() + " is not implemented");
}

}  // namespace

const CoefficientReduction& coeff_reduce(const GroupExpr& g, long n) {
  if (n < 1) throw OutOfRange("coefficient modulus must be positive");
  std::lock_guard guard(cache_lock);
  auto key = std::make_pair(g.id(), n);
  auto it = cache().find(key);
  if (it != cache().end()) return it->second.second;
  CoefficientReduction r = compute(g, n);
  return cache().emplace(key, std::make_pair(g, std::move(r))).first->second.second;
}

Element lift_from_tensor(const GroupExpr& g, long n, const Element& x) {
  const auto& c = coeff_reduce(g, n);
  switch (g.kind()) {
    case GroupKind::Fg: {
      TensorTor tt = tensor_tor_cyclic(g.fg_group(), n);
      return Element::fg(g, tt.tensor_lift.apply(x.coords()));
    }
    case GroupKind::Dyadic:
      return Element::scalar(g, x.coords().empty() ? Rational(0) : Rational(x.coords()[0]));
    case GroupKind::Rational: return Element::zero(g);
    case GroupKind::DirectSum: {
      std::vector<Element> parts;
      for (std::size_t i = 0; i < g.summands().size(); ++i)
        parts.push_back(lift_from_tensor(g.summands()[i], n, x.parts()[i]));
      return Element::sum(g, std::move(parts));
    }
    case GroupKind::TailProduct: {
      (void)c;
      std::map<long, Element> dev;
      for (const auto& [m, d] : x.deviations()) dev.emplace(m, lift_from_tensor(g.component(), n, d));
      return Element::tail(g, lift_from_tensor(g.base(), n, x.base()), dev);
    }
    default: break;
  }
  throw UnsupportedKind("no tensor lift for " + g.to_string());
}

Element tor_preimage(const GroupExpr& g, long n, const Element& y) {
  const auto& c = coeff_reduce(g, n);
  switch (g.kind()) {
    case GroupKind::Fg: {
      TensorTor tt = tensor_tor_cyclic(g.fg_group(), n);
      auto x = preimage(tt.tor_inclusion, y.coords());
      if (!x) throw DomainMismatch(y.to_string() + " is not " + std::to_string(n) + "-torsion");
      return Element::fg(c.tor, *x);
    }
    case GroupKind::Dyadic:
    case GroupKind::Rational:
      if (!y.is_zero()) throw DomainMismatch(y.to_string() + " is not torsion");
      return Element::zero(c.tor);
    case GroupKind::DirectSum: {
      std::vector<Element> parts;
      for (std::size_t i = 0; i < g.summands().size(); ++i)
        parts.push_back(tor_preimage(g.summands()[i], n, y.parts()[i]));
      return Element::sum(c.tor, std::move(parts));
    }
    case GroupKind::TailProduct: {
      std::map<long, Element> dev;
      for (const auto& [m, d] : y.deviations()) dev.emplace(m, tor_preimage(g.component(), n, d));
      return Element::tail(c.tor, tor_preimage(g.base(), n, y.base()), dev);
    }
    default: break;
  }
  throw UnsupportedKind("no Tor preimage for " + g.to_string());
}

namespace {

// Map between flat groups given by its values on flat generators.
HomExpr flat_map(const GroupExpr& dom, const GroupExpr& cod, const std::function<Element(const Element&)>& f) {
  auto orders = *flat_orders(dom);
  auto cod_orders = *flat_orders(cod);
  IntMatrix m(cod_orders.size(), orders.size());
  for (std::size_t j = 0; j < orders.size(); ++j) {
    std::vector<Integer> e(orders.size(), Integer(0));
    e[j] = 1;
    m.set_column(j, flat_coords(f(from_flat_coords(dom, e))));
  }
  return HomExpr::fg_matrix(dom, cod, m);
}

bool flat(const GroupExpr& g) { return is_finitely_generated(g); }

}  // namespace

HomExpr tensor_coefficient_map(const GroupExpr& g, long m, long n, const Integer& c) {
  const auto& rm = coeff_reduce(g, m);
  const auto& rn = coeff_reduce(g, n);
  if (flat(rm.tensor) && flat(rn.tensor) && g.kind() != GroupKind::TailProduct)
    return flat_map(rm.tensor, rn.tensor,
                    [&](const Element& x) { return rn.reduction.apply(lift_from_tensor(g, m, x).times(c)); });
  switch (g.kind()) {
    case GroupKind::DirectSum: {
      std::vector<HomExpr> parts;
      for (const auto& s : g.summands()) parts.push_back(tensor_coefficient_map(s, m, n, c));
      return HomExpr::direct_sum_of(parts);
    }
    case GroupKind::TailProduct:
      return HomExpr::family(rm.tensor, rn.tensor, tensor_coefficient_map(g.base(), m, n, c),
                             CoordFamily::constant(tensor_coefficient_map(g.component(), m, n, c)));
    default: break;
  }
  throw UnsupportedKind("coefficient map on " + g.to_string());
}

HomExpr tor_coefficient_map(const GroupExpr& g, long m, long n, const Integer& c) {
  Integer cm = c * m;
  if (!mpz_divisible_ui_p(cm.get_mpz_t(), static_cast<unsigned long>(n)))
    throw DomainMismatch("[1]_" + std::to_string(m) + " -> " + c.get_str() + "[1]_" + std::to_string(n) +
                         " is not a homomorphism");
  Integer f = cm / n;
  const auto& rm = coeff_reduce(g, m);
  const auto& rn = coeff_reduce(g, n);
  if (flat(rm.tor) && flat(rn.tor) && g.kind() != GroupKind::TailProduct)
    return flat_map(rm.tor, rn.tor,
                    [&](const Element& x) { return tor_preimage(g, n, rm.tor_inclusion.apply(x).times(f)); });
  switch (g.kind()) {
    case GroupKind::DirectSum: {
      std::vector<HomExpr> parts;
      for (const auto& s : g.summands()) parts.push_back(tor_coefficient_map(s, m, n, c));
      return HomExpr::direct_sum_of(parts);
    }
    case GroupKind::TailProduct:
      return HomExpr::family(rm.tor, rn.tor, tor_coefficient_map(g.base(), m, n, c),
                             CoordFamily::constant(tor_coefficient_map(g.component(), m, n, c)));
    default: break;
  }
  throw UnsupportedKind("coefficient map on Tor of " + g.to_string());
}

ReducedHom reduce_hom(const HomExpr& h, long n) {
  const GroupExpr& dom = h.domain();
  const GroupExpr& cod = h.codomain();
  const auto& rd = coeff_reduce(dom, n);
  const auto& rc = coeff_reduce(cod, n);
  if (flat(dom) && flat(cod) && flat(rd.tensor) && flat(rc.tensor)) {
    HomExpr t = flat_map(rd.tensor, rc.tensor,
                         [&](const Element& x) { return rc.reduction.apply(h.apply(lift_from_tensor(dom, n, x))); });
    HomExpr tor = flat_map(rd.tor, rc.tor,
                           [&](const Element& x) { return tor_preimage(cod, n, h.apply(rd.tor_inclusion.apply(x))); });
    return {t, tor};
  }
  auto rec = [n](const HomExpr& c) { return reduce_hom(c, n); };
  switch (h.kind()) {
    case HomKind::Identity: return {HomExpr::identity(rd.tensor), HomExpr::identity(rd.tor)};
    case HomKind::Zero: return {HomExpr::zero(rd.tensor, rc.tensor), HomExpr::zero(rd.tor, rc.tor)};
    case HomKind::Negate: {
      auto r = rec(h.children()[0]);
      return {HomExpr::negate(r.tensor), HomExpr::negate(r.tor)};
    }
    case HomKind::Sum: {
      auto a = rec(h.children()[0]), b = rec(h.children()[1]);
      return {HomExpr::sum(a.tensor, b.tensor), HomExpr::sum(a.tor, b.tor)};
    }
    case HomKind::Compose: {
      std::vector<HomExpr> t, tor;
      for (const auto& c : h.children()) {
        auto r = rec(c);
        t.push_back(r.tensor);
        tor.push_back(r.tor);
      }
      return {HomExpr::chain(t), HomExpr::chain(tor)};
    }
    case HomKind::Scalar:
    case HomKind::DyadicToFinite: {
      HomExpr tor = HomExpr::zero(rd.tor, rc.tor);
      if (rd.tensor.is_trivial() || rc.tensor.is_trivial()) return {HomExpr::zero(rd.tensor, rc.tensor), tor};
      HomExpr t = flat_map(rd.tensor, rc.tensor, [&](const Element& x) {
        return rc.reduction.apply(h.apply(lift_from_tensor(dom, n, x)));
      });
      return {t, tor};
    }
    case HomKind::Family: {
      auto base = rec(h.children()[0]);
      CoordFamily ft, fo;
      ft.stabilization = fo.stabilization = h.components().stabilization;
      for (const auto& c : h.components().head) {
        auto r = rec(c);
        ft.head.push_back(r.tensor);
        fo.head.push_back(r.tor);
      }
      for (const auto& c : h.components().period) {
        auto r = rec(c);
        ft.period.push_back(r.tensor);
        fo.period.push_back(r.tor);
      }
      return {HomExpr::family(rd.tensor, rc.tensor, base.tensor, ft, h.index_map()),
              HomExpr::family(rd.tor, rc.tor, base.tor, fo, h.index_map())};
    }
    case HomKind::Section: {
      auto b = rec(h.children()[0]);
      return {HomExpr::section(rc.tensor, b.tensor), HomExpr::section(rc.tor, b.tor)};
    }
    case HomKind::ProjectBase: return {HomExpr::project_base(rd.tensor), HomExpr::project_base(rd.tor)};
    case HomKind::Coordinate:
      return {HomExpr::coordinate(rd.tensor, h.index()), HomExpr::coordinate(rd.tor, h.index())};
    case HomKind::Insert: return {HomExpr::insert(rc.tensor, h.index()), HomExpr::insert(rc.tor, h.index())};
    case HomKind::Inject: {
      auto i = static_cast<std::size_t>(h.index());
      return {HomExpr::inject(rc.tensor, i), HomExpr::inject(rc.tor, i)};
    }
    case HomKind::Project: {
      auto i = static_cast<std::size_t>(h.index());
      return {HomExpr::project(rd.tensor, i), HomExpr::project(rd.tor, i)};
    }
    case HomKind::DirectSumOf: {
      std::vector<HomExpr> t, tor;
      for (const auto& c : h.children()) {
        auto r = rec(c);
        t.push_back(r.tensor);
        tor.push_back(r.tor);
      }
      return {HomExpr::direct_sum_of(t), HomExpr::direct_sum_of(tor)};
    }
    default: break;
  }
  throw UnsupportedKind(std::string("no coefficient reduction for ") + kind_name(h.kind()) + " maps");
}

}  // namespace totalk

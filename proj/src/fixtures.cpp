#include "totalk/fixtures.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

#include "totalk/errors.hpp"

namespace totalk {

const char* cone_name(ConeKind k) {
  switch (k) {
    case ConeKind::Trivial: return "trivial";
    case ConeKind::Nonnegative: return "nonnegative";
    case ConeKind::ProductPositive: return "product_positive";
    case ConeKind::FirstCoordinatePositive: return "first_coordinate_positive";
    case ConeKind::Extension: return "extension";
    case ConeKind::TotalExtension: return "total_extension";
  }
  return "?";
}

// ---------------------------------------------------------------- cones

namespace {

bool ordered(const GroupExpr& g) { return g.kind() == GroupKind::Dyadic || g.kind() == GroupKind::Rational; }

bool product_positive(const Element& x) {
  const GroupExpr& g = x.owner();
  if (g.kind() != GroupKind::TailProduct || !ordered(g.base()) || !ordered(g.component()))
    throw ShapeMismatch("product cone needs a tail product over ordered groups, got " + g.to_string());
  if (x.base().value() < 0) return false;
  const TailRule& r = g.rule();
  long limit = std::max<long>(x.tail_start(), r.stabilization) + 2 * r.period();
  for (long k = 1; k <= limit; ++k)
    for (long m : {-k, k})
      if (r.valid_coordinate(m) && x.coordinate(m).value() < 0) return false;
  return true;
}

}  // namespace

bool cone_membership(const ConeSpec& cone, const Element& x) {
  switch (cone.kind) {
    case ConeKind::Trivial: return x.is_zero();
    case ConeKind::Nonnegative:
      if (!ordered(x.owner())) throw ShapeMismatch("order cone on " + x.owner().to_string());
      return x.value() >= 0;
    case ConeKind::ProductPositive: return product_positive(x);
    case ConeKind::FirstCoordinatePositive:
      if (x.owner().kind() != GroupKind::DirectSum || x.owner().summands().empty() ||
          x.owner().summands()[0].kind() != GroupKind::Rational)
        throw ShapeMismatch("first-coordinate cone on " + x.owner().to_string());
      return x.parts()[0].value() > 0 || x.is_zero();
    case ConeKind::Extension: {
      Element q = cone.projection->apply(x);
      if (!q.is_zero() && cone_membership(*cone.quotient_cone, q)) return true;
      auto b = preimage(*cone.inclusion, x);
      return b && cone_membership(*cone.sub_cone, *b);
    }
    case ConeKind::TotalExtension: throw ShapeMismatch("total cone needs a total element");
  }
  return false;
}

int total_cone_condition(const ConeSpec& cone, const TotalElement& x) {
  if (cone.kind != ConeKind::TotalExtension) throw ShapeMismatch("not a total cone");
  auto it = x.find({0, 0});
  if (it == x.end()) throw ShapeMismatch("total element needs its K0 part");
  const Element& k0 = it->second;
  if (k0.parts().at(0).value() > 0) return 1;
  if (k0.parts().at(0).value() < 0) return 0;
  auto b = preimage(*cone.inclusion, k0);
  if (!b || !cone_membership(*cone.sub_cone, *b)) return 0;
  if (b->base().value() > 0) return 2;
  for (const auto& [lvl, e] : x)
    if (lvl != Level{0, 0} && !e.is_zero()) return 0;
  return 3;
}

bool cone_membership(const ConeSpec& cone, const TotalElement& x) {
  if (cone.kind == ConeKind::TotalExtension) return total_cone_condition(cone, x) != 0;
  auto it = x.find({0, 0});
  if (it == x.end()) throw ShapeMismatch("total element needs its K0 part");
  return cone_membership(cone, it->second);
}

// ---------------------------------------------------------------- groups

namespace {

TailRule signed_factorial_rule(const GroupExpr& g) {
  TailRule r;
  r.index_set = IndexSet::NonzeroInteger;
  r.stabilization = 1;
  r.maps = {HomExpr::scalar(g, g, 1)};
  r.scale = ScalarSequence::odd_factorial(1);
  return r;
}

}  // namespace

GroupExpr bold_z() {
  static const GroupExpr g = GroupExpr::tail_product(GroupExpr::dyadic(), GroupExpr::dyadic(),
                                                     signed_factorial_rule(GroupExpr::dyadic()));
  return g;
}

GroupExpr bold_q() {
  static const GroupExpr g = GroupExpr::tail_product(GroupExpr::rational(), GroupExpr::rational(),
                                                     signed_factorial_rule(GroupExpr::rational()));
  return g;
}

// ---------------------------------------------------------------- fixture cache

namespace {

struct Fixtures {
  long bound;
  FixtureBundle a, b, d, dprime, f1, f2, achi, e1, e2, re1, re2;
  GradedHom phi, phi_prime, omega_base, omega_base_prime, gamma, gamma_inverse, eta, iota1, iota2, zeta;
  HomExpr pi1, pi2;
};

// Flat coordinates of K0(A;Z_k) are (x, y) with x present iff l_k > 1 and y iff 3 | k.
HomExpr level_map(const TotalK& a, const TotalK& b, long k, const Integer& x_coef, const Integer& y_coef) {
  const GroupExpr& dom = a.group(0, k);
  const GroupExpr& cod = b.group(0, k);
  auto dord = *flat_orders(dom);
  auto cord = *flat_orders(cod);
  IntMatrix m(cord.size(), dord.size());
  bool has_x = odd_part(k) > 1;
  if (!cord.empty()) {
    std::size_t col = 0;
    if (has_x) m(0, col++) = x_coef;
    if (k % 3 == 0) m(0, col) = y_coef;
  }
  return HomExpr::fg_matrix(dom, cod, m);
}

// Graded map A -> B with integral K0 part `k0` and level-k K0 parts x -> a x + sign y [k/3].
GradedHom a_to_b(const TotalKPtr& a, const TotalKPtr& b, const HomExpr& k0, long x_coef, int sign) {
  GradedHom g(a, b);
  g.set(0, 0, k0);
  g.set(1, 0, HomExpr::zero(a->group(1, 0), b->group(1, 0)));
  long bound = std::min(a->bound(), b->bound());
  for (long k = 1; k <= bound; ++k) {
    Integer y = k % 3 == 0 ? Integer(sign * (k / 3)) : Integer(0);
    g.set(0, k, level_map(*a, *b, k, x_coef, y));
    g.set(1, k, HomExpr::zero(a->group(1, k), b->group(1, k)));
  }
  return g;
}

GradedHom family_graded(const TotalKPtr& src, const TotalKPtr& tgt,
                        const std::function<CoordFamily(int, long, const GroupExpr&)>& comps) {
  GradedHom g(src, tgt);
  for (int j = 0; j < 2; ++j)
    for (long n = 0; n <= src->bound(); ++n) {
      if (!src->has(j, n) || !tgt->has(j, n)) continue;
      const GroupExpr& s = src->group(j, n);
      g.set(j, n, HomExpr::family(s, tgt->group(j, n), HomExpr::identity(s.base()), comps(j, n, s.component())));
    }
  return g;
}

FixtureBundle remark_bundle(int i, long bound) {
  GroupExpr z = GroupExpr::cyclic(0);
  GroupExpr z3 = GroupExpr::cyclic(3);
  TailRule rule;
  rule.maps = {HomExpr::fg_matrix(z, z3, IntMatrix::from_rows({{Integer(i == 1 ? 1 : -1)}}))};
  GroupExpr k1 = GroupExpr::tail_product(z, z3, rule);
  auto tk = std::make_shared<TotalK>(bound);
  tk->set_group(1, 0, k1);
  for (long n = 1; n <= bound; ++n) {
    const auto& r = coeff_reduce(k1, n);
    tk->set_group(0, n, r.tor);
    tk->set_group(1, n, r.tensor);
    tk->set_rho(1, n, r.reduction);
    tk->set_beta(0, n, r.tor_inclusion);
  }
  for (auto [from, to] : kappa_pairs(bound)) {
    Integer c = to % from == 0 ? Integer(to / from) : Integer(1);
    tk->set_kappa(0, from, to, tor_coefficient_map(k1, from, to, c));
    tk->set_kappa(1, from, to, tensor_coefficient_map(k1, from, to, c));
  }
  FixtureBundle fb;
  fb.name = i == 1 ? "RemarkE1" : "RemarkE2";
  fb.k = tk;
  fb.notes = {"integral K0 depends on data the construction leaves unspecified; it is absent",
              "rho at K0 levels and beta at K1 levels are absent for the same reason"};
  return fb;
}

std::unique_ptr<Fixtures> build(long bound) {
  auto fx = std::make_unique<Fixtures>();
  fx->bound = bound;
  GroupExpr dy = GroupExpr::dyadic();

  auto ka = build_total_k(dy, GroupExpr::cyclic(3), bound);
  auto kb = build_total_k(dy, GroupExpr::trivial(), bound);
  fx->a = FixtureBundle{"A", ka, Element::scalar(ka->group(0, 0), 1), ConeSpec{ConeKind::Nonnegative}, {}, {}};
  fx->b = FixtureBundle{"B", kb, Element::scalar(kb->group(0, 0), 3), ConeSpec{ConeKind::Nonnegative}, {}, {}};

  fx->phi = a_to_b(ka, kb, HomExpr::scalar(dy, dy, 3), 3, 1);
  fx->phi_prime = a_to_b(ka, kb, HomExpr::scalar(dy, dy, 3), 3, -1);
  fx->omega_base = a_to_b(ka, kb, HomExpr::scalar(dy, dy, 1), 0, 1);
  fx->omega_base_prime = a_to_b(ka, kb, HomExpr::scalar(dy, dy, 1), 0, -1);

  auto make_f = [&](const std::string& name, std::vector<GradedHom> period, ScalarSequence scale) {
    auto k = f_construction_k(FData{ka, kb, std::move(period), scale});
    Element s = Element::tail(k->group(0, 0), Element::scalar(dy, 1), {});
    return FixtureBundle{name, k, s, ConeSpec{ConeKind::ProductPositive}, {}, {}};
  };
  fx->d = make_f("D", {fx->phi}, ScalarSequence::one());
  fx->dprime = make_f("Dprime", {fx->phi, fx->phi_prime}, ScalarSequence::one());
  fx->f1 = make_f("F1", {fx->omega_base}, ScalarSequence::odd_factorial(2));
  fx->f2 = make_f("F2", {fx->omega_base, fx->omega_base_prime}, ScalarSequence::odd_factorial(2));

  // A_chi: K0 = Q + boldQ/boldZ, K1 = 0; only integral levels are recorded.
  GroupExpr q = GroupExpr::rational();
  GroupExpr qz = GroupExpr::quotient(bold_q(), bold_z());
  GroupExpr achi0 = GroupExpr::direct_sum({q, qz});
  auto kchi = std::make_shared<TotalK>(bound);
  kchi->set_group(0, 0, achi0);
  kchi->set_group(1, 0, GroupExpr::trivial());
  fx->achi = FixtureBundle{"Achi", kchi,
                           Element::sum(achi0, {Element::scalar(q, 1), Element::zero(qz)}),
                           ConeSpec{ConeKind::FirstCoordinatePositive},
                           {},
                           {"mod-n levels are not recorded"}};

  for (int i = 1; i <= 2; ++i) {
    const TotalKPtr& kf = (i == 1 ? fx->f1 : fx->f2).k;
    GroupExpr e0 = GroupExpr::direct_sum({q, bold_q()});
    auto ke = build_total_k(e0, GroupExpr::cyclic(3), bound);
    GradedHom iota(kf, ke);
    HomExpr incl = HomExpr::family(kf->group(0, 0), bold_q(), HomExpr::scalar(dy, q, 1),
                                   CoordFamily::constant(HomExpr::scalar(dy, q, 1)), IndexMap::PairsToSigned);
    iota.set(0, 0, HomExpr::chain({incl, HomExpr::inject(e0, 1)}));
    iota.set(1, 0, HomExpr::project_base(kf->group(1, 0)));
    for (long n = 1; n <= bound; ++n) {
      iota.set(0, n, HomExpr::chain({HomExpr::project_base(kf->group(0, n)), HomExpr::project(ka->group(0, n), 1),
                                     HomExpr::inject(ke->group(0, n), 1)}));
      iota.set(1, n, HomExpr::chain({HomExpr::project_base(kf->group(1, n)), HomExpr::project(ka->group(1, n), 0),
                                     HomExpr::inject(ke->group(1, n), 0)}));
    }
    HomExpr pi = HomExpr::direct_sum_of({HomExpr::identity(q), HomExpr::quotient_map(qz)});
    ConeSpec cone;
    cone.kind = ConeKind::Extension;
    cone.projection = pi;
    cone.quotient_cone = std::make_shared<ConeSpec>(ConeSpec{ConeKind::FirstCoordinatePositive});
    cone.inclusion = iota.at(0, 0);
    cone.sub_cone = std::make_shared<ConeSpec>(ConeSpec{ConeKind::ProductPositive});
    ConeSpec total = cone;
    total.kind = ConeKind::TotalExtension;
    FixtureBundle eb{i == 1 ? "E1" : "E2", ke,
                     Element::sum(e0, {Element::scalar(q, 1), Element::zero(bold_q())}), cone, total, {}};
    if (i == 1) {
      fx->e1 = eb;
      fx->iota1 = iota;
      fx->pi1 = pi;
    } else {
      fx->e2 = eb;
      fx->iota2 = iota;
      fx->pi2 = pi;
    }
  }

  auto flip_even = [](int j, long n, const GroupExpr& comp) {
    HomExpr id = HomExpr::identity(comp);
    if (j == 0 && n > 0) return CoordFamily::periodic({id, HomExpr::negate(id)});
    return CoordFamily::constant(id);
  };
  fx->gamma = family_graded(fx->f1.k, fx->f2.k, flip_even);
  fx->gamma_inverse = family_graded(fx->f2.k, fx->f1.k, flip_even);
  fx->eta = GradedHom(fx->e1.k, fx->e2.k);
  for (int j = 0; j < 2; ++j)
    for (long n = 0; n <= bound; ++n) fx->eta.set(j, n, HomExpr::identity(fx->e1.k->group(j, n)));

  fx->re1 = remark_bundle(1, bound);
  fx->re2 = remark_bundle(2, bound);
  fx->zeta = GradedHom(fx->re1.k, fx->re2.k);
  {
    const TotalK& r1 = *fx->re1.k;
    const TotalK& r2 = *fx->re2.k;
    auto flip = [](const GroupExpr& s, const GroupExpr& t) {
      return HomExpr::family(s, t, HomExpr::identity(s.base()),
                             CoordFamily::constant(HomExpr::negate(HomExpr::identity(s.component()))));
    };
    fx->zeta.set(1, 0, flip(r1.group(1, 0), r2.group(1, 0)));
    for (long n = 1; n <= bound; ++n) {
      fx->zeta.set(0, n, HomExpr::negate(HomExpr::identity(r1.group(0, n))));
      fx->zeta.set(1, n, flip(r1.group(1, n), r2.group(1, n)));
    }
  }

  fx->a.graded_maps = {{"phi", fx->phi}, {"phiprime", fx->phi_prime}, {"omega", fx->omega_base},
                       {"omegaprime", fx->omega_base_prime}};
  fx->f1.graded_maps = {{"gamma", fx->gamma}, {"iota", fx->iota1}};
  fx->f2.graded_maps = {{"gamma_inverse", fx->gamma_inverse}, {"iota", fx->iota2}};
  fx->e1.graded_maps = {{"iota", fx->iota1}, {"eta", fx->eta}};
  fx->e1.maps = {{"pi", fx->pi1}};
  fx->e2.graded_maps = {{"iota", fx->iota2}};
  fx->e2.maps = {{"pi", fx->pi2}};
  fx->re1.graded_maps = {{"zeta", fx->zeta}};

  // Bundles with every level present must satisfy the six-term sequences.
  for (const FixtureBundle* b : {&fx->a, &fx->b, &fx->d, &fx->dprime, &fx->f1, &fx->f2, &fx->e1, &fx->e2})
    for (int j = 0; j < 2; ++j)
      for (long n = 1; n <= bound; ++n) {
        auto r = check_six_term(*b->k, j, n);
        if (!r.exact) throw IllDefined(b->name + ": six-term sequence fails at " + level_string(j, n));
      }
  return fx;
}

const Fixtures& fixtures(long bound) {
  if (bound < 1) throw OutOfRange("coefficient bound must be positive");
  static std::mutex lock;
  static std::map<long, std::unique_ptr<Fixtures>> cache;
  std::lock_guard guard(lock);
  auto it = cache.find(bound);
  if (it == cache.end()) it = cache.emplace(bound, build(bound)).first;
  return *it->second;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"A",    "B",  "D",  "Dprime",   "F1",      "F2",
                                              "Achi", "E1", "E2", "RemarkE1", "RemarkE2"};
  return names;
}

FixtureBundle load_fixture(const std::string& name, long bound) {
  const auto& names = fixture_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw UnknownFixture("unknown fixture: " + name);
  const Fixtures& fx = fixtures(bound);
  const FixtureBundle* all[] = {&fx.a, &fx.b, &fx.d, &fx.dprime, &fx.f1, &fx.f2, &fx.achi, &fx.e1, &fx.e2, &fx.re1, &fx.re2};
  for (const auto* b : all)
    if (b->name == name) return *b;
  throw UnknownFixture("unknown fixture: " + name);
}

HomExpr omega_map(long j, bool primed, long k, long bound) {
  if (j < 1) throw OutOfRange("omega index must be at least 1");
  if (k < 0 || k > bound) throw OutOfRange("coefficient " + std::to_string(k) + " outside 0.." + std::to_string(bound));
  const Fixtures& fx = fixtures(bound);
  if (k == 0) return HomExpr::scalar(GroupExpr::dyadic(), GroupExpr::dyadic(), Rational(odd_part_factorial(j)));
  return (primed ? fx.omega_base_prime : fx.omega_base).at(0, k);
}

GradedHom omega_graded(long j, bool primed, long bound) {
  if (j < 1) throw OutOfRange("omega index must be at least 1");
  const Fixtures& fx = fixtures(bound);
  GradedHom g = primed ? fx.omega_base_prime : fx.omega_base;
  g.set(0, 0, omega_map(j, primed, 0, bound));
  return g;
}

GradedHom phi_graded(bool primed, long bound) {
  const Fixtures& fx = fixtures(bound);
  return primed ? fx.phi_prime : fx.phi;
}

GradedHom gamma_map(long bound) { return fixtures(bound).gamma; }
GradedHom gamma_inverse_map(long bound) { return fixtures(bound).gamma_inverse; }
GradedHom eta_map(long bound) { return fixtures(bound).eta; }
GradedHom zeta_map(long bound) { return fixtures(bound).zeta; }

GradedHom iota_map(int i, long bound) {
  if (i != 1 && i != 2) throw OutOfRange("iota index must be 1 or 2");
  return i == 1 ? fixtures(bound).iota1 : fixtures(bound).iota2;
}

HomExpr pi_map(int i, long bound) {
  if (i != 1 && i != 2) throw OutOfRange("pi index must be 1 or 2");
  return i == 1 ? fixtures(bound).pi1 : fixtures(bound).pi2;
}

}  // namespace totalk

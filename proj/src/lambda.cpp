#include "totalk/lambda.hpp"

#include <algorithm>
#include <sstream>

#include "totalk/errors.hpp"

namespace totalk {

std::string level_string(int j, long n) {
  return n == 0 ? "K" + std::to_string(j) : "K" + std::to_string(j) + "(;Z_" + std::to_string(n) + ")";
}

// ---------------------------------------------------------------- TotalK

bool TotalK::has(int j, long n) const { return groups_.count({j, n}) > 0; }

const GroupExpr& TotalK::group(int j, long n) const {
  auto it = groups_.find({j, n});
  if (it == groups_.end()) throw OutOfRange("level " + level_string(j, n) + " is not available");
  return it->second;
}

const HomExpr& TotalK::rho(int j, long n) const {
  auto it = rho_.find({j, n});
  if (it == rho_.end()) throw OutOfRange("rho at " + level_string(j, n) + " is not available");
  return it->second;
}

const HomExpr& TotalK::beta(int j, long n) const {
  auto it = beta_.find({j, n});
  if (it == beta_.end()) throw OutOfRange("beta at " + level_string(j, n) + " is not available");
  return it->second;
}

const HomExpr& TotalK::kappa(int j, long from, long to) const {
  auto it = kappa_.find({j, from, to});
  if (it == kappa_.end())
    throw OutOfRange("kappa " + level_string(j, from) + " -> " + level_string(j, to) + " is not available");
  return it->second;
}

std::vector<std::tuple<int, long, long>> TotalK::kappa_keys() const {
  std::vector<std::tuple<int, long, long>> out;
  for (const auto& [k, v] : kappa_) out.push_back(k);
  return out;
}

void TotalK::set_group(int j, long n, GroupExpr g) { groups_[{j, n}] = std::move(g); }
void TotalK::set_rho(int j, long n, HomExpr h) { rho_[{j, n}] = std::move(h); }
void TotalK::set_beta(int j, long n, HomExpr h) { beta_[{j, n}] = std::move(h); }
void TotalK::set_kappa(int j, long from, long to, HomExpr h) { kappa_[{j, from, to}] = std::move(h); }

std::vector<std::pair<long, long>> kappa_pairs(long bound) {
  std::vector<std::pair<long, long>> out;
  for (long from = 1; from <= bound; ++from)
    for (long to = 1; to <= bound; ++to)
      if (from != to && (to % from == 0 || from % to == 0)) out.emplace_back(from, to);
  return out;
}

TotalKPtr build_total_k(const GroupExpr& k0, const GroupExpr& k1, long bound) {
  if (bound < 1) throw OutOfRange("coefficient bound must be positive");
  auto tk = std::make_shared<TotalK>(bound);
  const GroupExpr k[2] = {k0, k1};
  tk->set_group(0, 0, k0);
  tk->set_group(1, 0, k1);
  for (long n = 1; n <= bound; ++n)
    for (int j = 0; j < 2; ++j) {
      const auto& t = coeff_reduce(k[j], n);
      const auto& o = coeff_reduce(k[1 - j], n);
      GroupExpr g = GroupExpr::direct_sum({t.tensor, o.tor});
      tk->set_group(j, n, g);
      tk->set_rho(j, n, HomExpr::chain({t.reduction, HomExpr::inject(g, 0)}));
      tk->set_beta(j, n, HomExpr::chain({HomExpr::project(g, 1), o.tor_inclusion}));
    }
  for (auto [from, to] : kappa_pairs(bound))
    for (int j = 0; j < 2; ++j) {
      Integer c = to % from == 0 ? Integer(to / from) : Integer(1);
      HomExpr h = HomExpr::direct_sum_of(
          {tensor_coefficient_map(k[j], from, to, c), tor_coefficient_map(k[1 - j], from, to, c)});
      tk->set_kappa(j, from, to, h);
    }
  return tk;
}

// ---------------------------------------------------------------- GradedHom

long GradedHom::bound() const {
  long b = 0;
  for (const auto& [lvl, h] : maps_) b = std::max(b, lvl.second);
  return b;
}

const HomExpr& GradedHom::at(int j, long n) const {
  auto it = maps_.find({j, n});
  if (it == maps_.end()) throw OutOfRange("graded map has no component at " + level_string(j, n));
  return it->second;
}

void GradedHom::set(int j, long n, HomExpr h) { maps_[{j, n}] = std::move(h); }

GradedHom induced_graded_hom(const TotalKPtr& source, const TotalKPtr& target, const HomExpr& f0,
                             const HomExpr& f1) {
  GradedHom g(source, target);
  const HomExpr f[2] = {f0, f1};
  g.set(0, 0, f0);
  g.set(1, 0, f1);
  long bound = std::min(source->bound(), target->bound());
  for (long n = 1; n <= bound; ++n)
    for (int j = 0; j < 2; ++j)
      g.set(j, n, HomExpr::direct_sum_of({reduce_hom(f[j], n).tensor, reduce_hom(f[1 - j], n).tor}));
  return g;
}

GradedHom identity_graded_hom(const TotalKPtr& k) {
  GradedHom g(k, k);
  for (int j = 0; j < 2; ++j)
    for (long n = 0; n <= k->bound(); ++n)
      if (k->has(j, n)) g.set(j, n, HomExpr::identity(k->group(j, n)));
  return g;
}

GradedHom negate_graded_hom(const GradedHom& h) {
  GradedHom g(h.source(), h.target());
  for (const auto& [lvl, m] : h.components()) g.set(lvl.first, lvl.second, HomExpr::negate(m));
  return g;
}

GradedHom compose_graded_homs(const GradedHom& outer, const GradedHom& inner) {
  GradedHom g(inner.source(), outer.target());
  for (const auto& [lvl, m] : inner.components())
    if (outer.has(lvl.first, lvl.second))
      g.set(lvl.first, lvl.second, HomExpr::compose(outer.at(lvl.first, lvl.second), m));
  return g;
}

GradedEquality graded_homs_equal(const GradedHom& f, const GradedHom& g, long window) {
  GradedEquality out;
  for (const auto& [lvl, m] : f.components()) {
    if (!g.has(lvl.first, lvl.second)) continue;
    auto r = homexpr_equal(m, g.at(lvl.first, lvl.second), window);
    if (!r.equal) {
      out.equal = false;
      out.level = lvl;
      out.witness = r.witness;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------- scaling

namespace {

HomExpr times_map(const GroupExpr& g, const Integer& c) {
  switch (g.kind()) {
    case GroupKind::Dyadic:
    case GroupKind::Rational: return HomExpr::scalar(g, g, Rational(c));
    case GroupKind::DirectSum: {
      std::vector<HomExpr> parts;
      for (const auto& s : g.summands()) parts.push_back(times_map(s, c));
      return HomExpr::direct_sum_of(parts);
    }
    case GroupKind::TailProduct:
      if (!is_finitely_generated(g))
        return HomExpr::family(g, g, times_map(g.base(), c), CoordFamily::constant(times_map(g.component(), c)));
      break;
    default: break;
  }
  auto orders = flat_orders(g);
  if (!orders) throw UnsupportedKind("multiplication map on " + g.to_string());
  IntMatrix m(orders->size(), orders->size());
  for (std::size_t i = 0; i < orders->size(); ++i) m(i, i) = c;
  return HomExpr::fg_matrix(g, g, m);
}

}  // namespace

HomExpr scaled(const HomExpr& f, const Integer& c) {
  if (c == 1) return f;
  return HomExpr::compose(times_map(f.codomain(), c), f);
}

// ---------------------------------------------------------------- F-construction

HomExpr FData::map_at(long m, int j, long n) const {
  if (m < 1) throw OutOfRange("coordinates start at 1");
  const HomExpr& h = period[static_cast<std::size_t>((m - 1) % static_cast<long>(period.size()))].at(j, n);
  if (n == 0) return scaled(h, integral_scale.at(m));
  return h;
}

TotalKPtr f_construction_k(const FData& data) {
  if (data.period.empty()) throw ShapeMismatch("F-construction needs at least one map");
  long bound = std::min(data.a->bound(), data.b->bound());
  auto f = std::make_shared<TotalK>(bound);
  const TotalK& A = *data.a;
  const TotalK& B = *data.b;
  for (int j = 0; j < 2; ++j)
    for (long n = 0; n <= bound; ++n) {
      if (!A.has(j, n) || !B.has(j, n)) continue;
      TailRule rule;
      rule.index_set = IndexSet::Positive;
      rule.stabilization = 1;
      rule.scale = n == 0 ? data.integral_scale : ScalarSequence::one();
      for (const auto& p : data.period) rule.maps.push_back(p.at(j, n));
      f->set_group(j, n, GroupExpr::tail_product(A.group(j, n), B.group(j, n), rule));
    }
  for (int j = 0; j < 2; ++j)
    for (long n = 1; n <= bound; ++n) {
      if (f->has(j, 0) && f->has(j, n) && A.has_rho(j, n) && B.has_rho(j, n))
        f->set_rho(j, n, HomExpr::family(f->group(j, 0), f->group(j, n), A.rho(j, n),
                                         CoordFamily::constant(B.rho(j, n))));
      if (f->has(j, n) && f->has(1 - j, 0) && A.has_beta(j, n) && B.has_beta(j, n))
        f->set_beta(j, n, HomExpr::family(f->group(j, n), f->group(1 - j, 0), A.beta(j, n),
                                          CoordFamily::constant(B.beta(j, n))));
    }
  for (auto [from, to] : kappa_pairs(bound))
    for (int j = 0; j < 2; ++j)
      if (f->has(j, from) && f->has(j, to) && A.has_kappa(j, from, to) && B.has_kappa(j, from, to))
        f->set_kappa(j, from, to, HomExpr::family(f->group(j, from), f->group(j, to), A.kappa(j, from, to),
                                                  CoordFamily::constant(B.kappa(j, from, to))));
  return f;
}

// ---------------------------------------------------------------- checks

SquareResult check_square(const HomExpr& top, const HomExpr& right, const HomExpr& left, const HomExpr& bottom,
                          long window) {
  auto r = homexpr_equal(HomExpr::compose(right, top), HomExpr::compose(bottom, left), window);
  return SquareResult{r.equal, r.witness};
}

namespace {

SixTermNode exactness_node(const std::string& position, const HomExpr& f, const HomExpr& g, long window) {
  SixTermNode node;
  node.position = position;
  const GroupExpr& x = f.domain();
  const GroupExpr& y = f.codomain();
  const GroupExpr& z = g.codomain();
  auto report = [&](const Exactness& e, const Presentation& py) {
    node.exact = e.exact;
    if (!e.exact) {
      node.reason = e.reason;
      node.witness = from_flat_coords(y, py.from_canonical.apply(e.witness)).to_string();
    }
  };
  if (is_finitely_generated(y) && is_finitely_generated(z)) {
    Presentation py = flat_presentation(y);
    FgHom gf = to_fg_hom(g);
    if (is_finitely_generated(x)) {
      report(is_exact_at(to_fg_hom(f), gf), py);
      return node;
    }
    // Image of f replaced by the subgroup generated by images of probes.
    auto probes = probe_elements(x, window);
    IntMatrix m(py.group.generator_count(), probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) m.set_column(i, py.canonical(flat_coords(f.apply(probes[i]))));
    FgHom ff(FgAbGroup(probes.size(), {}), py.group, m);
    report(is_exact_at(ff, gf), py);
    node.decided = !node.exact;
    return node;
  }
  for (const auto& p : probe_elements(x, window)) {
    Element v = g.apply(f.apply(p));
    if (!v.is_zero()) {
      node.exact = false;
      node.reason = "composite does not vanish";
      node.witness = p.to_string();
      return node;
    }
  }
  node.decided = false;
  return node;
}

}  // namespace

SixTermResult check_six_term(const TotalK& k, int j, long n, long window) {
  if (n < 1 || n > k.bound()) throw OutOfRange("coefficient " + std::to_string(n) + " outside 1.." + std::to_string(k.bound()));
  const GroupExpr& kj = k.group(j, 0);
  const GroupExpr& ko = k.group(1 - j, 0);
  HomExpr nj = scaled(HomExpr::identity(kj), n);
  HomExpr no = scaled(HomExpr::identity(ko), n);
  SixTermResult out;
  out.nodes.push_back(exactness_node(level_string(j, 0), nj, k.rho(j, n), window));
  out.nodes.push_back(exactness_node(level_string(j, n), k.rho(j, n), k.beta(j, n), window));
  out.nodes.push_back(exactness_node(level_string(1 - j, 0), k.beta(j, n), no, window));
  bool decided = true;
  for (const auto& node : out.nodes) {
    out.exact = out.exact && node.exact;
    decided = decided && node.decided;
  }
  out.verdict = !out.exact ? "fails" : decided ? "exact" : "probe-verified";
  return out;
}

const char* op_name(LambdaOp op) {
  switch (op) {
    case LambdaOp::Rho: return "rho";
    case LambdaOp::Beta: return "beta";
    case LambdaOp::Kappa: return "kappa";
  }
  return "?";
}

std::string LambdaSquare::location() const {
  std::ostringstream os;
  os << op_name(op) << " at ";
  if (op == LambdaOp::Kappa)
    os << level_string(j, from) << " -> " << level_string(j, to);
  else
    os << level_string(j, from);
  return os.str();
}

LambdaResult check_lambda_linear(const GradedHom& h, const std::set<LambdaOp>& ops, long bound, long window) {
  if (h.bound() < bound || h.source()->bound() < bound || h.target()->bound() < bound)
    throw BoundMismatch("graded map reaches level " + std::to_string(h.bound()) + ", requested " +
                        std::to_string(bound));
  const TotalK& s = *h.source();
  const TotalK& t = *h.target();
  LambdaResult out;
  auto record = [&](LambdaOp op, int j, long from, long to, const SquareResult& r) {
    out.squares.push_back(LambdaSquare{op, j, from, to, r.commutes, r.witness});
    out.commutes = out.commutes && r.commutes;
  };
  for (int j = 0; j < 2; ++j)
    for (long n = 1; n <= bound; ++n) {
      if (ops.count(LambdaOp::Rho) && s.has_rho(j, n) && t.has_rho(j, n) && h.has(j, 0) && h.has(j, n))
        record(LambdaOp::Rho, j, n, n, check_square(s.rho(j, n), h.at(j, n), h.at(j, 0), t.rho(j, n), window));
      if (ops.count(LambdaOp::Beta) && s.has_beta(j, n) && t.has_beta(j, n) && h.has(j, n) && h.has(1 - j, 0))
        record(LambdaOp::Beta, j, n, n,
               check_square(s.beta(j, n), h.at(1 - j, 0), h.at(j, n), t.beta(j, n), window));
    }
  if (ops.count(LambdaOp::Kappa))
    for (auto [from, to] : kappa_pairs(bound))
      for (int j = 0; j < 2; ++j)
        if (s.has_kappa(j, from, to) && t.has_kappa(j, from, to) && h.has(j, from) && h.has(j, to))
          record(LambdaOp::Kappa, j, from, to,
                 check_square(s.kappa(j, from, to), h.at(j, to), h.at(j, from), t.kappa(j, from, to), window));
  return out;
}

KStarMaps restrict_to_kstar(const GradedHom& h) { return KStarMaps{h.at(0, 0), h.at(1, 0)}; }

}  // namespace totalk

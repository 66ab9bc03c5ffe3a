#include "totalk/verify.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>

#include "totalk/errors.hpp"

namespace totalk {

namespace {

using Clock = std::chrono::steady_clock;

VerifyReport start(std::string check, std::vector<std::pair<std::string, std::string>> params) {
  VerifyReport r;
  r.check = std::move(check);
  r.parameters = std::move(params);
  return r;
}

void finish(VerifyReport& r, Clock::time_point t0) {
  if (r.outcome.empty()) r.outcome = r.pass ? "pass" : "fail";
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string str(long v) { return std::to_string(v); }

ReportWitness witness_of(const std::string& location, const HomWitness& w) {
  return ReportWitness{location, w.probe.to_string(), "", w.lhs.to_string(), w.rhs.to_string()};
}

// Canonical-generator hom on g's canonical form, rewritten on g's flat coordinates.
HomExpr on_flat_coordinates(const GroupExpr& g, const FgHom& h) {
  Presentation p = flat_presentation(g);
  return HomExpr::fg_matrix(g, g, p.from_canonical * h.matrix() * p.to_canonical);
}

std::string automorphism_label(const FgHom& h) {
  const FgAbGroup& g = h.domain();
  if (g.order() == 1) return "id";
  if (g.free_rank() == 0 && g.torsion().size() == 1) {
    Integer u = h.matrix()(0, 0);
    Integer d = g.torsion()[0];
    if (u == 1) return "id";
    if (u == d - 1) return "-id";
    return "x" + u.get_str();
  }
  return h.matrix().to_string();
}

Element all_ones(const GroupExpr& g) {
  std::size_t n = flat_orders(g)->size();
  return from_flat_coords(g, std::vector<Integer>(n, Integer(1)));
}

void record_lambda(VerifyReport& r, const std::string& label, const LambdaResult& lr, bool expect_commute) {
  std::size_t bad = 0;
  for (const auto& sq : lr.squares)
    if (!sq.commutes) {
      ++bad;
      if (sq.witness) r.witnesses.push_back(witness_of(label + ": " + sq.location(), *sq.witness));
    }
  bool ok = expect_commute ? lr.commutes : !lr.commutes;
  r.add(SubVerdict{label, ok, str(static_cast<long>(lr.squares.size() - bad)) + "/" + str(static_cast<long>(lr.squares.size())) + " squares commute"});
}

}  // namespace

// ---------------------------------------------------------------- de conjugation

VerifyReport verify_de_conjugation(long k, long bound) {
  auto t0 = Clock::now();
  if (k < 1 || k > bound) throw OutOfRange("coefficient " + str(k) + " outside 1.." + str(bound));
  VerifyReport r = start("de-conjugation", {{"k", str(k)}, {"max_coeff", str(bound)}});
  HomExpr phi = phi_graded(false, bound).at(0, k);
  HomExpr phip = phi_graded(true, bound).at(0, k);
  const GroupExpr& bk = phi.codomain();
  Element probe = all_ones(phi.domain());
  auto auts = enumerate_automorphisms(fg_structure(bk));
  bool any = false;
  for (const FgHom& a : auts) {
    HomExpr theta = on_flat_coordinates(bk, a);
    auto eq = homexpr_equal(HomExpr::compose(theta, phi), phip);
    std::string label = "theta=" + automorphism_label(a);
    r.subs.push_back(SubVerdict{label, eq.equal, eq.equal ? "conjugates" : "does not conjugate"});
    any = any || eq.equal;
    if (!eq.equal) {
      Element image = phi.apply(probe);
      Element lhs = theta.apply(image);
      Element rhs = phip.apply(probe);
      if (lhs != rhs)
        r.witnesses.push_back(ReportWitness{label, probe.to_string(), image.to_string(), lhs.to_string(), rhs.to_string()});
      else
        r.witnesses.push_back(witness_of(label, *eq.witness));
    }
  }
  r.pass = any;
  r.parameters.push_back({"automorphisms", str(static_cast<long>(auts.size()))});
  finish(r, t0);
  return r;
}

VerifyReport verify_de_claims(long bound) {
  auto t0 = Clock::now();
  VerifyReport r = start("de", {{"max_coeff", str(bound)}});
  if (bound < 9) {
    r.add(SubVerdict{"levels 3 and 9 available", false, "needs max_coeff >= 9"});
    finish(r, t0);
    return r;
  }
  VerifyReport r3 = verify_de_conjugation(3, bound);
  bool minus = std::any_of(r3.subs.begin(), r3.subs.end(), [](const SubVerdict& s) { return s.name == "theta=-id" && s.pass; });
  r.add(SubVerdict{"k=3 conjugates", r3.pass && minus, minus ? "theta=-id conjugates" : "theta=-id does not conjugate"});
  VerifyReport r9 = verify_de_conjugation(9, bound);
  bool expected_witness = false;
  for (const auto& w : r9.witnesses) {
    r.witnesses.push_back(ReportWitness{"k=9 " + w.location, w.element, w.image, w.lhs, w.rhs});
    if (w.location == "theta=-id" && w.element == "([1]_9,[1]_3)" && w.image == "[6]_9" && w.rhs == "[0]_9")
      expected_witness = true;
  }
  r.add(SubVerdict{"k=9 no automorphism conjugates", !r9.pass && r9.subs.size() == 6,
                   str(static_cast<long>(r9.subs.size())) + " automorphisms, none conjugates"});
  r.add(SubVerdict{"k=9 witness -[6]_9 != [0]_9", expected_witness, "theta=-id on ([1]_9,[1]_3)"});
  for (long k = 2; k <= bound; ++k) {
    if (k == 3 || k == 9) continue;
    VerifyReport rk = verify_de_conjugation(k, bound);
    long good = std::count_if(rk.subs.begin(), rk.subs.end(), [](const SubVerdict& s) { return s.pass; });
    r.subs.push_back(SubVerdict{"k=" + str(k) + " (observed)", true,
                                str(good) + "/" + str(static_cast<long>(rk.subs.size())) + " automorphisms conjugate"});
  }
  finish(r, t0);
  return r;
}

// ---------------------------------------------------------------- family conjugation

VerifyReport verify_family_conjugation(long max_level, long max_index, long bound) {
  auto t0 = Clock::now();
  if (max_level < 1 || max_level > bound) throw OutOfRange("level bound " + str(max_level) + " outside 1.." + str(bound));
  if (max_index < max_level) throw OutOfRange("index window must be at least the level bound");
  VerifyReport r = start("family", {{"K", str(max_level)}, {"J", str(max_index)}, {"max_coeff", str(bound)}});
  auto ka = load_fixture("A", bound).k;
  auto kb = load_fixture("B", bound).k;
  long pairs = 0;
  bool all = true;
  for (long k = 1; k <= max_level; ++k)
    for (long j = k; j <= max_index; ++j) {
      HomExpr minus = HomExpr::negate(HomExpr::identity(kb->group(0, k)));
      auto res = check_square(HomExpr::identity(ka->group(0, k)), omega_map(j, true, k, bound), omega_map(j, false, k, bound),
                              minus);
      ++pairs;
      if (!res.commutes) {
        all = false;
        r.witnesses.push_back(witness_of("k=" + str(k) + " j=" + str(j), *res.witness));
      }
    }
  r.add(SubVerdict{"-id∘omega_j = omega'_j for k <= j", all, str(pairs) + " pairs"});

  // The automorphisms (id on K(A), -id on K(B)) and the omega maps respect kappa.
  long squares = 0;
  bool kap = true;
  for (auto [from, to] : kappa_pairs(bound))
    for (int j = 0; j < 2; ++j) {
      HomExpr mf = HomExpr::negate(HomExpr::identity(kb->group(j, from)));
      HomExpr mt = HomExpr::negate(HomExpr::identity(kb->group(j, to)));
      auto res = check_square(kb->kappa(j, from, to), mt, mf, kb->kappa(j, from, to));
      ++squares;
      if (!res.commutes) {
        kap = false;
        r.witnesses.push_back(witness_of("-id kappa " + level_string(j, from) + "->" + level_string(j, to), *res.witness));
      }
    }
  for (bool primed : {false, true}) {
    auto lr = check_lambda_linear(omega_graded(max_index, primed, bound), {LambdaOp::Kappa}, bound);
    squares += static_cast<long>(lr.squares.size());
    for (const auto& sq : lr.squares)
      if (!sq.commutes) {
        kap = false;
        r.witnesses.push_back(witness_of(std::string(primed ? "omega' " : "omega ") + sq.location(), *sq.witness));
      }
  }
  r.add(SubVerdict{"kappa squares", kap, str(squares) + " squares"});
  finish(r, t0);
  return r;
}

// ---------------------------------------------------------------- gamma

namespace {

std::vector<Element> tail_probes(const GroupExpr& g) {
  std::vector<Element> out;
  const GroupExpr& base = g.base();
  const GroupExpr& comp = g.component();
  std::vector<Rational> bases{0, 1, Rational(1, 2), -1, Rational(3, 4)};
  std::vector<std::map<long, Rational>> devs{{}, {{1, 1}}, {{2, -1}}, {{3, Rational(1, 2)}, {4, 2}}};
  for (const auto& b : bases)
    for (const auto& d : devs) {
      std::map<long, Element> dv;
      for (const auto& [m, v] : d) dv.emplace(m, Element::scalar(comp, v));
      out.push_back(Element::tail(g, Element::scalar(base, b), dv));
    }
  return out;
}

}  // namespace

VerifyReport verify_gamma_compat(long bound) {
  auto t0 = Clock::now();
  VerifyReport r = start("gamma", {{"max_coeff", str(bound)}});
  GradedHom g = gamma_map(bound);
  GradedHom gi = gamma_inverse_map(bound);
  record_lambda(r, "beta and kappa squares commute", check_lambda_linear(g, {LambdaOp::Beta, LambdaOp::Kappa}, bound), true);

  auto rho = check_lambda_linear(g, {LambdaOp::Rho}, bound);
  std::ostringstream observed;
  bool k1_ok = true;
  for (const auto& sq : rho.squares) {
    if (sq.j == 1) {
      k1_ok = k1_ok && sq.commutes;
      continue;
    }
    long k = sq.from;
    if (k % 2 == 1 && k >= 3) {
      r.add(SubVerdict{"rho at " + level_string(0, k) + " fails", !sq.commutes, sq.commutes ? "commutes" : "fails"});
      if (!sq.commutes) r.witnesses.push_back(witness_of(sq.location(), *sq.witness));
    } else {
      observed << (observed.tellp() > 0 ? ", " : "") << k << (sq.commutes ? ":commutes" : ":fails");
    }
  }
  r.subs.push_back(SubVerdict{"rho at k=1 and even k (observed)", true, observed.str()});
  r.subs.push_back(SubVerdict{"rho on K1 levels (observed)", true, k1_ok ? "all commute" : "some fail"});

  auto f1 = load_fixture("F1", bound);
  auto f2 = load_fixture("F2", bound);
  bool cones = true, kstar = true;
  for (const auto& [from, to, map] : {std::tuple{f1, f2, g}, std::tuple{f2, f1, gi}}) {
    for (const Element& x : tail_probes(from.k->group(0, 0))) {
      Element y = map.at(0, 0).apply(x);
      if (cone_membership(from.cone, x) != cone_membership(to.cone, y)) {
        cones = false;
        r.witnesses.push_back(ReportWitness{"cone " + from.name + "->" + to.name, x.to_string(), "", y.to_string(), ""});
      }
      if (x.base().value() != y.base().value()) kstar = false;
      for (long m = 1; m <= 12; ++m)
        if (x.coordinate(m).value() != y.coordinate(m).value()) kstar = false;
    }
    for (const Element& x : probe_elements(from.k->group(1, 0), 4))
      if (x.base().coords() != map.at(1, 0).apply(x).base().coords()) kstar = false;
  }
  r.add(SubVerdict{"gamma and its inverse preserve the cones", cones, "product cone on probes"});
  r.add(SubVerdict{"gamma is the identity on K_*", kstar, "probe coordinates unchanged"});
  finish(r, t0);
  return r;
}

// ---------------------------------------------------------------- refutation

VerifyReport refute_isomorphism_cases(long window, long bound) {
  auto t0 = Clock::now();
  if (window < 3) throw OutOfRange("window must be at least 3");
  if (bound < 3) throw OutOfRange("refutation lives at coefficient 3");
  VerifyReport r = start("refute", {{"J", str(window)}, {"max_coeff", str(bound)}});
  auto ka = load_fixture("A", bound).k;
  auto kb = load_fixture("B", bound).k;

  // Step 2: an order automorphism 2^t of K0(B) with 2^t * l_{j!} = l_{r!} * 2^n forces l_{r!} = l_{j!}.
  long forced = 0;
  bool step2 = true;
  for (long j = 1; j <= window; ++j)
    for (long r_ = 1; r_ <= 2 * window; ++r_) {
      Integer lj = odd_part_factorial(j), lr = odd_part_factorial(r_);
      if (odd_part(lj) != odd_part(lr)) continue;
      ++forced;
      if (!homexpr_equal(omega_map(r_, false, 0, bound), omega_map(j, false, 0, bound)).equal) step2 = false;
    }
  r.add(SubVerdict{"step 2: matching index forces omega_r = omega_j", step2, str(forced) + " admissible (j, r) pairs"});

  const GroupExpr& a3 = ka->group(0, 3);
  const GroupExpr& b3 = kb->group(0, 3);
  Element g10 = from_flat_coords(a3, {1, 0});
  Element g01 = from_flat_coords(a3, {0, 1});
  Element one = Element::scalar(ka->group(0, 0), 1);

  struct Case {
    int number, sign;
    bool even;
  };
  const Case cases[] = {{1, 1, true}, {2, 1, false}, {3, -1, true}, {4, -1, false}};
  bool first_gen_free = true;
  for (const Case& c : cases) {
    Integer u = c.even ? 1 : 2;  // 2^n mod 3
    HomExpr on_b = HomExpr::fg_matrix(b3, b3, IntMatrix::from_rows({{u}}));
    bool contradiction = true, compatible = true;
    std::optional<ReportWitness> shown;
    for (long a = 0; a < 3; ++a) {
      HomExpr xi = HomExpr::fg_matrix(a3, a3, IntMatrix::from_rows({{u, Integer(a)}, {0, Integer(c.sign)}}));
      // The hypothesis map must be rho- and beta-compatible with K0(Xi_1) = 2^n, K1(Xi_1) = sign.
      Element lhs_rho = xi.apply(ka->rho(0, 3).apply(one));
      Element rhs_rho = ka->rho(0, 3).apply(one.times(u));
      Element lhs_beta = ka->beta(0, 3).apply(xi.apply(g01));
      Element rhs_beta = ka->beta(0, 3).apply(g01).times(Integer(c.sign));
      compatible = compatible && lhs_rho == rhs_rho && lhs_beta == rhs_beta;
      for (long j = 3; j <= window; ++j) {
        bool this_j = false;
        for (bool even_coordinate : {true, false}) {
          HomExpr source = omega_map(j, even_coordinate, 3, bound);
          HomExpr target = omega_map(j, false, 3, bound);
          Element lhs = target.apply(xi.apply(g01));
          Element rhs = on_b.apply(source.apply(g01));
          if (target.apply(xi.apply(g10)) != on_b.apply(source.apply(g10))) first_gen_free = false;
          if (lhs != rhs) {
            this_j = true;
            if (!shown && a == 0 && j == 3)
              shown = ReportWitness{"case " + std::to_string(c.number) + (even_coordinate ? " coordinate 2j" : " coordinate 2j-1"),
                                    g01.to_string(), "", lhs.to_string(), rhs.to_string()};
            break;
          }
        }
        contradiction = contradiction && this_j;
      }
    }
    std::string name = "case " + std::to_string(c.number) + " (K1 sign " + (c.sign > 0 ? "+" : "-") +
                       ", n " + (c.even ? "even" : "odd") + ")";
    std::string detail = shown ? "lhs " + shown->lhs + " vs rhs " + shown->rhs : "no contradiction";
    if (!compatible) detail += "; hypothesis map not compatible";
    r.add(SubVerdict{name + " contradicts", contradiction && compatible, detail});
    if (shown) r.witnesses.push_back(*shown);
  }
  r.add(SubVerdict{"generator ([1]_3,[0]_3) imposes no constraint", first_gen_free, "both sides [0]_3"});

  // Control: comparing F1 with itself through the identity never contradicts.
  bool control = true;
  HomExpr id = HomExpr::identity(a3);
  for (long j = 3; j <= window; ++j)
    for (const Element& gen : {g10, g01}) {
      HomExpr w = omega_map(j, false, 3, bound);
      if (w.apply(id.apply(gen)) != w.apply(gen)) control = false;
    }
  r.add(SubVerdict{"control: F1 against itself", control, control ? "no contradiction" : "spurious contradiction"});
  finish(r, t0);
  return r;
}

// ---------------------------------------------------------------- beta automatic

VerifyReport check_beta_automatic(const BetaAutomaticInput& in, long window) {
  auto t0 = Clock::now();
  long bound = in.b1->bound();
  for (const auto& k : {in.e1, in.b2, in.e2})
    if (k->bound() != bound) throw BoundMismatch("bundles have different coefficient bounds");
  for (const auto* h : {&in.gamma, &in.eta, &in.iota1, &in.iota2})
    if (h->bound() != bound) throw BoundMismatch("maps have different coefficient bounds");
  VerifyReport r = start("beta-automatic", {{"max_coeff", str(bound)}});

  long squares = 0;
  bool square_ok = true;
  for (const auto& [lvl, top] : in.iota1.components()) {
    auto [j, n] = lvl;
    if (!in.eta.has(j, n) || !in.gamma.has(j, n) || !in.iota2.has(j, n)) continue;
    auto res = check_square(top, in.eta.at(j, n), in.gamma.at(j, n), in.iota2.at(j, n), window);
    ++squares;
    if (!res.commutes) {
      square_ok = false;
      r.witnesses.push_back(witness_of("gamma/eta square at " + level_string(j, n), *res.witness));
    }
  }
  r.add(SubVerdict{"hypothesis: iota2∘gamma = eta∘iota1", square_ok, str(squares) + " levels"});
  record_lambda(r, "hypothesis: eta commutes with beta", check_lambda_linear(in.eta, {LambdaOp::Beta}, bound, window), true);
  bool inj = true;
  std::string inj_detail = "K_0, K_1 inclusions injective";
  for (const auto* h : {&in.iota1, &in.iota2})
    for (int j = 0; j < 2; ++j) {
      auto v = is_injective(h->at(j, 0));
      if (!v || !*v) {
        inj = false;
        inj_detail = std::string(v ? "not injective" : "undecided") + " at " + level_string(j, 0);
      }
    }
  r.add(SubVerdict{"hypothesis: trivial boundary maps", inj, inj_detail});
  record_lambda(r, "hypothesis: iota1 is Lambda-linear",
                check_lambda_linear(in.iota1, {LambdaOp::Rho, LambdaOp::Beta, LambdaOp::Kappa}, bound, window), true);
  record_lambda(r, "hypothesis: iota2 is Lambda-linear",
                check_lambda_linear(in.iota2, {LambdaOp::Rho, LambdaOp::Beta, LambdaOp::Kappa}, bound, window), true);
  if (!r.pass) {
    r.outcome = "hypothesis-failed";
    r.subs.push_back(SubVerdict{"conclusion: gamma commutes with beta", true, "not asserted"});
    finish(r, t0);
    return r;
  }
  record_lambda(r, "conclusion: gamma commutes with beta", check_lambda_linear(in.gamma, {LambdaOp::Beta}, bound, window), true);
  r.outcome = r.pass ? "pass" : "conclusion-failed";
  finish(r, t0);
  return r;
}

BetaAutomaticInput beta_automatic_fixture_input(long bound) {
  return BetaAutomaticInput{load_fixture("F1", bound).k, load_fixture("E1", bound).k, load_fixture("F2", bound).k,
                            load_fixture("E2", bound).k, gamma_map(bound), eta_map(bound),
                            iota_map(1, bound), iota_map(2, bound)};
}

namespace {

GroupExpr random_fg(std::mt19937_64& rng) {
  static const long choices[] = {2, 3, 4, 5, 6, 8, 9, 12};
  std::vector<Integer> orders;
  if (rng() % 3 == 0) orders.push_back(0);
  long t = static_cast<long>(rng() % 3);
  for (long i = 0; i < t; ++i) orders.push_back(choices[rng() % 8]);
  return GroupExpr::fg(presentation_from_orders(orders).group);
}

HomExpr random_endomorphism(const GroupExpr& g, std::mt19937_64& rng) {
  auto orders = *flat_orders(g);
  std::size_t n = orders.size();
  IntMatrix m(n, n);
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t col = 0; col < n; ++col) {
      Integer v = static_cast<long>(rng() % 7) - 3;
      const Integer& src = orders[col];
      const Integer& dst = orders[row];
      if (src == 0) m(row, col) = v;
      else if (dst == 0) m(row, col) = 0;
      else {
        Integer gcd;
        mpz_gcd(gcd.get_mpz_t(), src.get_mpz_t(), dst.get_mpz_t());
        m(row, col) = v * (dst / gcd);
      }
    }
  return HomExpr::fg_matrix(g, g, m);
}

}  // namespace

BetaAutomaticInput random_beta_instance(std::uint64_t seed, long bound) {
  std::mt19937_64 rng(seed);
  GroupExpr g0 = random_fg(rng), g1 = random_fg(rng), h0 = random_fg(rng), h1 = random_fg(rng);
  GroupExpr e0 = GroupExpr::direct_sum({g0, h0});
  GroupExpr e1 = GroupExpr::direct_sum({g1, h1});
  auto b1 = build_total_k(g0, g1, bound);
  auto b2 = build_total_k(g0, g1, bound);
  auto k1 = build_total_k(e0, e1, bound);
  auto k2 = build_total_k(e0, e1, bound);
  HomExpr f0 = random_endomorphism(g0, rng), f1 = random_endomorphism(g1, rng);
  HomExpr x0 = random_endomorphism(h0, rng), x1 = random_endomorphism(h1, rng);
  BetaAutomaticInput in;
  in.b1 = b1;
  in.e1 = k1;
  in.b2 = b2;
  in.e2 = k2;
  in.gamma = induced_graded_hom(b1, b2, f0, f1);
  in.eta = induced_graded_hom(k1, k2, HomExpr::direct_sum_of({f0, x0}), HomExpr::direct_sum_of({f1, x1}));
  in.iota1 = induced_graded_hom(b1, k1, HomExpr::inject(e0, 0), HomExpr::inject(e1, 0));
  in.iota2 = induced_graded_hom(b2, k2, HomExpr::inject(e0, 0), HomExpr::inject(e1, 0));
  return in;
}

VerifyReport verify_beta_automatic_suite(long bound, int random_instances) {
  auto t0 = Clock::now();
  VerifyReport r = start("beta-auto", {{"max_coeff", str(bound)}, {"random_instances", str(random_instances)}});
  VerifyReport fx = check_beta_automatic(beta_automatic_fixture_input(bound));
  r.add(SubVerdict{"fixture data: hypotheses and conclusion hold", fx.outcome == "pass", fx.outcome});
  for (const auto& w : fx.witnesses) r.witnesses.push_back(w);

  long random_bound = std::min(bound, 12L);
  int good = 0;
  for (int i = 0; i < random_instances; ++i) {
    VerifyReport ri = check_beta_automatic(random_beta_instance(0x5eed0000u + static_cast<std::uint64_t>(i), random_bound));
    if (ri.outcome == "pass") ++good;
    else
      for (const auto& w : ri.witnesses) r.witnesses.push_back(ReportWitness{"instance " + std::to_string(i) + " " + w.location, w.element, w.image, w.lhs, w.rhs});
  }
  r.add(SubVerdict{"random induced instances", good == random_instances,
                   std::to_string(good) + "/" + std::to_string(random_instances) + " pass"});

  if (bound >= 3) {
    BetaAutomaticInput bad = beta_automatic_fixture_input(bound);
    const TotalK& e1 = *bad.e1;
    const TotalK& e2 = *bad.e2;
    bad.eta.set(0, 3, HomExpr::zero(e1.group(0, 3), e2.group(0, 3)));
    VerifyReport rb = check_beta_automatic(bad);
    r.add(SubVerdict{"corrupted eta at K0(;Z_3) is caught as a hypothesis failure", rb.outcome == "hypothesis-failed",
                     rb.outcome});
  }
  finish(r, t0);
  return r;
}

// ---------------------------------------------------------------- cones

std::vector<ConeProbe> cone_probe_catalog(long bound) {
  if (bound < 9) throw OutOfRange("cone catalog uses levels 3 and 9");
  auto e1 = load_fixture("E1", bound);
  auto f1 = load_fixture("F1", bound);
  const TotalK& k = *e1.k;
  GroupExpr q = GroupExpr::rational();
  GroupExpr dy = GroupExpr::dyadic();
  const GroupExpr& e0 = k.group(0, 0);
  HomExpr iota = iota_map(1, bound).at(0, 0);

  auto yq = [&](Rational base, std::map<long, Rational> devs) {
    std::map<long, Element> d;
    for (auto& [m, v] : devs) d.emplace(m, Element::scalar(q, v));
    return Element::tail(bold_q(), Element::scalar(q, base), d);
  };
  auto x = [&](Rational first, const Element& y) { return Element::sum(e0, {Element::scalar(q, first), y}); };
  auto from_b = [&](Rational base, std::map<long, Rational> devs) {
    std::map<long, Element> d;
    for (auto& [m, v] : devs) d.emplace(m, Element::scalar(dy, v));
    return iota.apply(Element::tail(f1.k->group(0, 0), Element::scalar(dy, base), d));
  };
  auto with_first = [&](Rational first, const Element& xb) { return x(first, xb.parts()[1]); };
  Element zero_y = Element::zero(bold_q());
  auto unit = [&](long c) { return from_flat_coords(k.group(1, 0), {Integer(c)}); };
  auto s03 = from_flat_coords(k.group(0, 3), {Integer(1)});
  auto s19 = from_flat_coords(k.group(1, 9), {Integer(1)});

  auto tuple = [&](const Element& k0, std::optional<Element> u = {}, std::vector<std::pair<Level, Element>> s = {}) {
    TotalElement t;
    t.emplace(Level{0, 0}, k0);
    if (u) t.emplace(Level{1, 0}, *u);
    for (auto& [lvl, e] : s) t.emplace(lvl, e);
    return t;
  };

  std::vector<ConeProbe> c;
  // first rational coordinate
  c.push_back({"c1: (1/2,0)", tuple(x(Rational(1, 2), zero_y)), 1});
  c.push_back({"c1: (1,0), u=[1]", tuple(x(1, zero_y), unit(1)), 1});
  c.push_back({"c1: (1/3,(-5,...))", tuple(x(Rational(1, 3), yq(-5, {}))), 1});
  c.push_back({"c1: (2,iota(-1)), s at K0(;Z_3)", tuple(with_first(2, from_b(-1, {})), {}, {{{0, 3}, s03}}), 1});
  c.push_back({"c1: (1/1000, non-image y), s at K1(;Z_9)", tuple(x(Rational(1, 1000), yq(Rational(1, 7), {{1, -2}})), {}, {{{1, 9}, s19}}), 1});
  c.push_back({"c1: (7/3,0), u=[2]", tuple(x(Rational(7, 3), zero_y), unit(2)), 1});
  c.push_back({"c1 negative: (-1/2,0)", tuple(x(Rational(-1, 2), zero_y)), 0});
  c.push_back({"c1 negative: (-1,iota(1))", tuple(with_first(-1, from_b(1, {}))), 0});
  c.push_back({"c1 negative: (-1/3,0), u=[2]", tuple(x(Rational(-1, 3), zero_y), unit(2)), 0});
  c.push_back({"c1 negative: (-7,(3,...))", tuple(x(-7, yq(3, {}))), 0});
  // positive base of the B-part
  c.push_back({"c2: iota(1)", tuple(from_b(1, {})), 2});
  c.push_back({"c2: iota(1/2), u=[1]", tuple(from_b(Rational(1, 2), {}), unit(1)), 2});
  c.push_back({"c2: iota(3; +2 at 1, +1/4 at 4)", tuple(from_b(3, {{1, 2}, {4, Rational(1, 4)}})), 2});
  c.push_back({"c2: iota(1), s at K0(;Z_3) and K1(;Z_9)", tuple(from_b(1, {}), {}, {{{0, 3}, s03}, {{1, 9}, s19}}), 2});
  c.push_back({"c2: iota(1/4; zero coordinate 2)", tuple(from_b(Rational(1, 4), {{2, Rational(-1, 4)}})), 2});
  c.push_back({"c2 negative: iota(1; coordinate 1 = -1)", tuple(from_b(1, {{1, -2}})), 0});
  c.push_back({"c2 negative: (0,(1/3,...)) outside the image", tuple(x(0, yq(Rational(1, 3), {}))), 0});
  c.push_back({"c2 negative: (0,(1; 1/3 at -1)) outside the image", tuple(x(0, yq(1, {{-1, Rational(1, 3)}}))), 0});
  c.push_back({"c2 negative: iota(1; -100 at 7)", tuple(from_b(1, {{7, -100}})), 0});
  c.push_back({"c2 negative: iota(-1)", tuple(from_b(-1, {})), 0});
  // zero base: all torsion data must vanish
  c.push_back({"c3: zero", tuple(x(0, zero_y), unit(0)), 3});
  c.push_back({"c3: iota(0; 1 at 1)", tuple(from_b(0, {{1, 1}})), 3});
  c.push_back({"c3: iota(0; 1/2 at 2, 3 at 5)", tuple(from_b(0, {{2, Rational(1, 2)}, {5, 3}})), 3});
  c.push_back({"c3: iota(0; 1 at 1..4)", tuple(from_b(0, {{1, 1}, {2, 1}, {3, 1}, {4, 1}})), 3});
  c.push_back({"c3 negative: iota(0; 1 at 3), u=[1]", tuple(from_b(0, {{3, 1}}), unit(1)), 0});
  c.push_back({"c3 negative: iota(0; 1 at 1), s at K0(;Z_3)", tuple(from_b(0, {{1, 1}}), {}, {{{0, 3}, s03}}), 0});
  c.push_back({"c3 negative: zero, s at K1(;Z_9)", tuple(x(0, zero_y), {}, {{{1, 9}, s19}}), 0});
  c.push_back({"c3 negative: iota(0; -1 at 4)", tuple(from_b(0, {{4, -1}})), 0});
  c.push_back({"c3 negative: (0,(0; 1/3 at 1)) outside the image", tuple(x(0, yq(0, {{1, Rational(1, 3)}}))), 0});
  c.push_back({"c3 negative: iota(0; 1 at 6), u=[2]", tuple(from_b(0, {{6, 1}}), unit(2)), 0});
  return c;
}

VerifyReport verify_cones(long bound) {
  auto t0 = Clock::now();
  VerifyReport r = start("cones", {{"max_coeff", str(bound)}});
  auto e1 = load_fixture("E1", bound);
  auto catalog = cone_probe_catalog(bound);
  int groups[3] = {0, 0, 0}, correct[3] = {0, 0, 0};
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const ConeProbe& p = catalog[i];
    int group = static_cast<int>(i / 10);
    int got = total_cone_condition(*e1.total_cone, p.element);
    ++groups[group];
    if (got == p.expected_condition) ++correct[group];
    else
      r.witnesses.push_back(ReportWitness{p.label, p.element.at({0, 0}).to_string(), "",
                                          "condition " + std::to_string(got), "condition " + std::to_string(p.expected_condition)});
  }
  for (int g = 0; g < 3; ++g)
    r.add(SubVerdict{"condition (" + std::to_string(g + 1) + ") probes", correct[g] == groups[g],
                     std::to_string(correct[g]) + "/" + std::to_string(groups[g]) + " classified"});

  GradedHom gamma = gamma_map(bound), eta = eta_map(bound), i1 = iota_map(1, bound), i2 = iota_map(2, bound);
  long levels = 0;
  bool square = true;
  for (const auto& [lvl, top] : i1.components()) {
    auto res = check_square(top, eta.at(lvl.first, lvl.second), gamma.at(lvl.first, lvl.second), i2.at(lvl.first, lvl.second));
    ++levels;
    if (!res.commutes) {
      square = false;
      r.witnesses.push_back(witness_of("gamma/eta square at " + level_string(lvl.first, lvl.second), *res.witness));
    }
  }
  r.add(SubVerdict{"gamma/eta square commutes", square, std::to_string(levels) + " levels"});
  finish(r, t0);
  return r;
}

// ---------------------------------------------------------------- fixture tables

VerifyReport verify_fixture_tables(long bound) {
  auto t0 = Clock::now();
  VerifyReport r = start("fixtures", {{"max_coeff", str(bound)}});
  auto cyc = [](const Integer& n) { return FgAbGroup::cyclic(n); };
  auto plus = [](std::vector<Integer> orders) { return presentation_from_orders(orders).group; };
  auto check = [&](const std::string& what, const GroupExpr& g, const FgAbGroup& want, bool& ok) {
    FgAbGroup got = fg_structure(g);
    if (!(got == want)) {
      ok = false;
      r.witnesses.push_back(ReportWitness{what, "", "", got.to_string(), want.to_string()});
    }
  };
  auto a = load_fixture("A", bound), b = load_fixture("B", bound);
  auto f1 = load_fixture("F1", bound), f2 = load_fixture("F2", bound);
  auto e1 = load_fixture("E1", bound), e2 = load_fixture("E2", bound);

  bool ab = true, fk = true, ek = true;
  for (long k = 1; k <= bound; ++k) {
    Integer l = odd_part(k);
    bool three = k % 3 == 0;
    std::string at = "k=" + str(k);
    check("K0(A;Z_k) " + at, a.k->group(0, k), three ? plus({l, 3}) : cyc(l), ab);
    check("K1(A;Z_k) " + at, a.k->group(1, k), three ? cyc(3) : cyc(1), ab);
    check("K0(B;Z_k) " + at, b.k->group(0, k), cyc(l), ab);
    check("K1(B;Z_k) " + at, b.k->group(1, k), cyc(1), ab);
    for (const auto* f : {&f1, &f2}) {
      const GroupExpr& g = f->k->group(0, k);
      check("K1(" + f->name + ";Z_k) " + at, f->k->group(1, k), three ? cyc(3) : cyc(1), fk);
      if (!(g.base() == a.k->group(0, k)) || !(g.component() == b.k->group(0, k))) {
        fk = false;
        r.witnesses.push_back(ReportWitness{"K0(" + f->name + ";Z_k) shape " + at, "", "", g.to_string(), ""});
      }
      // Tail of the base generators: y*[k/3] (alternating in F2) when 3 | k, else 0.
      for (std::size_t gi = 0; gi < flat_orders(g.base())->size(); ++gi) {
        std::vector<Integer> coords(flat_orders(g.base())->size(), 0);
        coords[gi] = 1;
        Element base = from_flat_coords(g.base(), coords);
        bool is_y = three && gi + 1 == coords.size();
        for (long m = 1; m <= 6; ++m) {
          long sign = (f == &f2 && m % 2 == 0) ? -1 : 1;
          Integer want = is_y ? Integer(sign * (k / 3)) : Integer(0);
          Element expect = g.component().is_trivial() ? Element::zero(g.component())
                                                      : from_flat_coords(g.component(), {want});
          Element got = default_coordinate(g, base, m + 20);
          if (got != expect) {
            fk = false;
            r.witnesses.push_back(ReportWitness{f->name + " tail " + at, base.to_string(), "", got.to_string(), expect.to_string()});
          }
        }
      }
    }
    for (const auto* e : {&e1, &e2}) {
      check("K0(" + e->name + ";Z_n) " + at, e->k->group(0, k), three ? cyc(3) : cyc(1), ek);
      check("K1(" + e->name + ";Z_n) " + at, e->k->group(1, k), three ? cyc(3) : cyc(1), ek);
    }
  }
  // Integral tails of F: x_{2j-1} = x_{2j} = l_{j!} x_0.
  bool integral = true;
  for (const auto* f : {&f1, &f2}) {
    const GroupExpr& g = f->k->group(0, 0);
    Element one = Element::scalar(g.base(), 1);
    for (long m = 1; m <= 24; ++m)
      if (default_coordinate(g, one, m).value() != Rational(odd_part_factorial((m + 1) / 2))) integral = false;
    check("K1(" + f->name + ")", f->k->group(1, 0), cyc(3), integral);
  }
  r.add(SubVerdict{"mod-k groups of A and B", ab, "k <= " + str(bound)});
  r.add(SubVerdict{"mod-k groups of F1 and F2", fk, "k <= " + str(bound)});
  r.add(SubVerdict{"integral groups of F1 and F2", integral, "tails l_{j!} x_0"});
  r.add(SubVerdict{"mod-n groups of E1 and E2", ek, "Z_3 iff 3 | n"});

  // load_fixture throws IllDefined unless every six-term sequence is exact
  long nodes = 0;
  for (const char* name : {"A", "B", "D", "Dprime", "F1", "F2", "E1", "E2"}) {
    load_fixture(name, bound);
    nodes += 2 * bound;
  }
  r.add(SubVerdict{"six-term sequences", true, str(nodes) + " sequences exact at load"});
  finish(r, t0);
  return r;
}

// ---------------------------------------------------------------- run_all

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"fixtures", "de", "family", "gamma", "refute", "beta-auto", "cones"};
  return names;
}

std::vector<VerifyReport> run_all(const VerifyConfig& config) {
  const auto& names = check_names();
  std::vector<std::string> selected = config.checks.empty() ? names : config.checks;
  for (const auto& s : selected)
    if (std::find(names.begin(), names.end(), s) == names.end()) throw InputError("unknown check: " + s);
  std::vector<VerifyReport> out;
  long n = config.max_coeff, j = config.window;
  for (const auto& name : names) {
    if (std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
    try {
      if (name == "fixtures") out.push_back(verify_fixture_tables(n));
      else if (name == "de") out.push_back(verify_de_claims(n));
      else if (name == "family") out.push_back(verify_family_conjugation(std::min(j, n), j, n));
      else if (name == "gamma") out.push_back(verify_gamma_compat(n));
      else if (name == "refute") out.push_back(refute_isomorphism_cases(j, n));
      else if (name == "beta-auto") out.push_back(verify_beta_automatic_suite(n));
      else if (name == "cones") out.push_back(verify_cones(n));
    } catch (const std::exception& e) {
      VerifyReport r;
      r.check = name;
      r.parameters = {{"max_coeff", std::to_string(n)}, {"window", std::to_string(j)}};
      r.add(SubVerdict{"error", false, e.what()});
      r.outcome = "error";
      r.witnesses.push_back(ReportWitness{"error", "", "", e.what(), ""});
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace totalk

#include "totalk/io.hpp"

#include <cctype>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

#include "totalk/errors.hpp"

namespace totalk {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kMaxDepth = 48;
constexpr long kMaxBound = 48;
constexpr long kMaxCount = 64;
constexpr long kMaxStabilization = 1000;

std::string child(const std::string& ptr, const std::string& key) {
  std::string esc;
  for (char c : key) {
    if (c == '~') esc += "~0";
    else if (c == '/') esc += "~1";
    else esc += c;
  }
  return ptr + "/" + esc;
}
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
  throw SemanticError((ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

const json& field(const json& j, const std::string& key, const std::string& ptr) {
  auto it = j.find(key);
  if (it == j.end()) fail(ptr, "missing field '" + key + "'");
  return *it;
}

void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& ptr) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) fail(child(ptr, it.key()), "unexpected field");
  }
}

std::string get_string(const json& j, const std::string& ptr) {
  if (!j.is_string()) fail(ptr, "expected a string");
  return j.get<std::string>();
}

Integer get_integer(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Integer(j.dump());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    bool digits = s.size() > start && s.size() < 4096;
    for (std::size_t i = start; digits && i < s.size(); ++i) digits = std::isdigit(static_cast<unsigned char>(s[i])) != 0;
    if (digits) return Integer(s);
  }
  fail(ptr, "expected an integer");
}

long get_long(const json& j, const std::string& ptr, long lo, long hi) {
  Integer v = get_integer(j, ptr);
  if (v < lo || v > hi) fail(ptr, "value outside " + std::to_string(lo) + ".." + std::to_string(hi));
  return v.get_si();
}

Rational get_rational(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.size() < 4096) {
      std::size_t slash = s.find('/');
      auto integral = [](const std::string& t) {
        std::size_t start = (!t.empty() && t[0] == '-') ? 1 : 0;
        if (t.size() <= start) return false;
        for (std::size_t i = start; i < t.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
      };
      std::string num = s.substr(0, slash);
      std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
      if (integral(num) && integral(den) && den[0] != '-') {
        Integer d(den);
        if (d != 0) {
          Rational q(Integer(num), d);
          q.canonicalize();
          return q;
        }
      }
    }
  }
  fail(ptr, "expected an integer or a string \"p/q\"");
}

json rational_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

json integer_json(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

class Resolver {
 public:
  explicit Resolver(const json& root) : root_(root) {}

  InputDocument run() {
    InputDocument doc;
    if (!root_.is_object()) fail("", "document must be a JSON object");
    allow_keys(root_, {"version", "groups", "homs", "totalk", "graded_homs", "assertions"}, "");
    doc.version = root_.contains("version") ? static_cast<int>(get_long(root_["version"], "/version", 1, 1)) : 1;
    canon_["version"] = doc.version;
    for (const char* section : {"groups", "homs", "totalk", "graded_homs"})
      if (root_.contains(section) && !root_[section].is_object()) fail(std::string("/") + section, "expected an object");
    if (root_.contains("groups"))
      for (auto it = root_["groups"].begin(); it != root_["groups"].end(); ++it) named_group(it.key(), "/groups");
    if (root_.contains("homs"))
      for (auto it = root_["homs"].begin(); it != root_["homs"].end(); ++it) named_hom(it.key(), "/homs");
    if (root_.contains("totalk"))
      for (auto it = root_["totalk"].begin(); it != root_["totalk"].end(); ++it) named_totalk(it.key(), "/totalk");
    if (root_.contains("graded_homs"))
      for (auto it = root_["graded_homs"].begin(); it != root_["graded_homs"].end(); ++it)
        named_graded(it.key(), "/graded_homs");
    canon_["assertions"] = json::array();
    if (root_.contains("assertions")) {
      const json& a = root_["assertions"];
      if (!a.is_array()) fail("/assertions", "expected an array");
      if (a.size() > 4096) fail("/assertions", "too many assertions");
      for (std::size_t i = 0; i < a.size(); ++i) doc.assertions.push_back(assertion(a[i], child("/assertions", i)));
    }
    for (const char* s : {"groups", "homs", "totalk", "graded_homs"})
      if (!canon_.contains(s)) canon_[s] = json::object();
    doc.groups = groups_;
    doc.homs = homs_;
    doc.totalk = totalk_;
    doc.graded_homs = graded_;
    doc.canonical = canon_.dump(2) + "\n";
    return doc;
  }

 private:
  const json& root_;
  json canon_ = json::object();
  std::map<std::string, GroupExpr> groups_;
  std::map<std::string, HomExpr> homs_;
  std::map<std::string, TotalKPtr> totalk_;
  std::map<std::string, GradedHom> graded_;
  std::set<std::string> active_;

  template <class F>
  auto guarded(const std::string& ptr, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const SemanticError&) {
      throw;
    } catch (const Error& e) {
      fail(ptr, e.what());
    }
  }

  // ---- groups

  GroupExpr named_group(const std::string& name, const std::string& from) {
    auto it = groups_.find(name);
    if (it != groups_.end()) return it->second;
    std::string ptr = child("/groups", name);
    if (!root_.contains("groups") || !root_["groups"].contains(name)) fail(from, "undefined group '" + name + "'");
    if (!active_.insert("g:" + name).second) fail(ptr, "cyclic definition of group '" + name + "'");
    json c;
    GroupExpr g = group_literal(root_["groups"][name], ptr, 0, c);
    active_.erase("g:" + name);
    groups_.emplace(name, g);
    canon_["groups"][name] = c;
    return g;
  }

  GroupExpr group_ref(const json& j, const std::string& ptr, int depth, json& c) {
    if (j.is_string()) {
      c = j;
      return named_group(j.get<std::string>(), ptr);
    }
    return group_literal(j, ptr, depth, c);
  }

  GroupExpr group_literal(const json& j, const std::string& ptr, int depth, json& c) {
    if (depth > kMaxDepth) fail(ptr, "nesting too deep");
    if (!j.is_object()) fail(ptr, "expected a group literal object or a group name");
    std::string kind = get_string(field(j, "kind", ptr), child(ptr, "kind"));
    c = json::object();
    c["kind"] = kind;
    if (kind == "cyclic") {
      allow_keys(j, {"kind", "n"}, ptr);
      Integer n = get_integer(field(j, "n", ptr), child(ptr, "n"));
      if (n < 0) fail(child(ptr, "n"), "order must be nonnegative");
      c["n"] = integer_json(n);
      return GroupExpr::cyclic(n);
    }
    if (kind == "fg") {
      allow_keys(j, {"kind", "free_rank", "torsion"}, ptr);
      long r = j.contains("free_rank") ? get_long(j["free_rank"], child(ptr, "free_rank"), 0, kMaxCount) : 0;
      std::vector<Integer> orders(static_cast<std::size_t>(r), Integer(0));
      c["free_rank"] = r;
      c["torsion"] = json::array();
      if (j.contains("torsion")) {
        const json& t = j["torsion"];
        if (!t.is_array() || t.size() > static_cast<std::size_t>(kMaxCount)) fail(child(ptr, "torsion"), "expected an array of orders");
        for (std::size_t i = 0; i < t.size(); ++i) {
          Integer d = get_integer(t[i], child(child(ptr, "torsion"), i));
          if (d < 1) fail(child(child(ptr, "torsion"), i), "torsion orders must be positive");
          orders.push_back(d);
          c["torsion"].push_back(integer_json(d));
        }
      }
      return GroupExpr::fg(presentation_from_orders(orders).group);
    }
    if (kind == "trivial" || kind == "dyadic" || kind == "rational") {
      allow_keys(j, {"kind"}, ptr);
      return kind == "trivial" ? GroupExpr::trivial() : kind == "dyadic" ? GroupExpr::dyadic() : GroupExpr::rational();
    }
    if (kind == "sum") {
      allow_keys(j, {"kind", "summands"}, ptr);
      const json& s = field(j, "summands", ptr);
      if (!s.is_array() || s.empty() || s.size() > static_cast<std::size_t>(kMaxCount)) fail(child(ptr, "summands"), "expected a nonempty array");
      std::vector<GroupExpr> parts;
      c["summands"] = json::array();
      for (std::size_t i = 0; i < s.size(); ++i) {
        json cc;
        parts.push_back(group_ref(s[i], child(child(ptr, "summands"), i), depth + 1, cc));
        c["summands"].push_back(cc);
      }
      return GroupExpr::direct_sum(std::move(parts));
    }
    if (kind == "tail_product") {
      allow_keys(j, {"kind", "base", "component", "index_set", "stabilization", "maps", "scale"}, ptr);
      json cb, cc;
      GroupExpr base = group_ref(field(j, "base", ptr), child(ptr, "base"), depth + 1, cb);
      GroupExpr comp = group_ref(field(j, "component", ptr), child(ptr, "component"), depth + 1, cc);
      c["base"] = cb;
      c["component"] = cc;
      TailRule rule;
      std::string idx = j.contains("index_set") ? get_string(j["index_set"], child(ptr, "index_set")) : "positive";
      if (idx == "positive") rule.index_set = IndexSet::Positive;
      else if (idx == "nonzero_integer") rule.index_set = IndexSet::NonzeroInteger;
      else fail(child(ptr, "index_set"), "expected \"positive\" or \"nonzero_integer\"");
      c["index_set"] = idx;
      rule.stabilization = j.contains("stabilization") ? get_long(j["stabilization"], child(ptr, "stabilization"), 1, kMaxStabilization) : 1;
      c["stabilization"] = rule.stabilization;
      const json& maps = field(j, "maps", ptr);
      if (!maps.is_array() || maps.empty() || maps.size() > static_cast<std::size_t>(kMaxCount)) fail(child(ptr, "maps"), "expected a nonempty array of homs");
      c["maps"] = json::array();
      for (std::size_t i = 0; i < maps.size(); ++i) {
        json cm;
        rule.maps.push_back(hom_ref(maps[i], child(child(ptr, "maps"), i), depth + 1, cm));
        c["maps"].push_back(cm);
      }
      c["scale"] = json{{"kind", "one"}};
      if (j.contains("scale")) {
        const json& s = j["scale"];
        std::string sp = child(ptr, "scale");
        if (!s.is_object()) fail(sp, "expected a scale object");
        allow_keys(s, {"kind", "divisor"}, sp);
        std::string sk = get_string(field(s, "kind", sp), child(sp, "kind"));
        if (sk == "one") rule.scale = ScalarSequence::one();
        else if (sk == "odd_factorial") {
          long d = s.contains("divisor") ? get_long(s["divisor"], child(sp, "divisor"), 1, kMaxCount) : 1;
          rule.scale = ScalarSequence::odd_factorial(d);
          c["scale"] = json{{"kind", sk}, {"divisor", d}};
        } else fail(child(sp, "kind"), "expected \"one\" or \"odd_factorial\"");
      }
      return guarded(ptr, [&] { return GroupExpr::tail_product(base, comp, rule); });
    }
    if (kind == "quotient") {
      allow_keys(j, {"kind", "ambient", "sub"}, ptr);
      json ca, cs;
      GroupExpr a = group_ref(field(j, "ambient", ptr), child(ptr, "ambient"), depth + 1, ca);
      GroupExpr s = group_ref(field(j, "sub", ptr), child(ptr, "sub"), depth + 1, cs);
      c["ambient"] = ca;
      c["sub"] = cs;
      return GroupExpr::quotient(a, s);
    }
    fail(child(ptr, "kind"), "unknown group kind '" + kind + "'");
  }

  // ---- elements

  Element element(const GroupExpr& g, const json& j, const std::string& ptr, int depth, json& c) {
    if (depth > kMaxDepth) fail(ptr, "nesting too deep");
    return guarded(ptr, [&]() -> Element {
      switch (g.kind()) {
        case GroupKind::Fg: {
          std::size_t n = flat_orders(g)->size();
          std::vector<Integer> coords;
          if (j.is_array()) {
            for (std::size_t i = 0; i < j.size() && i <= n; ++i) coords.push_back(get_integer(j[i], child(ptr, i)));
          } else {
            coords.push_back(get_integer(j, ptr));
          }
          if (coords.size() != n || (j.is_array() && j.size() != n))
            fail(ptr, "expected " + std::to_string(n) + " coordinates for " + g.to_string());
          c = json::array();
          for (const auto& v : coords) c.push_back(integer_json(v));
          return from_flat_coords(g, coords);
        }
        case GroupKind::Dyadic:
        case GroupKind::Rational: {
          Rational q = get_rational(j, ptr);
          c = rational_json(q);
          return Element::scalar(g, q);
        }
        case GroupKind::DirectSum: {
          const auto& s = g.summands();
          if (!j.is_array() || j.size() != s.size()) fail(ptr, "expected " + std::to_string(s.size()) + " summand values");
          std::vector<Element> parts;
          c = json::array();
          for (std::size_t i = 0; i < s.size(); ++i) {
            json cc;
            parts.push_back(element(s[i], j[i], child(ptr, i), depth + 1, cc));
            c.push_back(cc);
          }
          return Element::sum(g, std::move(parts));
        }
        case GroupKind::TailProduct: {
          if (!j.is_object()) fail(ptr, "expected {\"base\": ..., \"deviations\": {...}}");
          allow_keys(j, {"base", "deviations", "values"}, ptr);
          json cb;
          Element base = element(g.base(), field(j, "base", ptr), child(ptr, "base"), depth + 1, cb);
          c = json{{"base", cb}};
          bool values = j.contains("values");
          if (values && j.contains("deviations")) fail(ptr, "give either deviations or values");
          std::string key = values ? "values" : "deviations";
          std::map<long, Element> entries;
          json ce = json::object();
          if (j.contains(key)) {
            const json& d = j[key];
            std::string dp = child(ptr, key);
            if (!d.is_object() || d.size() > static_cast<std::size_t>(kMaxStabilization)) fail(dp, "expected an object keyed by coordinate");
            for (auto it = d.begin(); it != d.end(); ++it) {
              std::string kp = child(dp, it.key());
              long m = get_long(json(it.key()), kp, -kMaxStabilization * 10, kMaxStabilization * 10);
              if (!g.rule().valid_coordinate(m)) fail(kp, "not a coordinate of " + g.to_string());
              json cv;
              entries.emplace(m, element(g.component(), it.value(), kp, depth + 1, cv));
              ce[std::to_string(m)] = cv;
            }
          }
          c[key] = ce;
          return values ? Element::tail_from_values(g, base, entries) : Element::tail(g, base, entries);
        }
        case GroupKind::Quotient: {
          if (!j.is_object()) fail(ptr, "expected {\"representative\": ...}");
          allow_keys(j, {"representative"}, ptr);
          json cr;
          Element rep = element(g.ambient(), field(j, "representative", ptr), child(ptr, "representative"), depth + 1, cr);
          c = json{{"representative", cr}};
          return Element::coset(g, rep);
        }
      }
      fail(ptr, "unsupported group");
    });
  }

  // ---- homs

  HomExpr named_hom(const std::string& name, const std::string& from) {
    auto it = homs_.find(name);
    if (it != homs_.end()) return it->second;
    std::string ptr = child("/homs", name);
    if (!root_.contains("homs") || !root_["homs"].contains(name)) fail(from, "undefined hom '" + name + "'");
    if (!active_.insert("h:" + name).second) fail(ptr, "cyclic definition of hom '" + name + "'");
    json c;
    HomExpr h = hom_literal(root_["homs"][name], ptr, 0, c);
    active_.erase("h:" + name);
    homs_.emplace(name, h);
    canon_["homs"][name] = c;
    return h;
  }

  HomExpr hom_ref(const json& j, const std::string& ptr, int depth, json& c) {
    if (j.is_string()) {
      c = j;
      return named_hom(j.get<std::string>(), ptr);
    }
    return hom_literal(j, ptr, depth, c);
  }

  std::vector<HomExpr> hom_list(const json& j, const std::string& key, const std::string& ptr, int depth, json& c,
                                bool allow_empty) {
    std::vector<HomExpr> out;
    c[key] = json::array();
    if (!j.contains(key) && allow_empty) return out;
    const json& a = field(j, key, ptr);
    std::string ap = child(ptr, key);
    if (!a.is_array() || (!allow_empty && a.empty()) || a.size() > static_cast<std::size_t>(kMaxCount)) fail(ap, "expected an array of homs");
    for (std::size_t i = 0; i < a.size(); ++i) {
      json cc;
      out.push_back(hom_ref(a[i], child(ap, i), depth + 1, cc));
      c[key].push_back(cc);
    }
    return out;
  }

  HomExpr hom_literal(const json& j, const std::string& ptr, int depth, json& c) {
    if (depth > kMaxDepth) fail(ptr, "nesting too deep");
    if (!j.is_object()) fail(ptr, "expected a hom literal object or a hom name");
    std::string kind = get_string(field(j, "kind", ptr), child(ptr, "kind"));
    c = json::object();
    c["kind"] = kind;
    auto grp = [&](const char* key) {
      json cg;
      GroupExpr g = group_ref(field(j, key, ptr), child(ptr, key), depth + 1, cg);
      c[key] = cg;
      return g;
    };
    auto one = [&](const char* key) {
      json ch;
      HomExpr h = hom_ref(field(j, key, ptr), child(ptr, key), depth + 1, ch);
      c[key] = ch;
      return h;
    };
    auto index = [&](const char* key, long lo, long hi) {
      long v = get_long(field(j, key, ptr), child(ptr, key), lo, hi);
      c[key] = v;
      return v;
    };
    if (kind == "matrix") {
      allow_keys(j, {"kind", "domain", "codomain", "entries"}, ptr);
      GroupExpr d = grp("domain"), cd = grp("codomain");
      auto dn = flat_orders(d), cn = flat_orders(cd);
      if (!dn || !cn) fail(ptr, "matrix homs need finitely generated groups");
      const json& e = field(j, "entries", ptr);
      std::string ep = child(ptr, "entries");
      if (!e.is_array() || e.size() != cn->size()) fail(ep, "expected " + std::to_string(cn->size()) + " rows");
      IntMatrix m(cn->size(), dn->size());
      c["entries"] = json::array();
      for (std::size_t r = 0; r < e.size(); ++r) {
        std::string rp = child(ep, r);
        if (!e[r].is_array() || e[r].size() != dn->size()) fail(rp, "expected " + std::to_string(dn->size()) + " entries");
        json row = json::array();
        for (std::size_t col = 0; col < dn->size(); ++col) {
          m(r, col) = get_integer(e[r][col], child(rp, col));
          row.push_back(integer_json(m(r, col)));
        }
        c["entries"].push_back(row);
      }
      return guarded(ptr, [&] { return HomExpr::fg_matrix(d, cd, m); });
    }
    if (kind == "scalar") {
      allow_keys(j, {"kind", "domain", "codomain", "factor"}, ptr);
      GroupExpr d = grp("domain"), cd = grp("codomain");
      Rational f = get_rational(field(j, "factor", ptr), child(ptr, "factor"));
      c["factor"] = rational_json(f);
      auto dn = flat_orders(d), cn = flat_orders(cd);
      if (dn && cn) {
        if (f.get_den() != 1 || dn->size() != cn->size()) fail(ptr, "integer scalar between groups of equal flat rank expected");
        IntMatrix m(cn->size(), dn->size());
        for (std::size_t i = 0; i < dn->size(); ++i) m(i, i) = f.get_num();
        return guarded(ptr, [&] { return HomExpr::fg_matrix(d, cd, m); });
      }
      return guarded(ptr, [&] { return HomExpr::scalar(d, cd, f); });
    }
    if (kind == "identity") {
      allow_keys(j, {"kind", "group"}, ptr);
      return HomExpr::identity(grp("group"));
    }
    if (kind == "zero") {
      allow_keys(j, {"kind", "domain", "codomain"}, ptr);
      GroupExpr d = grp("domain"), cd = grp("codomain");
      return HomExpr::zero(d, cd);
    }
    if (kind == "negate") {
      allow_keys(j, {"kind", "of"}, ptr);
      return HomExpr::negate(one("of"));
    }
    if (kind == "compose") {
      allow_keys(j, {"kind", "outer", "inner"}, ptr);
      HomExpr o = one("outer"), i = one("inner");
      return guarded(ptr, [&] { return HomExpr::compose(o, i); });
    }
    if (kind == "sum") {
      allow_keys(j, {"kind", "terms"}, ptr);
      auto terms = hom_list(j, "terms", ptr, depth, c, false);
      return guarded(ptr, [&] {
        HomExpr acc = terms[0];
        for (std::size_t i = 1; i < terms.size(); ++i) acc = HomExpr::sum(acc, terms[i]);
        return acc;
      });
    }
    if (kind == "family") {
      allow_keys(j, {"kind", "domain", "codomain", "base", "stabilization", "head", "period", "index_map"}, ptr);
      GroupExpr d = grp("domain"), cd = grp("codomain");
      HomExpr b = one("base");
      CoordFamily fam;
      fam.stabilization = j.contains("stabilization") ? get_long(j["stabilization"], child(ptr, "stabilization"), 1, kMaxStabilization) : 1;
      c["stabilization"] = fam.stabilization;
      fam.head = hom_list(j, "head", ptr, depth, c, true);
      fam.period = hom_list(j, "period", ptr, depth, c, false);
      if (static_cast<long>(fam.head.size()) != fam.stabilization - 1)
        fail(child(ptr, "head"), "head must list the maps below the stabilization rank");
      std::string im = j.contains("index_map") ? get_string(j["index_map"], child(ptr, "index_map")) : "same";
      IndexMap imap;
      if (im == "same") imap = IndexMap::Same;
      else if (im == "pairs_to_signed") imap = IndexMap::PairsToSigned;
      else fail(child(ptr, "index_map"), "expected \"same\" or \"pairs_to_signed\"");
      c["index_map"] = im;
      return guarded(ptr, [&] { return HomExpr::family(d, cd, b, fam, imap); });
    }
    if (kind == "section") {
      allow_keys(j, {"kind", "codomain", "base"}, ptr);
      GroupExpr cd = grp("codomain");
      HomExpr b = one("base");
      return guarded(ptr, [&] { return HomExpr::section(cd, b); });
    }
    if (kind == "project_base") {
      allow_keys(j, {"kind", "domain"}, ptr);
      GroupExpr d = grp("domain");
      return guarded(ptr, [&] { return HomExpr::project_base(d); });
    }
    if (kind == "coordinate" || kind == "insert") {
      const char* gkey = kind == "coordinate" ? "domain" : "codomain";
      allow_keys(j, {"kind", gkey, "m"}, ptr);
      GroupExpr g = grp(gkey);
      long m = index("m", -kMaxStabilization * 10, kMaxStabilization * 10);
      return guarded(ptr, [&] { return kind == "coordinate" ? HomExpr::coordinate(g, m) : HomExpr::insert(g, m); });
    }
    if (kind == "inject" || kind == "project") {
      const char* gkey = kind == "inject" ? "codomain" : "domain";
      allow_keys(j, {"kind", gkey, "index"}, ptr);
      GroupExpr g = grp(gkey);
      auto i = static_cast<std::size_t>(index("index", 0, kMaxCount));
      return guarded(ptr, [&] { return kind == "inject" ? HomExpr::inject(g, i) : HomExpr::project(g, i); });
    }
    if (kind == "direct_sum") {
      allow_keys(j, {"kind", "maps"}, ptr);
      auto maps = hom_list(j, "maps", ptr, depth, c, false);
      return guarded(ptr, [&] { return HomExpr::direct_sum_of(maps); });
    }
    if (kind == "dyadic_to_finite") {
      allow_keys(j, {"kind", "codomain", "image_of_one"}, ptr);
      GroupExpr cd = grp("codomain");
      json ce;
      Element e = element(cd, field(j, "image_of_one", ptr), child(ptr, "image_of_one"), depth + 1, ce);
      c["image_of_one"] = ce;
      return guarded(ptr, [&] { return HomExpr::dyadic_to_finite(cd, e); });
    }
    if (kind == "quotient_map") {
      allow_keys(j, {"kind", "quotient"}, ptr);
      GroupExpr q = grp("quotient");
      return guarded(ptr, [&] { return HomExpr::quotient_map(q); });
    }
    fail(child(ptr, "kind"), "unknown hom kind '" + kind + "'");
  }

  // ---- total K and graded maps

  TotalKPtr named_totalk(const std::string& name, const std::string& from) {
    auto it = totalk_.find(name);
    if (it != totalk_.end()) return it->second;
    std::string ptr = child("/totalk", name);
    if (!root_.contains("totalk") || !root_["totalk"].contains(name)) fail(from, "undefined total K '" + name + "'");
    const json& j = root_["totalk"][name];
    if (!j.is_object()) fail(ptr, "expected an object");
    json c = json::object();
    TotalKPtr k;
    long bound = j.contains("bound") ? get_long(j["bound"], child(ptr, "bound"), 1, kMaxBound) : 12;
    c["bound"] = bound;
    if (j.contains("fixture")) {
      allow_keys(j, {"fixture", "bound"}, ptr);
      std::string f = get_string(j["fixture"], child(ptr, "fixture"));
      c["fixture"] = f;
      k = guarded(child(ptr, "fixture"), [&] { return load_fixture(f, bound).k; });
    } else {
      allow_keys(j, {"k0", "k1", "bound"}, ptr);
      json c0, c1;
      GroupExpr k0 = group_ref(field(j, "k0", ptr), child(ptr, "k0"), 1, c0);
      GroupExpr k1 = group_ref(field(j, "k1", ptr), child(ptr, "k1"), 1, c1);
      c["k0"] = c0;
      c["k1"] = c1;
      k = guarded(ptr, [&] { return build_total_k(k0, k1, bound); });
    }
    totalk_.emplace(name, k);
    canon_["totalk"][name] = c;
    return k;
  }

  GradedHom named_graded(const std::string& name, const std::string& from) {
    auto it = graded_.find(name);
    if (it != graded_.end()) return it->second;
    std::string ptr = child("/graded_homs", name);
    if (!root_.contains("graded_homs") || !root_["graded_homs"].contains(name)) fail(from, "undefined graded hom '" + name + "'");
    const json& j = root_["graded_homs"][name];
    if (!j.is_object()) fail(ptr, "expected an object");
    std::string kind = get_string(field(j, "kind", ptr), child(ptr, "kind"));
    json c = json{{"kind", kind}};
    GradedHom g;
    if (kind == "induced") {
      allow_keys(j, {"kind", "source", "target", "k0", "k1"}, ptr);
      std::string s = get_string(field(j, "source", ptr), child(ptr, "source"));
      std::string t = get_string(field(j, "target", ptr), child(ptr, "target"));
      TotalKPtr src = named_totalk(s, child(ptr, "source"));
      TotalKPtr tgt = named_totalk(t, child(ptr, "target"));
      json c0, c1;
      HomExpr f0 = hom_ref(field(j, "k0", ptr), child(ptr, "k0"), 1, c0);
      HomExpr f1 = hom_ref(field(j, "k1", ptr), child(ptr, "k1"), 1, c1);
      c["source"] = s;
      c["target"] = t;
      c["k0"] = c0;
      c["k1"] = c1;
      g = guarded(ptr, [&] { return induced_graded_hom(src, tgt, f0, f1); });
    } else if (kind == "fixture_map") {
      allow_keys(j, {"kind", "name", "bound"}, ptr);
      std::string n = get_string(field(j, "name", ptr), child(ptr, "name"));
      long bound = j.contains("bound") ? get_long(j["bound"], child(ptr, "bound"), 1, kMaxBound) : 12;
      c["name"] = n;
      c["bound"] = bound;
      g = guarded(ptr, [&]() -> GradedHom {
        if (n == "gamma") return gamma_map(bound);
        if (n == "gamma_inverse") return gamma_inverse_map(bound);
        if (n == "eta") return eta_map(bound);
        if (n == "zeta") return zeta_map(bound);
        if (n == "iota1") return iota_map(1, bound);
        if (n == "iota2") return iota_map(2, bound);
        if (n == "phi") return phi_graded(false, bound);
        if (n == "phiprime") return phi_graded(true, bound);
        fail(child(ptr, "name"), "unknown fixture map '" + n + "'");
      });
    } else {
      fail(child(ptr, "kind"), "expected \"induced\" or \"fixture_map\"");
    }
    graded_.emplace(name, g);
    canon_["graded_homs"][name] = c;
    return g;
  }

  // ---- assertions

  HomExpr hom_name(const json& j, const char* key, const std::string& ptr, AssertionSpec& a, json& c) {
    std::string n = get_string(field(j, key, ptr), child(ptr, key));
    a.operands[key] = n;
    c[key] = n;
    return named_hom(n, child(ptr, key));
  }

  AssertionSpec assertion(const json& j, const std::string& ptr) {
    if (!j.is_object()) fail(ptr, "expected an assertion object");
    AssertionSpec a;
    a.pointer = ptr;
    a.kind = get_string(field(j, "kind", ptr), child(ptr, "kind"));
    a.expected = get_string(field(j, "expected", ptr), child(ptr, "expected"));
    json c = json{{"kind", a.kind}, {"expected", a.expected}};
    auto expect = [&](std::initializer_list<const char*> allowed) {
      for (const char* s : allowed)
        if (a.expected == s) return;
      std::string list;
      for (const char* s : allowed) list += std::string(list.empty() ? "" : ", ") + s;
      fail(child(ptr, "expected"), "expected one of: " + list);
    };
    if (j.contains("window")) a.window = get_long(j["window"], child(ptr, "window"), 1, 1000);
    if (a.kind == "square") {
      allow_keys(j, {"kind", "expected", "top", "right", "left", "bottom", "window"}, ptr);
      expect({"commutes", "fails"});
      HomExpr top = hom_name(j, "top", ptr, a, c), right = hom_name(j, "right", ptr, a, c);
      HomExpr left = hom_name(j, "left", ptr, a, c), bottom = hom_name(j, "bottom", ptr, a, c);
      if (!(top.domain() == left.domain())) fail(child(ptr, "left"), "top and left must share a domain");
      if (!(right.codomain() == bottom.codomain())) fail(child(ptr, "bottom"), "right and bottom must share a codomain");
      if (!(top.codomain() == right.domain())) fail(child(ptr, "right"), "right must start where top ends");
      if (!(left.codomain() == bottom.domain())) fail(child(ptr, "bottom"), "bottom must start where left ends");
      c["window"] = a.window;
    } else if (a.kind == "exact_at") {
      allow_keys(j, {"kind", "expected", "f", "g"}, ptr);
      expect({"exact", "fails"});
      HomExpr f = hom_name(j, "f", ptr, a, c), g = hom_name(j, "g", ptr, a, c);
      for (const auto* grp : {&f.domain(), &f.codomain(), &g.codomain()})
        if (!is_finitely_generated(*grp)) fail(ptr, "exactness is decided for finitely generated groups only");
      if (!(f.codomain() == g.domain())) fail(child(ptr, "g"), "g must start where f ends");
    } else if (a.kind == "lambda_linear") {
      allow_keys(j, {"kind", "expected", "map", "ops", "bound", "window"}, ptr);
      expect({"commutes", "fails"});
      std::string n = get_string(field(j, "map", ptr), child(ptr, "map"));
      a.operands["map"] = n;
      c["map"] = n;
      GradedHom g = named_graded(n, child(ptr, "map"));
      a.ops = {"rho", "beta", "kappa"};
      if (j.contains("ops")) {
        const json& o = j["ops"];
        if (!o.is_array() || o.empty()) fail(child(ptr, "ops"), "expected a nonempty array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < o.size(); ++i) {
          std::string op = get_string(o[i], child(child(ptr, "ops"), i));
          if (op != "rho" && op != "beta" && op != "kappa") fail(child(child(ptr, "ops"), i), "expected rho, beta or kappa");
          seen.insert(op);
        }
        a.ops.clear();
        for (const char* op : {"rho", "beta", "kappa"})
          if (seen.count(op)) a.ops.push_back(op);
      }
      c["ops"] = a.ops;
      a.bound = j.contains("bound") ? get_long(j["bound"], child(ptr, "bound"), 1, kMaxBound) : g.bound();
      if (a.bound > g.bound()) fail(child(ptr, "bound"), "map only reaches level " + std::to_string(g.bound()));
      c["bound"] = a.bound;
      c["window"] = a.window;
    } else if (a.kind == "cone_member") {
      allow_keys(j, {"kind", "expected", "group", "element", "cone", "levels"}, ptr);
      expect({"positive", "negative"});
      const json& cone = field(j, "cone", ptr);
      std::string cp = child(ptr, "cone");
      if (cone.is_string()) {
        std::string k = cone.get<std::string>();
        ConeSpec s;
        if (k == "trivial") s.kind = ConeKind::Trivial;
        else if (k == "nonnegative") s.kind = ConeKind::Nonnegative;
        else if (k == "product_positive") s.kind = ConeKind::ProductPositive;
        else if (k == "first_coordinate_positive") s.kind = ConeKind::FirstCoordinatePositive;
        else fail(cp, "unknown cone '" + k + "'");
        a.cone = s;
        c["cone"] = k;
        json cg, ce;
        GroupExpr g = group_ref(field(j, "group", ptr), child(ptr, "group"), 1, cg);
        a.element = element(g, field(j, "element", ptr), child(ptr, "element"), 1, ce);
        c["group"] = cg;
        c["element"] = ce;
        check_cone_shape(s, g, cp);
      } else if (cone.is_object()) {
        allow_keys(cone, {"fixture", "total", "bound"}, cp);
        std::string f = get_string(field(cone, "fixture", cp), child(cp, "fixture"));
        bool total = cone.contains("total") && cone["total"].is_boolean() && cone["total"].get<bool>();
        if (cone.contains("total") && !cone["total"].is_boolean()) fail(child(cp, "total"), "expected a boolean");
        long bound = cone.contains("bound") ? get_long(cone["bound"], child(cp, "bound"), 1, kMaxBound) : 12;
        FixtureBundle b = guarded(child(cp, "fixture"), [&] { return load_fixture(f, bound); });
        c["cone"] = json{{"fixture", f}, {"total", total}, {"bound", bound}};
        if (total) {
          if (!b.total_cone) fail(child(cp, "fixture"), "fixture has no total cone");
          a.cone = *b.total_cone;
          const json& lv = field(j, "levels", ptr);
          std::string lp = child(ptr, "levels");
          if (!lv.is_object()) fail(lp, "expected an object keyed by \"j,n\"");
          TotalElement te;
          json cl = json::object();
          for (auto it = lv.begin(); it != lv.end(); ++it) {
            std::string kp = child(lp, it.key());
            auto comma = it.key().find(',');
            if (comma == std::string::npos) fail(kp, "level keys look like \"0,3\"");
            int jj = static_cast<int>(get_long(json(it.key().substr(0, comma)), kp, 0, 1));
            long n = get_long(json(it.key().substr(comma + 1)), kp, 0, bound);
            if (!b.k->has(jj, n)) fail(kp, "level absent from fixture");
            json ce;
            te.emplace(Level{jj, n}, element(b.k->group(jj, n), it.value(), kp, 1, ce));
            cl[std::to_string(jj) + "," + std::to_string(n)] = ce;
          }
          if (!te.count({0, 0})) fail(lp, "the K0 level \"0,0\" is required");
          a.total_element = te;
          c["levels"] = cl;
        } else {
          a.cone = b.cone;
          json ce;
          a.element = element(b.k->group(0, 0), field(j, "element", ptr), child(ptr, "element"), 1, ce);
          c["element"] = ce;
          check_cone_shape(b.cone, b.k->group(0, 0), cp);
        }
      } else {
        fail(cp, "expected a cone name or {\"fixture\": ...}");
      }
    } else {
      fail(child(ptr, "kind"), "unknown assertion kind '" + a.kind + "'");
    }
    canon_["assertions"].push_back(c);
    return a;
  }

  void check_cone_shape(const ConeSpec& s, const GroupExpr& g, const std::string& ptr) {
    auto ordered = [](const GroupExpr& x) { return x.kind() == GroupKind::Dyadic || x.kind() == GroupKind::Rational; };
    bool ok = true;
    switch (s.kind) {
      case ConeKind::Nonnegative: ok = ordered(g); break;
      case ConeKind::ProductPositive:
        ok = g.kind() == GroupKind::TailProduct && ordered(g.base()) && ordered(g.component());
        break;
      case ConeKind::FirstCoordinatePositive:
        ok = g.kind() == GroupKind::DirectSum && g.summands()[0].kind() == GroupKind::Rational;
        break;
      default: break;
    }
    if (!ok) fail(ptr, std::string("cone ") + cone_name(s.kind) + " does not apply to " + g.to_string());
  }
};

std::pair<long, long> line_column(const std::string& text, std::size_t byte) {
  long line = 1, col = 1;
  std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

InputDocument parse_input(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    auto pos = msg.find("] ");
    if (msg.rfind("[json.exception", 0) == 0 && pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ParseError(std::to_string(line) + ":" + std::to_string(col) + ": " + msg, line, col);
  }
  try {
    return Resolver(root).run();
  } catch (const SemanticError&) {
    throw;
  } catch (const json::exception& e) {
    throw SemanticError(std::string("/: ") + e.what());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw SemanticError(std::string("/: ") + e.what());
  }
}

std::string serialize(const InputDocument& doc) { return doc.canonical; }

// ---------------------------------------------------------------- assertions

std::vector<AssertionResult> run_assertions(const InputDocument& doc) {
  std::vector<AssertionResult> out;
  for (std::size_t i = 0; i < doc.assertions.size(); ++i) {
    const AssertionSpec& a = doc.assertions[i];
    AssertionResult r;
    r.index = i;
    r.kind = a.kind;
    r.expected = a.expected;
    auto hom = [&](const char* key) { return doc.homs.at(a.operands.at(key)); };
    if (a.kind == "square") {
      auto res = check_square(hom("top"), hom("right"), hom("left"), hom("bottom"), a.window);
      r.observed = res.commutes ? "commutes" : "fails";
      if (res.witness)
        r.witness = ReportWitness{a.pointer, res.witness->probe.to_string(), "", res.witness->lhs.to_string(),
                                  res.witness->rhs.to_string()};
    } else if (a.kind == "exact_at") {
      auto ex = is_exact_at(to_fg_hom(hom("f")), to_fg_hom(hom("g")));
      r.observed = ex.exact ? "exact" : "fails";
      r.detail = ex.reason;
      if (!ex.exact) {
        std::ostringstream os;
        os << "(";
        for (std::size_t k = 0; k < ex.witness.size(); ++k) os << (k ? "," : "") << ex.witness[k].get_str();
        os << ")";
        r.witness = ReportWitness{a.pointer, os.str(), "", "", ""};
      }
    } else if (a.kind == "lambda_linear") {
      std::set<LambdaOp> ops;
      for (const auto& o : a.ops) ops.insert(o == "rho" ? LambdaOp::Rho : o == "beta" ? LambdaOp::Beta : LambdaOp::Kappa);
      auto lr = check_lambda_linear(doc.graded_homs.at(a.operands.at("map")), ops, a.bound, a.window);
      r.observed = lr.commutes ? "commutes" : "fails";
      std::size_t bad = 0;
      for (const auto& sq : lr.squares)
        if (!sq.commutes) {
          if (!bad && sq.witness)
            r.witness = ReportWitness{sq.location(), sq.witness->probe.to_string(), "", sq.witness->lhs.to_string(),
                                      sq.witness->rhs.to_string()};
          ++bad;
        }
      r.detail = std::to_string(lr.squares.size() - bad) + "/" + std::to_string(lr.squares.size()) + " squares commute";
    } else if (a.kind == "cone_member") {
      bool pos;
      if (a.total_element) {
        int cond = total_cone_condition(*a.cone, *a.total_element);
        pos = cond != 0;
        r.detail = pos ? "condition (" + std::to_string(cond) + ")" : "no condition holds";
      } else {
        pos = cone_membership(*a.cone, *a.element);
      }
      r.observed = pos ? "positive" : "negative";
    }
    r.pass = r.observed == r.expected;
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- reports

namespace {

ojson witness_json(const ReportWitness& w) {
  ojson o;
  o["location"] = w.location;
  o["element"] = w.element;
  if (!w.image.empty()) o["image"] = w.image;
  o["lhs"] = w.lhs;
  o["rhs"] = w.rhs;
  return o;
}

std::string witness_text(const ReportWitness& w) {
  std::string s = "witness " + w.location + ": element=" + w.element;
  if (!w.image.empty()) s += " image=" + w.image;
  if (!w.lhs.empty() || !w.rhs.empty()) s += " lhs=" + w.lhs + " rhs=" + w.rhs;
  return s;
}

}  // namespace

std::string emit_report(const std::vector<VerifyReport>& reports, const ReportOptions& options) {
  bool all = std::all_of(reports.begin(), reports.end(), [](const VerifyReport& r) { return r.pass; });
  if (options.format == "json") {
    ojson root;
    root["schema"] = "totalk-report/1";
    root["max_coeff"] = options.max_coeff;
    root["window"] = options.window;
    root["verdict"] = all ? "PASS" : "FAIL";
    root["reports"] = ojson::array();
    for (const auto& r : reports) {
      ojson o;
      o["check"] = r.check;
      o["parameters"] = ojson::object();
      for (const auto& [k, v] : r.parameters) o["parameters"][k] = v;
      o["verdict"] = r.pass ? "PASS" : "FAIL";
      o["outcome"] = r.outcome;
      o["subs"] = ojson::array();
      for (const auto& s : r.subs) o["subs"].push_back(ojson{{"name", s.name}, {"verdict", s.pass ? "PASS" : "FAIL"}, {"detail", s.detail}});
      o["witnesses"] = ojson::array();
      for (const auto& w : r.witnesses) o["witnesses"].push_back(witness_json(w));
      if (options.timing) o["elapsed_seconds"] = r.elapsed_seconds;
      root["reports"].push_back(o);
    }
    return root.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "totalk report max_coeff=" << options.max_coeff << " window=" << options.window << "\n";
  for (const auto& r : reports) {
    os << "CHECK " << r.check;
    for (const auto& [k, v] : r.parameters) os << " " << k << "=" << v;
    os << " ... " << (r.pass ? "PASS" : "FAIL");
    if (r.outcome != "pass" && r.outcome != "fail") os << " (" << r.outcome << ")";
    if (options.timing) os << " [" << std::fixed << std::setprecision(3) << r.elapsed_seconds << "s]";
    os << "\n";
    for (const auto& s : r.subs) os << "  " << (s.pass ? "PASS " : "FAIL ") << s.name << (s.detail.empty() ? "" : ": " + s.detail) << "\n";
    for (const auto& w : r.witnesses) os << "    " << witness_text(w) << "\n";
  }
  os << "SUMMARY " << reports.size() << " checks, verdict " << (all ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string emit_assertions(const std::vector<AssertionResult>& results, const std::string& format) {
  bool all = std::all_of(results.begin(), results.end(), [](const AssertionResult& r) { return r.pass; });
  if (format == "json") {
    ojson root;
    root["schema"] = "totalk-check/1";
    root["verdict"] = all ? "PASS" : "FAIL";
    root["assertions"] = ojson::array();
    for (const auto& r : results) {
      ojson o;
      o["index"] = r.index;
      o["kind"] = r.kind;
      o["expected"] = r.expected;
      o["observed"] = r.observed;
      o["verdict"] = r.pass ? "PASS" : "FAIL";
      o["detail"] = r.detail;
      if (r.witness) o["witness"] = witness_json(*r.witness);
      root["assertions"].push_back(o);
    }
    return root.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& r : results) {
    os << "ASSERT #" << r.index << " " << r.kind << " expected=" << r.expected << " observed=" << r.observed << " ... "
       << (r.pass ? "PASS" : "FAIL") << (r.detail.empty() ? "" : " (" + r.detail + ")") << "\n";
    if (r.witness) os << "    " << witness_text(*r.witness) << "\n";
  }
  os << "SUMMARY " << results.size() << " assertions, verdict " << (all ? "PASS" : "FAIL") << "\n";
  return os.str();
}

// ---------------------------------------------------------------- snf

IntMatrix parse_matrix_text(const std::string& text) {
  std::vector<std::vector<Integer>> rows;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError("empty matrix");
  if (text[first] == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      auto [line, col] = line_column(text, e.byte);
      throw ParseError(std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON matrix", line, col);
    }
    if (!j.is_array() || j.empty()) throw InputError("expected a nonempty array of rows");
    try {
      for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array()) throw InputError("/" + std::to_string(r) + ": expected a row array");
        std::vector<Integer> row;
        for (std::size_t c = 0; c < j[r].size(); ++c) row.push_back(get_integer(j[r][c], "/" + std::to_string(r) + "/" + std::to_string(c)));
        rows.push_back(std::move(row));
      }
    } catch (const SemanticError& e) {
      throw InputError(e.what());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string tok;
      std::vector<Integer> row;
      long col = 0;
      while (ls >> tok) {
        ++col;
        Integer v;
        std::size_t start = tok[0] == '-' || tok[0] == '+' ? 1 : 0;
        bool ok = tok.size() > start && tok.size() < 4096;
        for (std::size_t i = start; ok && i < tok.size(); ++i) ok = std::isdigit(static_cast<unsigned char>(tok[i])) != 0;
        if (!ok) throw ParseError(std::to_string(lineno) + ":" + std::to_string(col) + ": '" + tok + "' is not an integer", lineno, col);
        v.set_str(tok[0] == '+' ? tok.substr(1) : tok, 10);
        row.push_back(v);
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw InputError("empty matrix");
  if (rows.size() > 256 || rows[0].size() > 256) throw InputError("matrix larger than 256x256");
  for (const auto& r : rows)
    if (r.size() != rows[0].size()) throw InputError("rows have different lengths");
  return IntMatrix::from_rows(rows);
}

std::string emit_snf(const IntMatrix& m, const std::string& format) {
  SmithForm f = smith_normal_form(m);
  FgAbGroup coker = cokernel_presentation(m).group;
  if (format == "json") {
    ojson o;
    o["rows"] = m.rows();
    o["cols"] = m.cols();
    o["rank"] = f.rank;
    o["diagonal"] = ojson::array();
    for (const auto& d : f.diagonal) o["diagonal"].push_back(d.get_str());
    auto mat = [](const IntMatrix& x) {
      ojson a = ojson::array();
      for (const auto& row : x.to_rows()) {
        ojson r = ojson::array();
        for (const auto& v : row) r.push_back(v.get_str());
        a.push_back(r);
      }
      return a;
    };
    o["U"] = mat(f.U);
    o["S"] = mat(f.S);
    o["V"] = mat(f.V);
    o["cokernel"] = coker.to_string();
    return o.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "rank " << f.rank << "\ndiagonal";
  for (const auto& d : f.diagonal) os << " " << d.get_str();
  os << "\ncokernel " << coker.to_string() << "\nS = U*M*V\nU: " << f.U.to_string() << "\nV: " << f.V.to_string() << "\nS: " << f.S.to_string() << "\n";
  return os.str();
}

// ---------------------------------------------------------------- fixtures

std::string dump_fixture(const FixtureBundle& b, const std::string& format) {
  const TotalK& k = *b.k;
  ojson o;
  o["name"] = b.name;
  o["max_coeff"] = k.bound();
  o["scale"] = b.scale ? ojson(b.scale->to_string()) : ojson(nullptr);
  o["cone"] = cone_name(b.cone.kind);
  if (b.total_cone) o["total_cone"] = cone_name(b.total_cone->kind);
  o["notes"] = b.notes;
  o["levels"] = ojson::array();
  for (long n = 0; n <= k.bound(); ++n)
    for (int j = 0; j < 2; ++j) {
      ojson l;
      l["level"] = level_string(j, n);
      if (!k.has(j, n)) {
        l["group"] = nullptr;
        o["levels"].push_back(l);
        continue;
      }
      const GroupExpr& g = k.group(j, n);
      l["group"] = g.to_string();
      l["structure"] = is_finitely_generated(g) ? ojson(fg_structure(g).to_string()) : ojson(nullptr);
      o["levels"].push_back(l);
    }
  o["graded_maps"] = ojson::array();
  for (const auto& [name, _] : b.graded_maps) o["graded_maps"].push_back(name);
  o["maps"] = ojson::array();
  for (const auto& [name, h] : b.maps) o["maps"].push_back(ojson{{"name", name}, {"hom", h.to_string()}});
  if (format == "json") return o.dump(2) + "\n";
  std::ostringstream os;
  os << "fixture " << b.name << " max_coeff=" << k.bound() << "\n";
  os << "scale " << (b.scale ? b.scale->to_string() : "-") << "\n";
  os << "cone " << cone_name(b.cone.kind) << (b.total_cone ? std::string(", total cone ") + cone_name(b.total_cone->kind) : "") << "\n";
  for (const auto& n : b.notes) os << "note " << n << "\n";
  for (const auto& l : o["levels"]) {
    os << "  " << l["level"].get<std::string>() << " = ";
    if (l["group"].is_null()) os << "absent\n";
    else {
      os << l["group"].get<std::string>();
      if (!l["structure"].is_null()) os << "  ~  " << l["structure"].get<std::string>();
      os << "\n";
    }
  }
  for (const auto& [name, _] : b.graded_maps) os << "graded map " << name << "\n";
  for (const auto& [name, h] : b.maps) os << "map " << name << ": " << h.to_string() << "\n";
  return os.str();
}

}  // namespace totalk

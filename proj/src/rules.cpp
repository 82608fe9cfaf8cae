#include "rp3kh/rules.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace rp3kh {

namespace {

Mask bit(int g) { return static_cast<Mask>(1u << g); }
Mask pair_bit(int a, int b) { return static_cast<Mask>(1u << (a * 4 + b)); }

CircleModule mod_V_kh() {
  return {"V", {{"1", 1, 0, false}, {"X", -1, 0, true}}};
}
CircleModule mod_Vbar() {
  return {"Vbar", {{"1b", 1, 1, false}, {"Xb", -1, -1, true}}};
}
CircleModule mod_V_inst() {
  return {"V", {{"v+", 1, 0, false}, {"v-", -1, 0, true}}};
}
CircleModule mod_W() {
  return {"W",
          {{"w+", 1, 1, false},
           {"w-", -1, -1, true},
           {"w+'", 1, 1, false},
           {"w-'", -1, -1, true}}};
}

void fill_kh0_trivial(RuleTable& t) {
  t.m_tt[0][0] = bit(0);
  t.m_tt[0][1] = bit(1);
  t.m_tt[1][0] = bit(1);
  t.m_tt[1][1] = 0;
  t.s_tt[0] = pair_bit(0, 1) | pair_bit(1, 0);
  t.s_tt[1] = pair_bit(1, 1);
}

RuleTable make_kh0() {
  RuleTable t;
  t.name = "KH0";
  t.class1 = false;
  t.trivial_mod = mod_V_kh();
  fill_kh0_trivial(t);
  return t;
}

RuleTable make_kh_class1() {
  RuleTable t;
  t.name = "KH-CLASS1";
  t.class1 = true;
  t.trivial_mod = mod_V_kh();
  t.essential_mod = mod_Vbar();
  fill_kh0_trivial(t);
  t.m_et[0][0] = bit(0);  // 1b * 1 -> 1b
  t.m_et[0][1] = 0;       // 1b * X -> 0 (k-preserving part only)
  t.m_et[1][0] = bit(1);  // Xb * 1 -> Xb
  t.m_et[1][1] = 0;
  t.s_et[0] = pair_bit(0, 1);  // 1b -> 1b (x) X
  t.s_et[1] = pair_bit(1, 1);  // Xb -> Xb (x) X
  return t;
}

RuleTable make_kh1_class1() {
  RuleTable t = make_kh_class1();
  t.name = "KH1-CLASS1";
  t.m_et[0][1] = bit(1);                      // 1b * X -> Xb
  t.s_et[0] = pair_bit(0, 1) | pair_bit(1, 0);  // 1b -> 1b (x) X + Xb (x) 1
  return t;
}

RuleTable make_inst0() {
  RuleTable t;
  t.name = "INST0";
  t.class1 = false;
  t.extra_copies = 2;
  t.trivial_mod = mod_V_inst();
  fill_kh0_trivial(t);
  return t;
}

RuleTable make_inst1() {
  RuleTable t;
  t.name = "INST1";
  t.class1 = true;
  t.trivial_mod = mod_V_inst();
  t.essential_mod = mod_W();
  fill_kh0_trivial(t);
  // w+- (x) v+ -> w+-, primed likewise
  t.m_et[0][0] = bit(0);
  t.m_et[1][0] = bit(1);
  t.m_et[2][0] = bit(2);
  t.m_et[3][0] = bit(3);
  // w+ (x) v- -> w-, w- (x) v- -> 0, primed likewise
  t.m_et[0][1] = bit(1);
  t.m_et[1][1] = 0;
  t.m_et[2][1] = bit(3);
  t.m_et[3][1] = 0;
  // w+ -> w+ (x) v- + w- (x) v+, w- -> w- (x) v-, primed likewise
  t.s_et[0] = pair_bit(0, 1) | pair_bit(1, 0);
  t.s_et[1] = pair_bit(1, 1);
  t.s_et[2] = pair_bit(2, 1) | pair_bit(3, 0);
  t.s_et[3] = pair_bit(3, 1);
  return t;
}

}  // namespace

std::shared_ptr<const RuleTable> builtin(const std::string& theory) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const RuleTable>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(theory);
  if (it != cache.end()) return it->second;

  RuleTable t;
  if (theory == "KH0")
    t = make_kh0();
  else if (theory == "KH-CLASS1")
    t = make_kh_class1();
  else if (theory == "KH1-CLASS1")
    t = make_kh1_class1();
  else if (theory == "INST0")
    t = make_inst0();
  else if (theory == "INST1")
    t = make_inst1();
  else
    throw Error("unknown theory '" + theory + "'");
  validate_table(t);
  auto sp = std::make_shared<const RuleTable>(std::move(t));
  cache[theory] = sp;
  return sp;
}

namespace {

struct RuleParser {
  std::istringstream in;
  int lineno = 0;
  RuleTable t;
  bool have_trivial = false, have_essential = false;

  explicit RuleParser(const std::string& text) : in(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(lineno, 1, msg);
  }

  const CircleModule* module_by_name(const std::string& name) const {
    if (have_trivial && t.trivial_mod.name == name) return &t.trivial_mod;
    if (have_essential && t.essential_mod.name == name) return &t.essential_mod;
    return nullptr;
  }

  int gen_index(const CircleModule& m, const std::string& label) const {
    for (int i = 0; i < m.rank(); ++i)
      if (m.gens[i].label == label) return i;
    fail("unknown generator '" + label + "' in module " + m.name);
  }

  static std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }

  // "V" or "V(deg,k)"
  GenInfo parse_gen(const std::string& tok) const {
    GenInfo g;
    auto p = tok.find('(');
    if (p == std::string::npos) {
      g.label = tok;
      return g;
    }
    g.label = tok.substr(0, p);
    if (tok.back() != ')') fail("malformed generator '" + tok + "'");
    std::string args = tok.substr(p + 1, tok.size() - p - 2);
    auto comma = args.find(',');
    if (comma == std::string::npos) fail("generator gradings are (deg,k)");
    try {
      g.deg = std::stoi(args.substr(0, comma));
      g.k = std::stoi(args.substr(comma + 1));
    } catch (...) {
      fail("generator gradings are (deg,k)");
    }
    return g;
  }

  void parse_module(const std::vector<std::string>& toks) {
    // module <name> <trivial|essential>: g g g
    if (toks.size() < 4) fail("module declaration needs a name, a kind and generators");
    std::string kind = toks[2];
    bool colon_attached = !kind.empty() && kind.back() == ':';
    if (colon_attached) kind.pop_back();
    size_t first_gen = colon_attached ? 3 : 4;
    if (!colon_attached && (toks.size() < 5 || toks[3] != ":"))
      fail("expected ':' after module kind");
    CircleModule m;
    m.name = toks[1];
    if (m.name.find('x') != std::string::npos)
      fail("module names may not contain 'x'");
    for (size_t i = first_gen; i < toks.size(); ++i) m.gens.push_back(parse_gen(toks[i]));
    if (m.rank() < 1 || m.rank() > 4) fail("module rank must be 1..4");
    if (kind == "trivial") {
      if (have_trivial) fail("duplicate trivial module");
      t.trivial_mod = m;
      have_trivial = true;
    } else if (kind == "essential") {
      if (have_essential) fail("duplicate essential module");
      t.essential_mod = m;
      have_essential = true;
      t.class1 = true;
    } else {
      fail("module kind must be trivial or essential");
    }
  }

  void parse_reduced(const std::vector<std::string>& toks) {
    // reduced <module>: g [g...]
    if (toks.size() < 3) fail("reduced declaration needs a module and generators");
    std::string name = toks[1];
    if (!name.empty() && name.back() == ':') name.pop_back();
    CircleModule* m = nullptr;
    if (have_trivial && t.trivial_mod.name == name) m = &t.trivial_mod;
    if (have_essential && t.essential_mod.name == name) m = &t.essential_mod;
    if (!m) fail("unknown module '" + name + "'");
    for (size_t i = 2; i < toks.size(); ++i) {
      if (toks[i] == ":") continue;
      m->gens[gen_index(*m, toks[i])].reduced_kill = true;
    }
  }

  // shape "T1xT2->T3" (merge) or "T->T1xT2" (split)
  struct Shape {
    std::vector<std::string> lhs, rhs;
  };
  Shape parse_shape(std::string s) const {
    if (!s.empty() && s.back() == ':') s.pop_back();
    auto arrow = s.find("->");
    if (arrow == std::string::npos) fail("rule shape needs '->'");
    auto split_x = [&](const std::string& part) {
      std::vector<std::string> names;
      size_t i = 0;
      while (i <= part.size()) {
        auto x = part.find('x', i);
        if (x == std::string::npos) {
          names.push_back(part.substr(i));
          break;
        }
        names.push_back(part.substr(i, x - i));
        i = x + 1;
      }
      return names;
    };
    Shape sh;
    sh.lhs = split_x(s.substr(0, arrow));
    sh.rhs = split_x(s.substr(arrow + 2));
    return sh;
  }

  // sum of terms: "g" or "g1*g2" joined by '+', or "0"
  std::vector<std::vector<std::string>> parse_sum(const std::vector<std::string>& toks,
                                                  size_t from) const {
    std::string joined;
    for (size_t i = from; i < toks.size(); ++i) joined += toks[i];
    std::vector<std::vector<std::string>> terms;
    if (joined == "0") return terms;
    size_t i = 0;
    while (i <= joined.size()) {
      auto plus = joined.find('+', i);
      std::string term =
          (plus == std::string::npos) ? joined.substr(i) : joined.substr(i, plus - i);
      std::vector<std::string> factors;
      size_t j = 0;
      while (j <= term.size()) {
        auto star = term.find('*', j);
        if (star == std::string::npos) {
          factors.push_back(term.substr(j));
          break;
        }
        factors.push_back(term.substr(j, star - j));
        j = star + 1;
      }
      terms.push_back(factors);
      if (plus == std::string::npos) break;
      i = plus + 1;
    }
    return terms;
  }

  void parse_merge(const std::vector<std::string>& toks) {
    // merge T1xT2->T3: g1*g2 -> sum
    if (toks.size() < 4) fail("malformed merge rule");
    Shape sh = parse_shape(toks[1]);
    if (sh.lhs.size() != 2 || sh.rhs.size() != 1) fail("merge shape is T1xT2->T3");
    const CircleModule* m1 = module_by_name(sh.lhs[0]);
    const CircleModule* m2 = module_by_name(sh.lhs[1]);
    const CircleModule* mo = module_by_name(sh.rhs[0]);
    if (!m1 || !m2 || !mo) fail("merge shape references undeclared module");
    auto arrow = std::find(toks.begin() + 2, toks.end(), "->");
    if (arrow == toks.end()) fail("merge rule needs 'g1*g2 -> sum'");
    std::string lhs;
    for (auto it = toks.begin() + 2; it != arrow; ++it) lhs += *it;
    auto star = lhs.find('*');
    if (star == std::string::npos) fail("merge input is g1*g2");
    int g1 = gen_index(*m1, lhs.substr(0, star));
    int g2 = gen_index(*m2, lhs.substr(star + 1));
    auto terms = parse_sum(toks, static_cast<size_t>(arrow - toks.begin()) + 1);
    Mask mask = 0;
    for (const auto& f : terms) {
      if (f.size() != 1) fail("merge image terms are single generators");
      mask ^= bit(gen_index(*mo, f[0]));
    }
    bool e1 = have_essential && m1 == &t.essential_mod;
    bool e2 = have_essential && m2 == &t.essential_mod;
    bool eo = have_essential && mo == &t.essential_mod;
    if (!e1 && !e2 && !eo)
      t.m_tt[g1][g2] = mask;
    else if ((e1 ^ e2) && eo)
      t.m_et[e1 ? g1 : g2][e1 ? g2 : g1] = mask;
    else
      fail("merge must be trivial+trivial->trivial or essential+trivial->essential");
  }

  void parse_split(const std::vector<std::string>& toks) {
    // split T->T1xT2: g -> sum of a*b
    if (toks.size() < 4) fail("malformed split rule");
    Shape sh = parse_shape(toks[1]);
    if (sh.lhs.size() != 1 || sh.rhs.size() != 2) fail("split shape is T->T1xT2");
    const CircleModule* mi = module_by_name(sh.lhs[0]);
    const CircleModule* m1 = module_by_name(sh.rhs[0]);
    const CircleModule* m2 = module_by_name(sh.rhs[1]);
    if (!mi || !m1 || !m2) fail("split shape references undeclared module");
    auto arrow = std::find(toks.begin() + 2, toks.end(), "->");
    if (arrow == toks.end()) fail("split rule needs 'g -> sum'");
    std::string lhs;
    for (auto it = toks.begin() + 2; it != arrow; ++it) lhs += *it;
    int g = gen_index(*mi, lhs);
    auto terms = parse_sum(toks, static_cast<size_t>(arrow - toks.begin()) + 1);
    bool ei = have_essential && mi == &t.essential_mod;
    Mask mask = 0;
    for (const auto& f : terms) {
      if (f.size() != 2) fail("split image terms are g1*g2");
      int a = gen_index(*m1, f[0]);
      int b = gen_index(*m2, f[1]);
      if (ei) {
        // normalize to (essential, trivial)
        bool first_essential = m1 == &t.essential_mod;
        if (m1 == m2 || (!first_essential && m2 != &t.essential_mod))
          fail("essential split produces one essential and one trivial factor");
        mask ^= first_essential ? pair_bit(a, b) : pair_bit(b, a);
      } else {
        if (m1 == &t.essential_mod || m2 == &t.essential_mod)
          fail("trivial split cannot produce essential factors");
        mask ^= pair_bit(a, b);
      }
    }
    if (ei)
      t.s_et[g] = mask;
    else
      t.s_tt[g] = mask;
  }

  RuleTable run() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      auto toks = split_ws(line);
      if (toks.empty()) continue;
      const std::string& kw = toks[0];
      if (kw == "theory") {
        if (toks.size() != 2) fail("theory declaration needs a name");
        t.name = toks[1];
      } else if (kw == "module") {
        parse_module(toks);
      } else if (kw == "reduced") {
        parse_reduced(toks);
      } else if (kw == "merge") {
        parse_merge(toks);
      } else if (kw == "split") {
        parse_split(toks);
      } else if (kw == "onetoone" || kw == "onetoone:") {
        std::string rest;
        for (size_t i = 1; i < toks.size(); ++i) rest += toks[i];
        if (rest != "zero" && !(toks.size() == 1 && kw == "onetoone:"))
          fail("only 'onetoone: zero' is supported");
        t.onetoone_zero = true;
      } else {
        fail("unknown declaration '" + kw + "'");
      }
    }
    if (!have_trivial) fail("rule file declares no trivial module");
    return t;
  }
};

}  // namespace

RuleTable parse_rule_text(const std::string& text) {
  RuleParser p(text);
  return p.run();
}

RuleTable load_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open rule file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RuleTable t = parse_rule_text(ss.str());
  validate_table(t);
  return t;
}

std::pair<RuleTable, RuleTable> block_decompose(const RuleTable& t) {
  const int r = t.essential_mod.rank();
  if (!t.class1 || r < 2 || r % 2 != 0) throw Error("table does not split: no block structure");

  // Blocks = connected components of the image relation on essential gens.
  std::vector<int> comp(r);
  for (int i = 0; i < r; ++i) comp[i] = i;
  auto unite = [&](int a, int b) {
    int ca = comp[a], cb = comp[b];
    if (ca == cb) return;
    for (int& c : comp)
      if (c == cb) c = ca;
  };
  for (int e = 0; e < r; ++e) {
    for (int tr = 0; tr < t.trivial_mod.rank(); ++tr)
      for (int g = 0; g < r; ++g)
        if (t.m_et[e][tr] & bit(g)) unite(e, g);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (t.s_et[e] & pair_bit(a, b)) unite(e, a);
  }
  std::vector<int> roots;
  for (int i = 0; i < r; ++i)
    if (std::find(roots.begin(), roots.end(), comp[i]) == roots.end()) roots.push_back(comp[i]);
  if (roots.size() != 2) throw Error("table does not split: found " +
                                     std::to_string(roots.size()) + " block(s)");

  std::pair<RuleTable, RuleTable> out{t, t};
  RuleTable* parts[2] = {&out.first, &out.second};
  for (int p = 0; p < 2; ++p) {
    RuleTable& b = *parts[p];
    b.name = t.name + (p == 0 ? "-block0" : "-block1");
    std::vector<int> gens;  // original indices in this block, in order
    for (int i = 0; i < r; ++i)
      if (comp[i] == roots[p]) gens.push_back(i);
    b.essential_mod.gens.clear();
    for (int g : gens) b.essential_mod.gens.push_back(t.essential_mod.gens[g]);
    auto newidx = [&](int orig) {
      auto it = std::find(gens.begin(), gens.end(), orig);
      return it == gens.end() ? -1 : static_cast<int>(it - gens.begin());
    };
    b.m_et = {};
    b.s_et = {};
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      int e = gens[gi];
      for (int tr = 0; tr < t.trivial_mod.rank(); ++tr) {
        Mask mask = 0;
        for (int g = 0; g < r; ++g)
          if (t.m_et[e][tr] & bit(g)) {
            int ni = newidx(g);
            if (ni < 0) throw Error("table does not split: merge image mixes blocks");
            mask ^= bit(ni);
          }
        b.m_et[gi][tr] = mask;
      }
      Mask mask = 0;
      for (int a = 0; a < 4; ++a)
        for (int tb = 0; tb < 4; ++tb)
          if (t.s_et[e] & pair_bit(a, tb)) {
            int ni = newidx(a);
            if (ni < 0) throw Error("table does not split: split image mixes blocks");
            mask ^= pair_bit(ni, tb);
          }
      b.s_et[gi] = mask;
    }
  }
  return out;
}

bool equivalent(const RuleTable& a, const RuleTable& b) {
  if (a.class1 != b.class1 || a.extra_copies != b.extra_copies) return false;
  if (a.trivial_mod.rank() != b.trivial_mod.rank()) return false;
  if (a.essential_mod.rank() != b.essential_mod.rank()) return false;
  auto gens_match = [](const CircleModule& x, const CircleModule& y) {
    for (int i = 0; i < x.rank(); ++i) {
      if (x.gens[i].deg != y.gens[i].deg || x.gens[i].k != y.gens[i].k ||
          x.gens[i].reduced_kill != y.gens[i].reduced_kill)
        return false;
    }
    return true;
  };
  if (!gens_match(a.trivial_mod, b.trivial_mod)) return false;
  if (!gens_match(a.essential_mod, b.essential_mod)) return false;
  return a.m_tt == b.m_tt && a.m_et == b.m_et && a.s_tt == b.s_tt && a.s_et == b.s_et &&
         a.onetoone_zero == b.onetoone_zero;
}

namespace {

// Total k of an (essential gen, trivial gen) pair mask term.
int pair_k(const RuleTable& t, int a, int b) {
  return t.essential_mod.gens[a].k + t.trivial_mod.gens[b].k;
}

}  // namespace

bool preserves_k(const RuleTable& t) {
  for (int a = 0; a < t.trivial_mod.rank(); ++a) {
    for (int b = 0; b < t.trivial_mod.rank(); ++b) {
      int kin = t.trivial_mod.gens[a].k + t.trivial_mod.gens[b].k;
      for (int g = 0; g < t.trivial_mod.rank(); ++g)
        if (t.m_tt[a][b] & bit(g) && t.trivial_mod.gens[g].k != kin) return false;
    }
    int kin = t.trivial_mod.gens[a].k;
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y)
        if (t.s_tt[a] & pair_bit(x, y) &&
            t.trivial_mod.gens[x].k + t.trivial_mod.gens[y].k != kin)
          return false;
  }
  for (int e = 0; e < t.essential_mod.rank(); ++e) {
    for (int b = 0; b < t.trivial_mod.rank(); ++b) {
      int kin = t.essential_mod.gens[e].k + t.trivial_mod.gens[b].k;
      for (int g = 0; g < t.essential_mod.rank(); ++g)
        if (t.m_et[e][b] & bit(g) && t.essential_mod.gens[g].k != kin) return false;
    }
    int kin = t.essential_mod.gens[e].k;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (t.s_et[e] & pair_bit(a, b) && pair_k(t, a, b) != kin) return false;
  }
  return true;
}

bool deformation_drops_k_by_2(const RuleTable& deformed, const RuleTable& base) {
  if (deformed.trivial_mod.rank() != base.trivial_mod.rank() ||
      deformed.essential_mod.rank() != base.essential_mod.rank())
    return false;
  if (deformed.m_tt != base.m_tt || deformed.s_tt != base.s_tt) return false;
  for (int e = 0; e < deformed.essential_mod.rank(); ++e) {
    for (int b = 0; b < deformed.trivial_mod.rank(); ++b) {
      Mask diff = deformed.m_et[e][b] ^ base.m_et[e][b];
      int kin = deformed.essential_mod.gens[e].k + deformed.trivial_mod.gens[b].k;
      for (int g = 0; g < deformed.essential_mod.rank(); ++g)
        if (diff & bit(g) && deformed.essential_mod.gens[g].k != kin - 2) return false;
    }
    Mask diff = deformed.s_et[e] ^ base.s_et[e];
    int kin = deformed.essential_mod.gens[e].k;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (diff & pair_bit(a, b) && pair_k(deformed, a, b) != kin - 2) return false;
  }
  return true;
}

bool block_diagonal(const RuleTable& t) {
  if (t.essential_mod.rank() != 4) return false;
  auto blk = [](int g) { return g >> 1; };
  for (int e = 0; e < 4; ++e) {
    for (int b = 0; b < t.trivial_mod.rank(); ++b)
      for (int g = 0; g < 4; ++g)
        if (t.m_et[e][b] & bit(g) && blk(g) != blk(e)) return false;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (t.s_et[e] & pair_bit(a, b) && blk(a) != blk(e)) return false;
  }
  return true;
}

}  // namespace rp3kh

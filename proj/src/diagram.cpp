#include "rp3kh/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "rp3kh/cube.hpp"

namespace rp3kh {

bool Diagram::oriented() const {
  for (const auto& a : arcs)
    if (a.dir == ArcDir::Unset) return false;
  return true;
}

int Diagram::arc_index(ArcId id) const {
  auto it = std::lower_bound(arcs.begin(), arcs.end(), id,
                             [](const Arc& a, ArcId v) { return a.id < v; });
  if (it == arcs.end() || it->id != id) return -1;
  return static_cast<int>(it - arcs.begin());
}

const Arc& Diagram::arc(ArcId id) const {
  int idx = arc_index(id);
  if (idx < 0) throw Error("unknown arc id " + std::to_string(id));
  return arcs[idx];
}

std::vector<std::array<LegRef, 2>> arc_occurrences(const Diagram& d) {
  std::vector<std::array<LegRef, 2>> occ(d.arcs.size(), {LegRef{}, LegRef{}});
  std::vector<int> count(d.arcs.size(), 0);
  for (int c = 0; c < d.ncrossings(); ++c) {
    for (int s = 0; s < 4; ++s) {
      int idx = d.arc_index(d.crossings[c].legs[s]);
      if (idx < 0) throw Error("crossing leg references undeclared arc");
      if (count[idx] >= 2)
        throw Error("arc " + std::to_string(d.arcs[idx].id) + " appears more than twice");
      occ[idx][count[idx]++] = LegRef{c, s};
    }
  }
  for (size_t i = 0; i < d.arcs.size(); ++i)
    if (count[i] != 2)
      throw Error("arc " + std::to_string(d.arcs[i].id) + " appears " +
                  std::to_string(count[i]) + " times in crossings");
  return occ;
}

namespace {

struct Token {
  std::string text;
  int col;
};

std::vector<Token> tokenize_line(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           line[j] != '#')
      ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i + 1)});
    i = j;
  }
  return out;
}

int parse_int(const Token& t, int line, const char* what) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(t.text, &pos);
  } catch (...) {
    throw ParseError(line, t.col, std::string("expected ") + what + ", got '" + t.text + "'");
  }
  if (pos != t.text.size())
    throw ParseError(line, t.col, std::string("expected ") + what + ", got '" + t.text + "'");
  return static_cast<int>(v);
}

}  // namespace

Diagram parse_rpd(const std::string& text) {
  Diagram d;
  std::map<ArcId, int> weights;          // declared via W
  std::map<ArcId, std::pair<int, int>> weight_at;  // line/col of W declaration
  std::map<ArcId, ArcDir> dirs;
  bool have_mark = false;
  int mark_line = 0;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize_line(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;
    auto need = [&](size_t n) {
      if (toks.size() != n + 1)
        throw ParseError(lineno, toks[0].col,
                         kw + " expects " + std::to_string(n) + " argument(s)");
    };
    if (kw == "X") {
      need(4);
      Crossing c;
      for (int s = 0; s < 4; ++s) {
        int v = parse_int(toks[s + 1], lineno, "arc id");
        if (v <= 0) throw ParseError(lineno, toks[s + 1].col, "arc ids are positive integers");
        c.legs[s] = v;
      }
      d.crossings.push_back(c);
    } else if (kw == "W") {
      need(2);
      int id = parse_int(toks[1], lineno, "arc id");
      if (id <= 0) throw ParseError(lineno, toks[1].col, "arc ids are positive integers");
      int w = parse_int(toks[2], lineno, "weight");
      if (w != 0 && w != 1) throw ParseError(lineno, toks[2].col, "weight must be 0 or 1");
      if (weights.count(id))
        throw ParseError(lineno, toks[1].col, "duplicate weight declaration for arc " +
                                                  std::to_string(id));
      weights[id] = w;
      weight_at[id] = {lineno, toks[1].col};
    } else if (kw == "L") {
      need(1);
      const std::string& t = toks[1].text;
      if (t == "w=0")
        d.loops.push_back({0});
      else if (t == "w=1")
        d.loops.push_back({1});
      else
        throw ParseError(lineno, toks[1].col, "expected w=0 or w=1");
    } else if (kw == "O") {
      need(2);
      int id = parse_int(toks[1], lineno, "arc id");
      const std::string& s = toks[2].text;
      if (s != "+" && s != "-") throw ParseError(lineno, toks[2].col, "expected + or -");
      if (dirs.count(id))
        throw ParseError(lineno, toks[1].col,
                         "duplicate orientation for arc " + std::to_string(id));
      dirs[id] = (s == "+") ? ArcDir::Forward : ArcDir::Reversed;
    } else if (kw == "M") {
      need(1);
      if (have_mark) throw ParseError(lineno, toks[0].col, "at most one marked point");
      have_mark = true;
      mark_line = lineno;
      const std::string& t = toks[1].text;
      if (!t.empty() && t[0] == 'L') {
        int k = 0;
        try {
          size_t pos = 0;
          k = std::stoi(t.substr(1), &pos);
          if (pos + 1 != t.size()) throw std::runtime_error("");
        } catch (...) {
          throw ParseError(lineno, toks[1].col, "expected arc id or L<k>");
        }
        d.mark = {MarkKind::Loop, k};
      } else {
        int id = parse_int(toks[1], lineno, "arc id");
        d.mark = {MarkKind::Arc, id};
      }
    } else {
      throw ParseError(lineno, toks[0].col, "unknown declaration '" + kw + "'");
    }
  }

  // Arc set: everything referenced by a crossing, plus W declarations.
  std::map<ArcId, int> occ_count;
  for (const auto& c : d.crossings)
    for (ArcId a : c.legs) occ_count[a]++;
  for (const auto& [id, w] : weights)
    if (!occ_count.count(id)) {
      auto [ln, cl] = weight_at[id];
      throw ParseError(ln, cl, "arc " + std::to_string(id) + " appears 0 times in crossings");
    }
  for (const auto& [id, n] : occ_count)
    if (n != 2)
      throw ParseError(lineno, 1, "arc " + std::to_string(id) + " appears " +
                                      std::to_string(n) + " times in crossings (expected 2)");
  for (const auto& [id, dir] : dirs)
    if (!occ_count.count(id))
      throw ParseError(lineno, 1, "orientation references undeclared arc " + std::to_string(id));

  for (const auto& [id, n] : occ_count) {
    Arc a;
    a.id = id;
    a.weight = weights.count(id) ? weights[id] : 0;
    a.dir = dirs.count(id) ? dirs[id] : ArcDir::Unset;
    d.arcs.push_back(a);
  }

  if (d.mark.kind == MarkKind::Arc && !occ_count.count(d.mark.value))
    throw ParseError(mark_line, 1, "marked arc " + std::to_string(d.mark.value) + " undeclared");
  if (d.mark.kind == MarkKind::Loop &&
      (d.mark.value < 0 || d.mark.value >= static_cast<int>(d.loops.size())))
    throw ParseError(mark_line, 1, "marked loop index out of range");

  return d;
}

std::string serialize(const Diagram& d) {
  std::ostringstream out;
  for (const auto& c : d.crossings)
    out << "X " << c.legs[0] << ' ' << c.legs[1] << ' ' << c.legs[2] << ' ' << c.legs[3] << '\n';
  for (const auto& a : d.arcs)
    if (a.weight) out << "W " << a.id << " 1\n";
  for (const auto& l : d.loops) out << "L w=" << l.weight << '\n';
  for (const auto& a : d.arcs)
    if (a.dir != ArcDir::Unset) out << "O " << a.id << ' ' << (a.dir == ArcDir::Forward ? '+' : '-') << '\n';
  if (d.mark.kind == MarkKind::Arc) out << "M " << d.mark.value << '\n';
  if (d.mark.kind == MarkKind::Loop) out << "M L" << d.mark.value << '\n';
  return out.str();
}

int link_class(const Diagram& d) {
  int w = 0;
  for (const auto& a : d.arcs) w ^= (a.weight & 1);
  for (const auto& l : d.loops) w ^= (l.weight & 1);
  return w;
}

namespace {

// True when the arc occurrence (c, s) is directed into the crossing.
bool incoming_at(const Diagram& d, const std::vector<std::array<LegRef, 2>>& occ, int c, int s) {
  int idx = d.arc_index(d.crossings[c].legs[s]);
  const auto& o = occ[idx];
  int which = (o[0].crossing == c && o[0].slot == s) ? 0 : 1;
  ArcDir dir = d.arcs[idx].dir;
  if (dir == ArcDir::Unset) throw Error("missing orientation on arc " + std::to_string(d.arcs[idx].id));
  // Forward runs first -> second occurrence, so it points into occurrence 1.
  return (dir == ArcDir::Forward) ? (which == 1) : (which == 0);
}

}  // namespace

std::vector<std::vector<int>> components(const Diagram& d) {
  auto occ = arc_occurrences(d);
  std::vector<std::vector<int>> comps;
  std::vector<bool> seen(d.arcs.size(), false);
  for (size_t start = 0; start < d.arcs.size(); ++start) {
    if (seen[start]) continue;
    std::vector<int> comp;
    size_t cur = start;
    int toward = 1;  // walk toward occurrence `toward` of arc `cur`
    while (!seen[cur]) {
      seen[cur] = true;
      comp.push_back(static_cast<int>(cur));
      LegRef end = occ[cur][toward];
      // Strand continues through the crossing: slots 0<->2 and 1<->3.
      int next_slot = end.slot ^ 2;
      int next = d.arc_index(d.crossings[end.crossing].legs[next_slot]);
      LegRef entry{end.crossing, next_slot};
      const auto& no = occ[next];
      int which = (no[0] == entry) ? 0 : 1;
      cur = static_cast<size_t>(next);
      toward = which ^ 1;
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

Diagram auto_orient(const Diagram& d) {
  Diagram out = d;
  auto occ = arc_occurrences(d);
  std::vector<bool> seen(d.arcs.size(), false);
  for (size_t start = 0; start < d.arcs.size(); ++start) {
    if (seen[start]) continue;
    size_t cur = start;
    int toward = 1;
    while (!seen[cur]) {
      seen[cur] = true;
      out.arcs[cur].dir = (toward == 1) ? ArcDir::Forward : ArcDir::Reversed;
      LegRef end = occ[cur][toward];
      int next_slot = end.slot ^ 2;
      int next = d.arc_index(d.crossings[end.crossing].legs[next_slot]);
      LegRef entry{end.crossing, next_slot};
      int which = (occ[next][0] == entry) ? 0 : 1;
      cur = static_cast<size_t>(next);
      toward = which ^ 1;
    }
  }
  return out;
}

std::pair<int, int> crossing_signs(const Diagram& d) {
  auto occ = arc_occurrences(d);
  int np = 0, nm = 0;
  for (int c = 0; c < d.ncrossings(); ++c) {
    bool in0 = incoming_at(d, occ, c, 0);
    bool in2 = incoming_at(d, occ, c, 2);
    bool in1 = incoming_at(d, occ, c, 1);
    bool in3 = incoming_at(d, occ, c, 3);
    if (in0 == in2 || in1 == in3)
      throw Error("inconsistent orientation at crossing " + std::to_string(c));
    int pu = in0 ? 0 : 2;
    int po = in1 ? 1 : 3;
    if (po == (pu + 1) % 4)
      ++np;
    else
      ++nm;
  }
  return {np, nm};
}

Diagram mirror(const Diagram& d) {
  Diagram out = d;
  auto occ = arc_occurrences(d);
  for (int c = 0; c < d.ncrossings(); ++c) {
    int rot = 1;
    if (d.oriented() && !d.arcs.empty()) {
      // Re-root on the incoming leg of the new under-strand (the old over).
      rot = incoming_at(d, occ, c, 1) ? 1 : 3;
    }
    Crossing nc;
    for (int s = 0; s < 4; ++s) nc.legs[s] = d.crossings[c].legs[(s + rot) % 4];
    out.crossings[c] = nc;
  }
  // Leg permutations can swap an arc's scan-order occurrences; flip stored
  // directions where that happened so the physical orientation is unchanged.
  if (!d.arcs.empty()) {
    auto new_occ = arc_occurrences(out);
    for (size_t i = 0; i < d.arcs.size(); ++i) {
      if (d.arcs[i].dir == ArcDir::Unset) continue;
      // Map old occurrence 0 through the rotation of its crossing.
      LegRef e0 = occ[i][0];
      int rot = 1;
      if (d.oriented()) rot = incoming_at(d, occ, e0.crossing, 1) ? 1 : 3;
      LegRef moved{e0.crossing, (e0.slot - rot + 4) % 4};
      if (!(new_occ[i][0] == moved))
        out.arcs[i].dir = (d.arcs[i].dir == ArcDir::Forward) ? ArcDir::Reversed : ArcDir::Forward;
    }
  }
  return out;
}

Diagram disjoint_union(const Diagram& a, const Diagram& b) {
  if (link_class(a) == 1 && link_class(b) == 1)
    throw Error("disjoint union of two class-1 diagrams is not realizable");
  ArcId offset = 0;
  for (const auto& arc : a.arcs) offset = std::max(offset, arc.id);
  Diagram out = a;
  for (auto c : b.crossings) {
    for (auto& l : c.legs) l += offset;
    out.crossings.push_back(c);
  }
  for (auto arc : b.arcs) {
    arc.id += offset;
    out.arcs.push_back(arc);
  }
  std::sort(out.arcs.begin(), out.arcs.end(), [](const Arc& x, const Arc& y) { return x.id < y.id; });
  int loop_offset = static_cast<int>(a.loops.size());
  for (const auto& l : b.loops) out.loops.push_back(l);
  if (a.mark.kind == MarkKind::None && b.mark.kind != MarkKind::None) {
    out.mark = b.mark;
    if (out.mark.kind == MarkKind::Arc)
      out.mark.value += offset;
    else
      out.mark.value += loop_offset;
  }
  return out;
}

std::vector<Violation> validate(const Diagram& d, bool check_realizability, int max_crossings) {
  std::vector<Violation> v;
  for (size_t i = 0; i < d.arcs.size(); ++i) {
    if (d.arcs[i].id <= 0) v.push_back({"arc-id", "non-positive arc id"});
    if (i + 1 < d.arcs.size() && d.arcs[i].id >= d.arcs[i + 1].id)
      v.push_back({"arc-order", "arc ids not strictly sorted"});
    if (d.arcs[i].weight != 0 && d.arcs[i].weight != 1)
      v.push_back({"weight", "arc " + std::to_string(d.arcs[i].id) + " weight not in {0,1}"});
  }
  for (const auto& l : d.loops)
    if (l.weight != 0 && l.weight != 1) v.push_back({"weight", "loop weight not in {0,1}"});

  std::map<ArcId, int> occ_count;
  for (const auto& c : d.crossings)
    for (ArcId a : c.legs) {
      occ_count[a]++;
      if (d.arc_index(a) < 0)
        v.push_back({"undeclared-arc", "crossing references arc " + std::to_string(a)});
    }
  for (const auto& a : d.arcs) {
    int n = occ_count.count(a.id) ? occ_count[a.id] : 0;
    if (n != 2)
      v.push_back({"dangling-arc", "arc " + std::to_string(a.id) + " appears " +
                                       std::to_string(n) + " times"});
  }

  if (d.mark.kind == MarkKind::Arc && d.arc_index(d.mark.value) < 0)
    v.push_back({"mark", "marked arc undeclared"});
  if (d.mark.kind == MarkKind::Loop &&
      (d.mark.value < 0 || d.mark.value >= static_cast<int>(d.loops.size())))
    v.push_back({"mark", "marked loop index out of range"});

  bool any_oriented = false, all_oriented = true;
  for (const auto& a : d.arcs) {
    if (a.dir != ArcDir::Unset)
      any_oriented = true;
    else
      all_oriented = false;
  }
  if (!v.empty()) return v;  // structural problems mask the rest

  if (any_oriented && !all_oriented)
    v.push_back({"orientation", "partially oriented diagram"});
  else if (all_oriented && !d.arcs.empty()) {
    try {
      crossing_signs(d);
    } catch (const Error& e) {
      v.push_back({"orientation", e.what()});
    }
  }

  if (check_realizability) {
    try {
      CubeOptions opt;
      opt.max_crossings = max_crossings;
      build_cube(d, opt);
    } catch (const Error& e) {
      v.push_back({"realizability", e.what()});
    }
  }
  return v;
}

}  // namespace rp3kh

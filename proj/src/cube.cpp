#include "rp3kh/cube.hpp"

#include <algorithm>
#include <bit>
#include <future>
#include <map>
#include <string>

#include "rp3kh/union_find.hpp"

namespace rp3kh {

namespace {

std::string vertex_bits(Vertex v, int n) {
  std::string s(static_cast<size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if (v >> i & 1u) s[i] = '1';
  return s;
}

}  // namespace

Resolution resolve(const Diagram& d, Vertex v) {
  const int n = d.ncrossings();
  Resolution r;
  r.vertex = v;

  if (n > 0) {
    auto occ = arc_occurrences(d);
    UnionFind uf(4 * n);
    for (size_t i = 0; i < d.arcs.size(); ++i)
      uf.unite(occ[i][0].crossing * 4 + occ[i][0].slot, occ[i][1].crossing * 4 + occ[i][1].slot);
    for (int c = 0; c < n; ++c) {
      if (v >> c & 1u) {
        uf.unite(4 * c + 0, 4 * c + 1);
        uf.unite(4 * c + 2, 4 * c + 3);
      } else {
        uf.unite(4 * c + 0, 4 * c + 3);
        uf.unite(4 * c + 1, 4 * c + 2);
      }
    }
    std::map<int, Circle> by_root;
    for (size_t i = 0; i < d.arcs.size(); ++i) {
      int root = uf.find(occ[i][0].crossing * 4 + occ[i][0].slot);
      Circle& c = by_root[root];
      c.arcs.push_back(d.arcs[i].id);
      c.essential ^= (d.arcs[i].weight & 1);
    }
    for (auto& [root, c] : by_root) {
      std::sort(c.arcs.begin(), c.arcs.end());
      c.key = c.arcs.front();
      r.circles.push_back(std::move(c));
    }
    std::sort(r.circles.begin(), r.circles.end(),
              [](const Circle& a, const Circle& b) { return a.key < b.key; });
  }

  for (size_t k = 0; k < d.loops.size(); ++k) {
    Circle c;
    c.is_loop = true;
    c.key = static_cast<int>(k);
    c.essential = (d.loops[k].weight & 1) != 0;
    r.circles.push_back(std::move(c));
  }
  return r;
}

int marked_circle(const Resolution& r, const Diagram& d) {
  if (d.mark.kind == MarkKind::None) return -1;
  for (size_t i = 0; i < r.circles.size(); ++i) {
    const Circle& c = r.circles[i];
    if (d.mark.kind == MarkKind::Loop) {
      if (c.is_loop && c.key == d.mark.value) return static_cast<int>(i);
    } else if (!c.is_loop &&
               std::binary_search(c.arcs.begin(), c.arcs.end(), d.mark.value)) {
      return static_cast<int>(i);
    }
  }
  throw Error("marked point not found in resolution");
}

namespace {

CubeEdge classify_edge(const Diagram& d, const ResolutionCube& cube, Vertex u, int crossing) {
  CubeEdge e;
  e.from = u;
  e.to = u | (1u << crossing);
  e.crossing = crossing;
  const Resolution& ru = cube.resolutions[e.from];
  const Resolution& rv = cube.resolutions[e.to];

  std::array<ArcId, 4> legs = d.crossings[crossing].legs;
  auto touched_in = [&](const Resolution& r) {
    std::vector<int> t;
    for (size_t i = 0; i < r.circles.size(); ++i) {
      const Circle& c = r.circles[i];
      if (c.is_loop) continue;
      for (ArcId a : legs)
        if (std::binary_search(c.arcs.begin(), c.arcs.end(), a)) {
          t.push_back(static_cast<int>(i));
          break;
        }
    }
    return t;
  };
  std::vector<int> tu = touched_in(ru);
  std::vector<int> tv = touched_in(rv);
  if (tu.empty() || tu.size() > 2 || tv.empty() || tv.size() > 2)
    throw Error("bifurcation touches an unexpected number of circles");

  long long delta = static_cast<long long>(rv.circles.size()) -
                    static_cast<long long>(ru.circles.size());
  if (tu.size() == 2 && tv.size() == 1 && delta == -1) {
    e.kind = EdgeKind::Merge;
    e.u_c = {tu[0], tu[1]};
    e.v_c = {tv[0], -1};
  } else if (tu.size() == 1 && tv.size() == 2 && delta == 1) {
    e.kind = EdgeKind::Split;
    e.u_c = {tu[0], -1};
    e.v_c = {tv[0], tv[1]};
  } else if (tu.size() == 1 && tv.size() == 1 && delta == 0) {
    e.kind = EdgeKind::OneToOne;
    e.u_c = {tu[0], -1};
    e.v_c = {tv[0], -1};
  } else {
    throw Error("edge " + vertex_bits(u, cube.n) + " -> " + vertex_bits(e.to, cube.n) +
                ": circle-count delta does not match bifurcation shape");
  }

  for (int idx : tu)
    if (ru.circles[idx].essential) e.essential_involved = true;
  for (int idx : tv)
    if (rv.circles[idx].essential) e.essential_involved = true;

  // Essential count must be preserved across the edge.
  int eu = 0, ev = 0;
  for (int idx : tu) eu += ru.circles[idx].essential ? 1 : 0;
  for (int idx : tv) ev += rv.circles[idx].essential ? 1 : 0;
  if (eu != ev)
    throw Error("edge " + vertex_bits(u, cube.n) + " -> " + vertex_bits(e.to, cube.n) +
                ": essential-circle count not preserved");

  // Untouched circles persist with identical arc sets, so match by key.
  e.corr.assign(ru.circles.size(), -1);
  std::map<int, int> v_by_key;
  for (size_t i = 0; i < rv.circles.size(); ++i) {
    const Circle& c = rv.circles[i];
    v_by_key[c.is_loop ? -1 - c.key : c.key] = static_cast<int>(i);
  }
  for (size_t i = 0; i < ru.circles.size(); ++i) {
    if (std::find(tu.begin(), tu.end(), static_cast<int>(i)) != tu.end()) continue;
    const Circle& c = ru.circles[i];
    auto it = v_by_key.find(c.is_loop ? -1 - c.key : c.key);
    if (it == v_by_key.end() || rv.circles[it->second].arcs != c.arcs)
      throw Error("circle correspondence failed across an edge");
    e.corr[i] = it->second;
  }
  return e;
}

}  // namespace

ResolutionCube build_cube(const Diagram& d, const CubeOptions& opt) {
  const int n = d.ncrossings();
  if (n > opt.max_crossings)
    throw Error("diagram has " + std::to_string(n) + " crossings, exceeding the cap of " +
                std::to_string(opt.max_crossings) + " (raise RP3KH_MAX_N to override)");
  ResolutionCube cube;
  cube.n = n;
  cube.cls = link_class(d);
  const size_t nv = size_t{1} << n;
  cube.resolutions.resize(nv);

  auto fill_range = [&](size_t lo, size_t hi) {
    for (size_t v = lo; v < hi; ++v)
      cube.resolutions[v] = resolve(d, static_cast<Vertex>(v));
  };
  int threads = std::max(1, opt.threads);
  if (threads > 1 && nv >= 64) {
    size_t chunk = (nv + threads - 1) / threads;
    std::vector<std::future<void>> fs;
    for (int t = 0; t < threads; ++t) {
      size_t lo = t * chunk, hi = std::min(nv, lo + chunk);
      if (lo >= hi) break;
      fs.push_back(std::async(std::launch::async, fill_range, lo, hi));
    }
    for (auto& f : fs) f.get();
  } else {
    fill_range(0, nv);
  }

  if (opt.check_realizability) {
    for (size_t v = 0; v < nv; ++v) {
      int ess = cube.resolutions[v].essential_count();
      if (ess != cube.cls)
        throw Error("resolution " + vertex_bits(static_cast<Vertex>(v), n) + " has " +
                    std::to_string(ess) + " essential circle(s); class-" +
                    std::to_string(cube.cls) + " diagrams require " + std::to_string(cube.cls) +
                    " (Lemma 2.2 census)");
    }
  }

  cube.edges.reserve(n > 0 ? (size_t{n} << (n - 1)) : 0);
  for (size_t u = 0; u < nv; ++u)
    for (int c = 0; c < n; ++c) {
      if (u >> c & 1u) continue;
      CubeEdge e = classify_edge(d, cube, static_cast<Vertex>(u), c);
      if (e.kind == EdgeKind::OneToOne && cube.cls == 1)
        throw Error("1-to-1 bifurcation in a class-1 diagram (not realizable)");
      if (e.kind == EdgeKind::OneToOne && opt.check_realizability) {
        if (cube.resolutions[e.from].circles[e.u_c[0]].essential)
          throw Error("1-to-1 bifurcation on an essential circle (not realizable)");
      }
      cube.edges.push_back(std::move(e));
    }
  return cube;
}

EdgeCensus edge_kind_census(const ResolutionCube& c) {
  EdgeCensus out;
  for (const auto& e : c.edges) {
    switch (e.kind) {
      case EdgeKind::Merge: ++out.merge; break;
      case EdgeKind::Split: ++out.split; break;
      case EdgeKind::OneToOne: ++out.one_to_one; break;
    }
    if (e.essential_involved) ++out.essential_involved;
  }
  return out;
}

}  // namespace rp3kh

#include "rp3kh/complex.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

namespace rp3kh {

int Level::shape_index(Vertex v) const {
  auto it = std::lower_bound(shapes.begin(), shapes.end(), v,
                             [](const VertexShape& s, Vertex x) { return s.vertex < x; });
  if (it == shapes.end() || it->vertex != v) return -1;
  return static_cast<int>(it - shapes.begin());
}

int Level::locate(uint64_t global) const {
  auto it = std::upper_bound(shapes.begin(), shapes.end(), global,
                             [](uint64_t g, const VertexShape& s) { return g < s.first_gen; });
  return static_cast<int>(it - shapes.begin()) - 1;
}

std::map<int, long long> RankProfile::by_i() const {
  std::map<int, long long> out;
  for (int p = 0; p < static_cast<int>(by_level.size()); ++p)
    if (by_level[p] != 0) out[oriented ? p - n_minus : p] += by_level[p];
  return out;
}

uint64_t GradedComplex::chain_rank() const {
  uint64_t s = 0;
  for (const auto& l : levels) s += l.dim;
  return s * static_cast<uint64_t>(copies);
}

uint64_t GradedComplex::chain_rank_level(int p) const {
  return levels[p].dim * static_cast<uint64_t>(copies);
}

void decode_labels(const VertexShape& sh, uint64_t local, uint8_t* out) {
  for (size_t s = 0; s < sh.slots.size(); ++s) {
    out[s] = static_cast<uint8_t>((local / sh.strides[s]) % sh.slots[s].nlabels);
  }
}

uint64_t encode_labels(const VertexShape& sh, const uint8_t* labs) {
  uint64_t idx = 0;
  for (size_t s = 0; s < sh.slots.size(); ++s) idx += labs[s] * sh.strides[s];
  return idx;
}

int gen_j(const GradedComplex& c, const VertexShape& sh, const uint8_t* labs) {
  int deg = 0;
  for (size_t s = 0; s < sh.slots.size(); ++s) {
    const CircleSlot& slot = sh.slots[s];
    const CircleModule& m = slot.essential ? c.table->essential_mod : c.table->trivial_mod;
    deg += m.gens[slot.labels[labs[s]]].deg;
  }
  int p = std::popcount(sh.vertex);
  return deg + p + (c.oriented ? c.n_plus - 2 * c.n_minus : 0);
}

int gen_k(const GradedComplex& c, const VertexShape& sh, const uint8_t* labs) {
  int k = 0;
  for (size_t s = 0; s < sh.slots.size(); ++s) {
    const CircleSlot& slot = sh.slots[s];
    const CircleModule& m = slot.essential ? c.table->essential_mod : c.table->trivial_mod;
    k += m.gens[slot.labels[labs[s]]].k;
  }
  return k;
}

namespace {

CircleSlot make_slot(const Circle& circle, bool marked, bool reduced, const RuleTable& table) {
  CircleSlot s;
  s.essential = circle.essential;
  s.marked = marked;
  const CircleModule& m = circle.essential ? table.essential_mod : table.trivial_mod;
  s.inv.fill(-1);
  for (int g = 0; g < m.rank(); ++g) {
    if (reduced && marked && m.gens[g].reduced_kill) continue;
    s.inv[g] = static_cast<int8_t>(s.nlabels);
    s.labels[s.nlabels++] = static_cast<uint8_t>(g);
  }
  if (s.nlabels == 0) throw Error("reduced module has rank 0");
  return s;
}

}  // namespace

GradedComplex assemble(const ResolutionCube& cube, const Diagram& d,
                       std::shared_ptr<const RuleTable> table, const AssembleOptions& opt) {
  if (!table) throw Error("assemble: null rule table");
  if (table->class1 != (cube.cls == 1))
    throw Error("rule table '" + table->name + "' does not match a class-" +
                std::to_string(cube.cls) + " cube");
  if (opt.reduced && d.mark.kind == MarkKind::None)
    throw Error("reduced assembly requires a marked point");

  GradedComplex c;
  c.n = cube.n;
  c.dir = opt.dir;
  c.copies = table->extra_copies;
  c.reduced = opt.reduced;
  c.table = table;
  c.oriented = d.oriented() && !d.arcs.empty();
  if (c.oriented) {
    auto [np, nm] = crossing_signs(d);
    c.n_plus = np;
    c.n_minus = nm;
  }

  const int n = cube.n;
  const size_t nv = size_t{1} << n;
  c.levels.assign(n + 1, {});

  // Shapes, vertices ascending within each level.
  std::vector<int> shape_of_vertex(nv, -1);
  for (size_t v = 0; v < nv; ++v) {
    const Resolution& r = cube.resolutions[v];
    int marked = opt.reduced ? marked_circle(r, d) : -1;
    VertexShape sh;
    sh.vertex = static_cast<Vertex>(v);
    sh.slots.reserve(r.circles.size());
    sh.strides.reserve(r.circles.size());
    uint64_t stride = 1;
    for (size_t ci = 0; ci < r.circles.size(); ++ci) {
      CircleSlot slot =
          make_slot(r.circles[ci], static_cast<int>(ci) == marked, opt.reduced, *table);
      sh.slots.push_back(slot);
      sh.strides.push_back(stride);
      stride *= slot.nlabels;
    }
    sh.count = stride;
    Level& lvl = c.levels[std::popcount(static_cast<Vertex>(v))];
    sh.first_gen = lvl.dim;
    lvl.dim += sh.count;
    if (lvl.dim > std::numeric_limits<uint32_t>::max())
      throw Error("chain group exceeds the supported dimension");
    shape_of_vertex[v] = static_cast<int>(lvl.shapes.size());
    lvl.shapes.push_back(std::move(sh));
  }

  // Edge maps.  Matrix index p = ||from||: Forward maps level p -> p+1,
  // Reversed maps level p+1 -> p along the same edge.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> entries(std::max(n, 0));
  std::vector<std::vector<const CubeEdge*>> edges_by_src(nv);
  for (const auto& e : cube.edges) {
    Vertex src = (opt.dir == Direction::Forward) ? e.from : e.to;
    edges_by_src[src].push_back(&e);
  }

  const bool forward = opt.dir == Direction::Forward;
  std::vector<uint8_t> labs, tlabs;
  for (size_t v = 0; v < nv; ++v) {
    if (edges_by_src[v].empty()) continue;
    const Level& src_level = c.levels[std::popcount(static_cast<Vertex>(v))];
    const VertexShape& sh = src_level.shapes[shape_of_vertex[v]];
    labs.assign(sh.slots.size(), 0);
    for (uint64_t gi = 0; gi < sh.count; ++gi) {
      uint32_t col = static_cast<uint32_t>(sh.first_gen + gi);
      for (const CubeEdge* pe : edges_by_src[v]) {
        const CubeEdge& e = *pe;
        if (e.kind == EdgeKind::OneToOne && table->onetoone_zero) continue;
        int p = std::popcount(e.from);
        Vertex tgt_vertex = forward ? e.to : e.from;
        const Level& tgt_level = c.levels[std::popcount(tgt_vertex)];
        const VertexShape& th = tgt_level.shapes[shape_of_vertex[tgt_vertex]];
        tlabs.assign(th.slots.size(), 0);

        // Untouched circles carry over through the correspondence.
        if (forward) {
          for (size_t i = 0; i < e.corr.size(); ++i)
            if (e.corr[i] >= 0) tlabs[e.corr[i]] = labs[i];
        } else {
          for (size_t i = 0; i < e.corr.size(); ++i)
            if (e.corr[i] >= 0) tlabs[i] = labs[e.corr[i]];
        }

        // The participating circles get the rule image.  The map shape in the
        // differential's direction: a Merge edge applies the merge rule
        // forward and the split rule reversed, and vice versa for Split.
        bool do_merge = (e.kind == EdgeKind::Merge) == forward && e.kind != EdgeKind::OneToOne;
        if (e.kind == EdgeKind::OneToOne) do_merge = false;

        auto emit = [&](uint64_t tgt_local) {
          entries[p].push_back({col, static_cast<uint32_t>(th.first_gen + tgt_local)});
        };

        if (e.kind == EdgeKind::OneToOne) {
          continue;  // zero map in every implemented theory
        } else if (do_merge) {
          // inputs: two circles at the source, output circle at the target
          int ca = forward ? e.u_c[0] : e.v_c[0];
          int cb = forward ? e.u_c[1] : e.v_c[1];
          int co = forward ? e.v_c[0] : e.u_c[0];
          const CircleSlot& sa = sh.slots[ca];
          const CircleSlot& sb = sh.slots[cb];
          const CircleSlot& so = th.slots[co];
          int ga = sa.labels[labs[ca]];
          int gb = sb.labels[labs[cb]];
          Mask mask;
          if (sa.essential && sb.essential)
            throw Error("merge of two essential circles");
          else if (sa.essential)
            mask = table->m_et[ga][gb];
          else if (sb.essential)
            mask = table->m_et[gb][ga];
          else
            mask = table->m_tt[ga][gb];
          for (int g = 0; g < 4; ++g) {
            if (!(mask & (1u << g))) continue;
            if (so.inv[g] < 0) continue;  // killed in the quotient
            tlabs[co] = static_cast<uint8_t>(so.inv[g]);
            emit(encode_labels(th, tlabs.data()));
          }
        } else {
          // split: one circle at the source, two at the target
          int ci = forward ? e.u_c[0] : e.v_c[0];
          int ca = forward ? e.v_c[0] : e.u_c[0];
          int cb = forward ? e.v_c[1] : e.u_c[1];
          const CircleSlot& si = sh.slots[ci];
          const CircleSlot& sa = th.slots[ca];
          const CircleSlot& sb = th.slots[cb];
          int g = si.labels[labs[ci]];
          if (si.essential) {
            // pair (essential part, trivial part)
            int ce = sa.essential ? ca : cb;
            int ct = sa.essential ? cb : ca;
            const CircleSlot& se = th.slots[ce];
            const CircleSlot& st = th.slots[ct];
            Mask mask = table->s_et[g];
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b) {
                if (!(mask & (1u << (a * 4 + b)))) continue;
                if (se.inv[a] < 0 || st.inv[b] < 0) continue;
                tlabs[ce] = static_cast<uint8_t>(se.inv[a]);
                tlabs[ct] = static_cast<uint8_t>(st.inv[b]);
                emit(encode_labels(th, tlabs.data()));
              }
          } else {
            Mask mask = table->s_tt[g];
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b) {
                if (!(mask & (1u << (a * 4 + b)))) continue;
                if (sa.inv[a] < 0 || sb.inv[b] < 0) continue;
                tlabs[ca] = static_cast<uint8_t>(sa.inv[a]);
                tlabs[cb] = static_cast<uint8_t>(sb.inv[b]);
                emit(encode_labels(th, tlabs.data()));
              }
          }
        }
      }
      // odometer increment
      for (size_t s = 0; s < sh.slots.size(); ++s) {
        if (++labs[s] < sh.slots[s].nlabels) break;
        labs[s] = 0;
      }
    }
  }

  c.diffs.resize(std::max(n, 0));
  for (int p = 0; p < n; ++p) {
    uint64_t src_dim = forward ? c.levels[p].dim : c.levels[p + 1].dim;
    uint64_t dst_dim = forward ? c.levels[p + 1].dim : c.levels[p].dim;
    c.diffs[p] = SparseF2::from_entries(dst_dim, src_dim, entries[p]);
    entries[p].clear();
    entries[p].shrink_to_fit();
  }
  return c;
}

bool d_squared_zero(const GradedComplex& c, std::string* detail) {
  const int n = c.n;
  for (int k = 0; k + 1 < n; ++k) {
    // Composition order: forward B∘A with A = diffs[k], B = diffs[k+1];
    // reversed A = diffs[k+1], B = diffs[k].
    const SparseF2& A = (c.dir == Direction::Forward) ? c.diffs[k] : c.diffs[k + 1];
    const SparseF2& B = (c.dir == Direction::Forward) ? c.diffs[k + 1] : c.diffs[k];
    std::vector<uint8_t> parity(B.rows, 0);
    std::vector<uint32_t> touched;
    for (uint64_t col = 0; col < A.cols; ++col) {
      touched.clear();
      for (const uint32_t* r = A.col_begin(col); r != A.col_end(col); ++r)
        for (const uint32_t* r2 = B.col_begin(*r); r2 != B.col_end(*r); ++r2) {
          parity[*r2] ^= 1;
          touched.push_back(*r2);
        }
      for (uint32_t t : touched) {
        if (parity[t]) {
          if (detail)
            *detail = "d^2 != 0 at levels " + std::to_string(k) + ".." + std::to_string(k + 2) +
                      ", source generator " + std::to_string(col);
          return false;
        }
      }
      for (uint32_t t : touched) parity[t] = 0;
    }
  }
  return true;
}

RankProfile homology_ranks(const GradedComplex& c, RankStrategy strategy) {
  std::string detail;
  if (!d_squared_zero(c, &detail)) throw Error("homology of a non-complex: " + detail);

  auto rank_of = [&](const SparseF2& m) -> uint64_t {
    switch (strategy) {
      case RankStrategy::Dense: return rank_dense(m);
      case RankStrategy::Bitpacked: return rank_bitpacked(m);
      case RankStrategy::Sparse: return rank_sparse(m);
      default: return rank_f2(m);
    }
  };

  const int n = c.n;
  std::vector<uint64_t> r(std::max(n, 0), 0);
  for (int p = 0; p < n; ++p) r[p] = rank_of(c.diffs[p]);

  RankProfile out;
  out.oriented = c.oriented;
  out.n_minus = c.n_minus;
  out.by_level.assign(n + 1, 0);
  for (int p = 0; p <= n; ++p) {
    long long h = static_cast<long long>(c.levels[p].dim);
    if (p < n) h -= static_cast<long long>(r[p]);
    if (p > 0) h -= static_cast<long long>(r[p - 1]);
    if (h < 0) throw Error("negative homology rank (rank computation bug)");
    out.by_level[p] = h * c.copies;
    out.total += out.by_level[p];
  }
  return out;
}

}  // namespace rp3kh

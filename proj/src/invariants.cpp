#include "rp3kh/invariants.hpp"

#include <bit>
#include <functional>
#include <future>

namespace rp3kh {

namespace {

CubeOptions cube_opts(const ComputeOptions& opt) {
  CubeOptions c;
  c.max_crossings = opt.max_crossings;
  c.threads = opt.threads;
  return c;
}

GradedComplex kh_complex(const Diagram& d, bool reduced, const ComputeOptions& opt) {
  ResolutionCube cube = build_cube(d, cube_opts(opt));
  auto table = builtin(cube.cls == 1 ? "KH-CLASS1" : "KH0");
  AssembleOptions a;
  a.reduced = reduced;
  return assemble(cube, d, table, a);
}

}  // namespace

RankProfile kh(const Diagram& d, bool reduced, const ComputeOptions& opt) {
  return homology_ranks(kh_complex(d, reduced, opt), opt.strategy);
}

RankProfile kh1(const Diagram& d, bool reduced, const ComputeOptions& opt) {
  ResolutionCube cube = build_cube(d, cube_opts(opt));
  if (cube.cls != 1)
    throw Error("kh1 is defined here for class-1 diagrams only (use kh for class 0)");
  AssembleOptions a;
  a.reduced = reduced;
  return homology_ranks(assemble(cube, d, builtin("KH1-CLASS1"), a), opt.strategy);
}

GradedComplex instanton_e1(const Diagram& d, bool reduced, const ComputeOptions& opt) {
  ResolutionCube cube = build_cube(d, cube_opts(opt));
  auto table = builtin(cube.cls == 1 ? "INST1" : "INST0");
  AssembleOptions a;
  a.reduced = reduced;
  a.dir = Direction::Reversed;
  return assemble(cube, d, table, a);
}

RankProfile e2_page(const Diagram& d, bool reduced, const ComputeOptions& opt) {
  return homology_ranks(instanton_e1(d, reduced, opt), opt.strategy);
}

bool inst1_matches_two_kh1_mirror(const Diagram& d, const ComputeOptions& opt,
                                  std::string* detail) {
  auto fail = [&](const std::string& msg) {
    if (detail) *detail = msg;
    return false;
  };
  ResolutionCube cube_d = build_cube(d, cube_opts(opt));
  if (cube_d.cls != 1) return fail("class-0 diagram");
  Diagram md = mirror(d);
  ResolutionCube cube_m = build_cube(md, cube_opts(opt));

  GradedComplex inst = assemble(cube_d, d, builtin("INST1"), {false, Direction::Reversed});
  GradedComplex khm = assemble(cube_m, md, builtin("KH1-CLASS1"), {false, Direction::Forward});

  const int n = cube_d.n;
  const Vertex mask = (n == 32) ? ~Vertex{0} : ((Vertex{1} << n) - 1);

  // Mirroring swaps the smoothings, so resolution v of d equals resolution
  // v-bar of mirror(d) circle by circle.
  for (Vertex v = 0; v < (Vertex{1} << n); ++v)
    if (!(cube_d.at(v).circles == cube_m.at(~v & mask).circles))
      return fail("resolutions of d and mirror(d) do not correspond");

  // Generator map: (v, labels, essential label g) -> block g/2, mirror
  // generator at v-bar with essential label g%2.  Returns (block, index).
  auto map_gen = [&](int level, uint64_t global, int* block) -> uint64_t {
    const Level& L = inst.levels[level];
    int si = L.locate(global);
    const VertexShape& sh = L.shapes[si];
    uint8_t labs[32];
    decode_labels(sh, global - sh.first_gen, labs);
    const Level& Lm = khm.levels[n - level];
    int mi = Lm.shape_index(~sh.vertex & mask);
    const VertexShape& mh = Lm.shapes[mi];
    *block = -1;
    for (size_t s = 0; s < sh.slots.size(); ++s) {
      if (sh.slots[s].essential) {
        *block = labs[s] >> 1;
        labs[s] = labs[s] & 1;
      }
    }
    return mh.first_gen + encode_labels(mh, labs);
  };

  for (int p = 0; p < n; ++p) {
    // inst.diffs[p]: d-level p+1 -> p.  Mirror forward matrix with the same
    // endpoints is khm.diffs[n-p-1]: m-level n-p-1 -> n-p.
    const SparseF2& A = inst.diffs[p];
    const SparseF2& B = khm.diffs[n - p - 1];
    if (A.cols != 2 * B.cols || A.rows != 2 * B.rows)
      return fail("chain ranks at level " + std::to_string(p) + " are not doubled");
    for (uint64_t col = 0; col < A.cols; ++col) {
      int src_block = -1;
      uint64_t mcol = map_gen(p + 1, col, &src_block);
      std::vector<uint32_t> mapped;
      for (const uint32_t* r = A.col_begin(col); r != A.col_end(col); ++r) {
        int row_block = -1;
        uint64_t mrow = map_gen(p, *r, &row_block);
        if (row_block != src_block)
          return fail("differential crosses the W blocks at level " + std::to_string(p));
        mapped.push_back(static_cast<uint32_t>(mrow));
      }
      std::sort(mapped.begin(), mapped.end());
      std::vector<uint32_t> expect(B.col_begin(mcol), B.col_end(mcol));
      if (mapped != expect)
        return fail("matrix entries differ from the mirror KH1 complex at level " +
                    std::to_string(p) + ", column " + std::to_string(col));
    }
  }
  return true;
}

namespace {

std::string mark_description(const Diagram& d, bool defaulted) {
  std::string s;
  if (d.mark.kind == MarkKind::Arc)
    s = "arc " + std::to_string(d.mark.value);
  else if (d.mark.kind == MarkKind::Loop)
    s = "loop " + std::to_string(d.mark.value);
  else
    return "none";
  if (defaulted) s += " (default)";
  return s;
}

}  // namespace

InvariantReport verify(const Diagram& d, const ComputeOptions& opt, const std::string& name) {
  InvariantReport rep;
  rep.name = name;
  rep.n = d.ncrossings();
  rep.cls = link_class(d);
  rep.oriented = d.oriented() && !d.arcs.empty();

  // Default mark for the reduced invariants when the diagram carries none.
  Diagram dm = d;
  bool defaulted = false;
  if (dm.mark.kind == MarkKind::None) {
    if (!dm.arcs.empty()) {
      dm.mark = {MarkKind::Arc, dm.arcs.front().id};
      defaulted = true;
    } else if (!dm.loops.empty()) {
      dm.mark = {MarkKind::Loop, 0};
      defaulted = true;
    }
  }
  rep.marked = mark_description(dm, defaulted);

  try {
    build_cube(d, cube_opts(opt));
    rep.checks.push_back({"lemma22_census", true, "essential-circle census consistent"});
  } catch (const Error& e) {
    rep.checks.push_back({"lemma22_census", false, e.what()});
    return rep;
  }

  const bool reduced_possible = dm.mark.kind != MarkKind::None;
  Diagram mir = mirror(dm);

  std::string d2_fail;
  auto guarded = [&](auto&& fn) -> RankProfile {
    try {
      return fn();
    } catch (const Error& e) {
      if (d2_fail.empty()) d2_fail = e.what();
      return {};
    }
  };

  // The builds are independent; fan out when allowed.
  auto run_all = [&]() {
    std::vector<std::function<void()>> jobs;
    jobs.push_back([&] { rep.kh = guarded([&] { return kh(dm, false, opt); }); });
    if (reduced_possible)
      jobs.push_back([&] { rep.khr = guarded([&] { return kh(dm, true, opt); }); });
    jobs.push_back([&] {
      GradedComplex e1 = instanton_e1(dm, false, opt);
      rep.e1_chain_rank = e1.chain_rank();
      rep.e2 = guarded([&] { return homology_ranks(e1, opt.strategy); });
    });
    if (reduced_possible)
      jobs.push_back([&] {
        GradedComplex e1r = instanton_e1(dm, true, opt);
        rep.e1_chain_rank_reduced = e1r.chain_rank();
        rep.e2_reduced = guarded([&] { return homology_ranks(e1r, opt.strategy); });
      });
    if (rep.cls == 1) jobs.push_back([&] { rep.kh1 = guarded([&] { return kh1(dm, false, opt); }); });
    if (opt.threads > 1) {
      std::vector<std::future<void>> fs;
      for (auto& j : jobs) fs.push_back(std::async(std::launch::async, j));
      for (auto& f : fs) f.get();
    } else {
      for (auto& j : jobs) j();
    }
  };
  run_all();

  RankProfile kh_mirror = guarded([&] { return kh(mir, false, opt); });
  RankProfile kh1_mirror;
  if (rep.cls == 1) kh1_mirror = guarded([&] { return kh1(mir, false, opt); });

  rep.checks.push_back({"d_squared_zero", d2_fail.empty(), d2_fail});

  const int n = rep.n;
  if (rep.cls == 0) {
    bool ok = rep.e2.total == 2 * kh_mirror.total;
    std::string detail = "e2 total " + std::to_string(rep.e2.total) + " vs 2*kh(mirror) " +
                         std::to_string(2 * kh_mirror.total);
    for (int p = 0; p <= n && ok; ++p)
      if (rep.e2.at_level(p) != 2 * kh_mirror.at_level(n - p)) {
        ok = false;
        detail = "gradingwise mismatch at level " + std::to_string(p);
      }
    rep.checks.push_back({"e2_two_copies_kh_mirror", ok, detail});
  } else {
    bool ok = rep.e2.total == 2 * kh1_mirror.total;
    std::string detail = "e2 total " + std::to_string(rep.e2.total) + " vs 2*kh1(mirror) " +
                         std::to_string(2 * kh1_mirror.total);
    for (int p = 0; p <= n && ok; ++p)
      if (rep.e2.at_level(p) != 2 * kh1_mirror.at_level(n - p)) {
        ok = false;
        detail = "gradingwise mismatch at level " + std::to_string(p);
      }
    rep.checks.push_back({"e2_two_copies_kh1_mirror", ok, detail});

    std::string block_detail = "INST1 complex equals two renamed copies of the mirror KH1 complex";
    bool blocks = false;
    try {
      blocks = inst1_matches_two_kh1_mirror(dm, opt, &block_detail);
    } catch (const Error& e) {
      block_detail = e.what();
    }
    rep.checks.push_back({"inst1_block_decomposition", blocks, block_detail});
  }

  rep.checks.push_back({"rank_ineq_unreduced", 2 * rep.kh.total >= rep.e2.total,
                        "2*kh " + std::to_string(2 * rep.kh.total) + " >= e2 " +
                            std::to_string(rep.e2.total)});
  if (reduced_possible)
    rep.checks.push_back({"rank_ineq_reduced", 2 * rep.khr.total >= rep.e2_reduced.total,
                          "2*khr " + std::to_string(2 * rep.khr.total) + " >= reduced e2 " +
                              std::to_string(rep.e2_reduced.total)});
  if (rep.cls == 1 && rep.kh1)
    rep.checks.push_back({"kh_ge_kh1", rep.kh.total >= rep.kh1->total,
                          "kh " + std::to_string(rep.kh.total) + " >= kh1 " +
                              std::to_string(rep.kh1->total)});
  return rep;
}

}  // namespace rp3kh

#include "rp3kh/json_io.hpp"

#include <bit>
#include <sstream>

namespace rp3kh {

namespace {

std::string vertex_bits(Vertex v, int n) {
  std::string s(static_cast<size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if (v >> i & 1u) s[i] = '1';
  return s;
}

}  // namespace

Json profile_json(const RankProfile& p) {
  Json j;
  j["total"] = p.total;
  j["gradings_absolute"] = p.oriented;
  Json by;
  for (const auto& [i, r] : p.by_i()) by[std::to_string(i)] = r;
  j["by_i"] = std::move(by);
  return j;
}

Json report_json(const InvariantReport& r) {
  Json j;
  j["diagram"] = r.name;
  j["crossings"] = r.n;
  j["class"] = r.cls;
  j["oriented"] = r.oriented;
  j["marked"] = r.marked;
  Json profiles;
  profiles["kh"] = profile_json(r.kh);
  profiles["khr"] = profile_json(r.khr);
  if (r.kh1) profiles["kh1"] = profile_json(*r.kh1);
  profiles["e2"] = profile_json(r.e2);
  profiles["e2_reduced"] = profile_json(r.e2_reduced);
  j["profiles"] = std::move(profiles);
  j["e1_chain_rank"] = r.e1_chain_rank;
  j["e1_chain_rank_reduced"] = r.e1_chain_rank_reduced;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["all_pass"] = r.all_pass();
  return j;
}

Json resolution_json(const ResolutionCube& cube, Vertex v) {
  const Resolution& r = cube.at(v);
  Json j;
  j["vertex"] = vertex_bits(v, cube.n);
  Json circles = Json::array();
  for (const auto& c : r.circles) {
    Json cj;
    cj["essential"] = c.essential;
    if (c.is_loop)
      cj["loop"] = c.key;
    else
      cj["arcs"] = c.arcs;
    circles.push_back(std::move(cj));
  }
  j["circles"] = std::move(circles);
  return j;
}

Json cube_json(const ResolutionCube& cube) {
  Json j;
  j["crossings"] = cube.n;
  j["class"] = cube.cls;
  EdgeCensus census = edge_kind_census(cube);
  Json cj;
  cj["merge"] = census.merge;
  cj["split"] = census.split;
  cj["onetoone"] = census.one_to_one;
  cj["essential_involved"] = census.essential_involved;
  j["census"] = std::move(cj);
  Json vertices = Json::array();
  for (Vertex v = 0; v < (Vertex{1} << cube.n); ++v)
    vertices.push_back(resolution_json(cube, v));
  j["vertices"] = std::move(vertices);
  Json edges = Json::array();
  for (const auto& e : cube.edges) {
    Json ej;
    ej["from"] = vertex_bits(e.from, cube.n);
    ej["to"] = vertex_bits(e.to, cube.n);
    ej["kind"] = e.kind == EdgeKind::Merge    ? "merge"
                 : e.kind == EdgeKind::Split ? "split"
                                             : "onetoone";
    ej["essential_involved"] = e.essential_involved;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  return j;
}

Json complex_json(const GradedComplex& c) {
  Json j;
  j["crossings"] = c.n;
  j["direction"] = c.dir == Direction::Forward ? "forward" : "reversed";
  j["copies"] = c.copies;
  j["reduced"] = c.reduced;
  j["theory"] = c.table->name;
  Json levels = Json::array();
  std::vector<uint8_t> labs;
  for (int p = 0; p <= c.n; ++p) {
    const Level& L = c.levels[p];
    Json lj;
    lj["level"] = p;
    lj["i"] = c.i_of_level(p);
    lj["dim"] = L.dim * static_cast<uint64_t>(c.copies);
    Json basis = Json::array();
    for (const auto& sh : L.shapes) {
      labs.assign(sh.slots.size(), 0);
      for (uint64_t g = 0; g < sh.count; ++g) {
        Json gj;
        gj["vertex"] = vertex_bits(sh.vertex, c.n);
        Json names = Json::array();
        for (size_t s = 0; s < sh.slots.size(); ++s) {
          const CircleModule& m =
              sh.slots[s].essential ? c.table->essential_mod : c.table->trivial_mod;
          names.push_back(m.gens[sh.slots[s].labels[labs[s]]].label);
        }
        gj["labels"] = std::move(names);
        gj["j"] = gen_j(c, sh, labs.data());
        gj["k"] = gen_k(c, sh, labs.data());
        basis.push_back(std::move(gj));
        for (size_t s = 0; s < sh.slots.size(); ++s) {
          if (++labs[s] < sh.slots[s].nlabels) break;
          labs[s] = 0;
        }
      }
    }
    lj["basis"] = std::move(basis);
    levels.push_back(std::move(lj));
  }
  j["levels"] = std::move(levels);
  Json mats = Json::array();
  for (int p = 0; p < c.n; ++p) {
    Json mj;
    mj["matrix"] = p;
    mj["rows"] = c.diffs[p].rows;
    mj["cols"] = c.diffs[p].cols;
    Json triplets = Json::array();
    for (uint64_t col = 0; col < c.diffs[p].cols; ++col)
      for (const uint32_t* r = c.diffs[p].col_begin(col); r != c.diffs[p].col_end(col); ++r)
        triplets.push_back(Json::array({col, *r, 1}));
    mj["entries"] = std::move(triplets);
    mats.push_back(std::move(mj));
  }
  j["differentials"] = std::move(mats);
  return j;
}

std::string report_human(const InvariantReport& r) {
  std::ostringstream out;
  out << "diagram " << r.name << "\n";
  out << "class " << r.cls << "\n";
  out << "marked " << r.marked << "\n";
  auto profile_line = [&](const char* name, const RankProfile& p) {
    out << name << " total " << p.total;
    for (const auto& [i, rk] : p.by_i()) out << "  i=" << i << ":" << rk;
    out << "\n";
  };
  profile_line("kh", r.kh);
  profile_line("khr", r.khr);
  if (r.kh1) profile_line("kh1", *r.kh1);
  profile_line("e2", r.e2);
  profile_line("e2_reduced", r.e2_reduced);
  out << "e1_chain_rank " << r.e1_chain_rank << "\n";
  out << "e1_chain_rank_reduced " << r.e1_chain_rank_reduced << "\n";
  for (const auto& c : r.checks)
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << (c.detail.empty() ? "" : ": " + c.detail)
        << "\n";
  return out.str();
}

}  // namespace rp3kh

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rp3kh/cli.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = rp3kh::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus_file(const std::string& name) {
  return testutil::source_dir() + "/corpus/" + name + ".rpd";
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("rp3kh_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("classify") {
  auto r = run({"classify", corpus_file("unknot_proj")});
  CHECK(r.code == 0);
  CHECK(r.out == "class 1\n");
  auto r0 = run({"classify", corpus_file("trefoil")});
  CHECK(r0.out == "class 0\n");
}

TEST_CASE("kh reduced prints total 1 for the projective unknot") {
  auto r = run({"kh", corpus_file("unknot_proj"), "--reduced"});
  CHECK(r.code == 0);
  CHECK(r.out.find("total 1") != std::string::npos);
}

TEST_CASE("kh variant kh1") {
  auto r = run({"kh", corpus_file("unknot_proj_kink"), "--variant", "kh1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("kh1 total 2") != std::string::npos);
  // kh1 rejects class-0 input
  auto bad = run({"kh", corpus_file("trefoil"), "--variant", "kh1"});
  CHECK(bad.code == 2);
}

TEST_CASE("verify exits 0 on success") {
  auto r = run({"verify", corpus_file("trefoil")});
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS] e2_two_copies_kh_mirror") != std::string::npos);
}

TEST_CASE("verify exits 1 on a failing check") {
  TempDir tmp;
  std::ofstream(tmp.path / "bad.rpd") << "L w=1\nL w=1\n";
  // census violations surface as a failing lemma22 check, not an input error
  auto r = run({"verify", (tmp.path / "bad.rpd").string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("[FAIL] lemma22_census") != std::string::npos);
}

TEST_CASE("input errors exit 2") {
  CHECK(run({"kh", "/nonexistent/file.rpd"}).code == 2);
  TempDir tmp;
  std::ofstream(tmp.path / "syntax.rpd") << "X 1 2\n";
  CHECK(run({"kh", (tmp.path / "syntax.rpd").string()}).code == 2);
  CHECK(run({"bogus-subcommand"}).code == 2);
}

TEST_CASE("cube census and single-vertex dumps") {
  auto census = run({"cube", corpus_file("one_crossing_class0")});
  CHECK(census.code == 0);
  CHECK(census.out.find("\"onetoone\": 1") != std::string::npos);
  auto vertex = run({"cube", corpus_file("one_crossing_class0"), "--vertex", "0"});
  CHECK(vertex.code == 0);
  CHECK(vertex.out.find("\"vertex\": \"0\"") != std::string::npos);
  auto bad = run({"cube", corpus_file("one_crossing_class0"), "--vertex", "01"});
  CHECK(bad.code == 2);
}

TEST_CASE("instanton chain ranks and e2") {
  auto e1 = run({"instanton", corpus_file("unknot_proj")});
  CHECK(e1.code == 0);
  CHECK(e1.out.find("chain rank 4") != std::string::npos);
  auto e2 = run({"instanton", corpus_file("unknot"), "--e2"});
  CHECK(e2.code == 0);
  CHECK(e2.out.find("e2 total 4") != std::string::npos);
}

TEST_CASE("dump-complex emits bases and triplets") {
  auto r = run({"kh", corpus_file("unknot_proj_kink"), "--dump-complex"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"differentials\"") != std::string::npos);
  CHECK(r.out.find("\"labels\"") != std::string::npos);
}

TEST_CASE("rules check") {
  auto ok = run({"rules", "check", testutil::source_dir() + "/rules/kh0.rules"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("OK") != std::string::npos);

  TempDir tmp;
  std::ofstream(tmp.path / "broken.rules") << "theory broken\n"
                                              "module V trivial : 1 X\n"
                                              "merge VxV->V: 1*1 -> 1\n"
                                              "merge VxV->V: 1*X -> X\n"
                                              "merge VxV->V: X*1 -> X\n"
                                              "split V->VxV: 1 -> 1*X + X*1\n"
                                              "split V->VxV: X -> 0\n";
  CHECK(run({"rules", "check", (tmp.path / "broken.rules").string()}).code == 1);
  std::ofstream(tmp.path / "garbage.rules") << "wibble\n";
  CHECK(run({"rules", "check", (tmp.path / "garbage.rules").string()}).code == 2);
}

TEST_CASE("output is byte-stable across runs") {
  auto a = run({"verify", corpus_file("proj_braid_knot"), "--json"});
  auto b = run({"verify", corpus_file("proj_braid_knot"), "--json"});
  CHECK(a.out == b.out);
  auto c = run({"--threads", "2", "verify", corpus_file("proj_braid_knot"), "--json"});
  CHECK(a.out == c.out);
}

TEST_CASE("corpus run on an empty directory") {
  TempDir tmp;
  auto r = run({"corpus", tmp.path.string()});
  CHECK(r.code == 0);
}

TEST_CASE("corpus negative control: wrong expectation fails") {
  TempDir tmp;
  fs::copy_file(corpus_file("unknot_proj"), tmp.path / "unknot_proj.rpd");
  std::ofstream(tmp.path / "expectations.json")
      << R"({"entries":[{"name":"unknot_proj","file":"unknot_proj.rpd","expect":[)"
      << R"({"metric":"khr_total","value":2,"tag":"TRIVIAL"}]}]})";
  auto r = run({"corpus", tmp.path.string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("khr_total") != std::string::npos);
}

TEST_CASE("corpus observe-only expectations do not fail the run") {
  TempDir tmp;
  fs::copy_file(corpus_file("unknot_proj"), tmp.path / "unknot_proj.rpd");
  std::ofstream(tmp.path / "expectations.json")
      << R"({"entries":[{"name":"unknot_proj","file":"unknot_proj.rpd","expect":[)"
      << R"({"metric":"khr_total","value":2,"tag":"DERIVED","observe":true}]}]})";
  auto r = run({"corpus", tmp.path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("observations") != std::string::npos);
}

TEST_CASE("corpus csv format") {
  TempDir tmp;
  fs::copy_file(corpus_file("unknot"), tmp.path / "unknot.rpd");
  auto r = run({"corpus", tmp.path.string(), "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("name,class,crossings,kh_total") != std::string::npos);
  CHECK(r.out.find("unknot,0,0,2,1,") != std::string::npos);
}

TEST_SUITE_END();

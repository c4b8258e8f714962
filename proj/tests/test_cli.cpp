#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ell4/io.hpp"
#include "ell4/pseudomoments.hpp"
#include "ell4/rng.hpp"

using namespace ell4;
namespace fs = std::filesystem;

#ifndef ELL4_CLI_PATH
#define ELL4_CLI_PATH "./elliptope4"
#endif

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ell4_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(ELL4_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("frame and moments pipelines produce loadable artifacts") {
  TempDir tmp;
  std::string frame = tmp.file("simplex5.json");
  REQUIRE(run_cli("frame simplex --n 5 -o " + frame) == 0);
  VectorSystem sys = read_vector_system(frame);
  CHECK(sys.N == 5);
  CHECK(sys.r == 4);
  REQUIRE(sys.gram_exact.has_value());
  CHECK((*sys.gram_exact)(0, 1) == rat(-1, 4));

  std::string mom = tmp.file("Y.csv");
  REQUIRE(run_cli("moments etf --frame " + frame + " -o " + mom) == 0);
  Degree4Moments m = read_degree4(mom);
  CHECK(m.N == 5);
  REQUIRE(m.exact.has_value());
  CHECK((*m.exact)(0, 0) == 1);

  CHECK(run_cli("verify degree4 " + mom) == 0);
}

TEST_CASE("laurent subcommand writes the expected exact values") {
  TempDir tmp;
  std::string out = tmp.file("laurent.csv");
  REQUIRE(run_cli("moments laurent --n 5 --d 4 -o " + out) == 0);
  RationalMatrix Z = read_rational_csv(out);
  CHECK(Z.rows == 25);
  TruncatedMoments want = laurent_moments(5, 4);
  CHECK(Z == want.Z);
  // n even fails
  CHECK(run_cli("moments laurent --n 4 --d 4 -o " + tmp.file("x.csv")) == 1);
}

TEST_CASE("witness pipelines and verification exit codes") {
  TempDir tmp;
  std::string frame = tmp.file("simplex5.json");
  REQUIRE(run_cli("frame simplex --n 5 -o " + frame) == 0);
  std::string wit = tmp.file("M.csv");
  REQUIRE(run_cli("witness etf --frame " + frame + " -o " + wit) == 0);
  CHECK(run_cli("verify witness " + wit) == 0);

  std::string mom = tmp.file("Y.csv");
  REQUIRE(run_cli("moments etf --frame " + frame + " -o " + mom) == 0);
  std::string wit2 = tmp.file("M2.csv");
  REQUIRE(run_cli("witness from-moments --moments " + mom + " --frame " + frame + " -o " + wit2) ==
          0);
  BlockWitness w = read_witness(wit2);
  CHECK(w.layout.N == 5);
  CHECK(w.layout.r == 4);

  // corrupt a diagonal block entry: verification reports the violation
  BlockWitness bad = w;
  bad.M(0, 0) = 2.0;
  std::string badpath = tmp.file("bad.csv");
  write_witness(bad, badpath);
  CHECK(run_cli("verify witness " + badpath) == 2);
}

TEST_CASE("membership exit codes: Member 0, NonMember 2") {
  TempDir tmp;
  std::string s3 = tmp.file("simplex3.json");
  REQUIRE(run_cli("frame simplex --n 3 -o " + s3) == 0);
  CHECK(run_cli("check membership --set e4 --frame " + s3) == 2);
  CHECK(run_cli("check membership --set e2 --frame " + s3) == 0);

  std::string s5 = tmp.file("simplex5.json");
  REQUIRE(run_cli("frame simplex --n 5 -o " + s5) == 0);
  CHECK(run_cli("check membership --set e4 --frame " + s5) == 0);
  CHECK(run_cli("check membership --set cut --frame " + s5) == 2);

  CHECK(run_cli("check membership --set nosuch --frame " + s5) == 1);
  CHECK(run_cli("totally-unknown-subcommand") != 0);
}

TEST_CASE("matrix CSV round trips") {
  TempDir tmp;
  Xorshift64Star rng(3);
  DenseMatrix A(6, 6);
  for (auto& x : A.a) x = rng.uniform_pm1() * 1e3;
  A(0, 0) = 0.1;  // a value without an exact binary representation
  std::string p = tmp.file("a.csv");
  write_matrix_csv(A, p);
  DenseMatrix B = read_dense_csv(p);
  CHECK(A == B);  // bit-identical via shortest round-trip decimals

  RationalMatrix Q(3, 3);
  Q(0, 0) = rat(1, 3);
  Q(1, 2) = rat(-22, 7);
  std::string q = tmp.file("q.csv");
  write_matrix_csv(Q, q);
  CHECK(read_rational_csv(q) == Q);
  CHECK(slurp(q).find("1/3") != std::string::npos);

  CHECK_THROWS_AS(write_matrix_csv(A, ""), Error);
}

TEST_CASE("etf287 frame export carries exact thirds") {
  TempDir tmp;
  std::string p = tmp.file("etf.json");
  REQUIRE(run_cli("frame etf287 -o " + p) == 0);
  std::string body = slurp(p);
  CHECK(body.find("1/3") != std::string::npos);
  VectorSystem sys = read_vector_system(p);
  CHECK(sys.N == 28);
  CHECK(sys.r == 7);
}

TEST_CASE("cut decomposition JSON round trip") {
  TempDir tmp;
  CutDecomposition dec;
  dec.weights = {0.25, 0.75};
  dec.signs = {{1, -1, 1}, {1, 1, -1}};
  std::string p = tmp.file("cuts.json");
  write_cuts(dec, p);
  CutDecomposition back = read_cuts(p);
  CHECK(back.weights == dec.weights);
  CHECK(back.signs == dec.signs);
}

TEST_CASE("graph JSON round trip uses 1-based sorted edges") {
  TempDir tmp;
  Graph g;
  g.n = 4;
  g.edges = {{0, 1}, {1, 3}};
  std::string p = tmp.file("g.json");
  write_graph(g, p);
  Graph back = read_graph(p);
  CHECK(back.n == 4);
  CHECK(back.edges == g.edges);
  std::string body = slurp(p);
  bool has_edge = body.find("[2,4]") != std::string::npos ||
                  body.find("[ 2, 4 ]") != std::string::npos ||
                  body.find("2,\n   4") != std::string::npos;
  CHECK(has_edge);
}

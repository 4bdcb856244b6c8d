#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "semiprov/cli.hpp"

namespace fs = std::filesystem;
using semiprov::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("semiprov_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

}  // namespace

TEST_CASE("eval examples") {
  TempDir dir;
  const auto r = dir.write("r.csv", "t,@k\n1,3\n");
  auto res = cli({"eval", "R - R", "--instance", "nat", "--rel", "R=" + r});
  CHECK(res.code == 0);
  CHECK(res.out.empty());

  const auto rs = dir.write("rs.csv", "t,@k\n1,S\n");
  const auto st = dir.write("st.csv", "t,@k\n1,T\n");
  res = cli({"eval", "R - S", "--instance", "security", "--rel", "R=" + rs, "--rel", "S=" + st});
  CHECK(res.code == 0);
  CHECK(res.out == "(t=1) : S\n");

  const auto z2 = dir.write("z2.csv", "t,@k\n1,2\n");
  const auto z5 = dir.write("z5.csv", "t,@k\n1,5\n");
  res = cli({"eval", "R - S", "--instance", "int", "--diff", "ring", "--rel", "R=" + z2, "--rel", "S=" + z5});
  CHECK(res.code == 0);
  CHECK(res.out == "(t=1) : -3\n");

  res = cli({"eval", "R UNION S", "--instance", "int", "--format", "csv", "--rel", "R=" + z2, "--rel", "S=" + z5});
  CHECK(res.code == 0);
  CHECK(res.out == "t,@k\n1,7\n");

  const auto p = dir.write("p.csv", "a,@k\n1,x\n1,y\n");
  res = cli({"eval", "R JOIN R", "--instance", "natpoly", "--vars", "x,y", "--rel", "R=" + p});
  CHECK(res.code == 0);
  CHECK(res.out == "(a=1) : x^2 + 2*x*y + y^2\n");
}

TEST_CASE("eval diagnostics exit with 1") {
  TempDir dir;
  const auto r = dir.write("r.csv", "t,@k\n1,3\n");
  const auto s = dir.write("s.csv", "u,@k\n1,3\n");
  auto res = cli({"eval", "(R JOIN", "--instance", "nat", "--rel", "R=" + r});
  CHECK(res.code == 1);
  CHECK(res.err.find("1:8") != std::string::npos);
  res = cli({"eval", "R UNION S", "--instance", "nat", "--rel", "R=" + r, "--rel", "S=" + s});
  CHECK(res.code == 1);
  CHECK(res.err.find("R UNION S") != std::string::npos);
  res = cli({"eval", "R - R", "--instance", "nat", "--diff", "ring", "--rel", "R=" + r});
  CHECK(res.code == 1);
  res = cli({"eval", "R", "--instance", "nat", "--rel", "R=" + (dir.path / "missing.csv").string()});
  CHECK(res.code == 1);
  CHECK(res.err.find("not found") != std::string::npos);
  res = cli({"eval", "Q", "--instance", "nat", "--rel", "R=" + r});
  CHECK(res.code == 1);
  res = cli({"eval", "R", "--instance", "nope", "--rel", "R=" + r});
  CHECK(res.code == 1);
  const auto bad = dir.write("bad.csv", "t,@k\n1,S\n");
  res = cli({"eval", "R", "--instance", "nat", "--rel", "R=" + bad});
  CHECK(res.code == 1);
  CHECK(res.err.find("bad.csv:2") != std::string::npos);
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("check examples") {
  auto res = cli({"check", "--instance", "security", "--axiom", "A13"});
  CHECK(res.code == 0);
  CHECK(res.out.find("fails") != std::string::npos);
  CHECK(res.out.find("a=S b=T") != std::string::npos);
  CHECK(res.out.find("[expected: fails]") != std::string::npos);

  res = cli({"check", "--instance", "sprime", "--all-axioms"});
  CHECK(res.code == 0);
  std::istringstream lines(res.out);
  std::string line;
  int holds = 0;
  while (std::getline(lines, line))
    if (line.find("holds-exhaustive") != std::string::npos) ++holds;
  CHECK(holds == 13);

  res = cli({"check", "--instance", "nat", "--identity", "I11", "--diff", "cond", "--format", "records"});
  CHECK(res.code == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["verdict"] == "fails");
  CHECK(j["subject"] == "I11");
  CHECK(j["semantics"] == "cond");

  res = cli({"check", "--instance", "bool", "--galois"});
  CHECK(res.code == 0);
  CHECK(res.out.find("holds-exhaustive") != std::string::npos);

  res = cli({"check", "--instance", "nat", "--axiom", "A99"});
  CHECK(res.code == 1);
  res = cli({"check", "--instance", "security", "--axiom", "A11", "--diff", "ring"});
  CHECK(res.code == 0);
  CHECK(res.out.find("inapplicable") != std::string::npos);
}

TEST_CASE("check is deterministic under --seed") {
  auto a = cli({"check", "--instance", "natpoly", "--axiom", "A13", "--seed", "7", "--trials", "500",
                "--format", "records"});
  auto b = cli({"check", "--instance", "natpoly", "--axiom", "A13", "--seed", "7", "--trials", "500",
                "--format", "records", "--threads", "2"});
  CHECK(a.out == b.out);
}

TEST_CASE("table3 and enumerate") {
  auto res = cli({"table3", "--trials", "1000"});
  CHECK(res.code == 0);
  for (const char* name : {"bool", "security", "tropical", "natpoly", "trio", "why", "posbool"})
    CHECK(res.out.find(name) != std::string::npos);
  CHECK(res.out.find("classification:") != std::string::npos);

  res = cli({"enumerate", "2", "--dump"});
  CHECK(res.code == 0);
  CHECK(res.out.find("(B)") != std::string::npos);
  CHECK(res.out.find("  - |") != std::string::npos);
  res = cli({"enumerate", "3"});
  CHECK(res.code == 0);
  CHECK(res.out.find("commutative semirings (up to isomorphism): 6") != std::string::npos);
  CHECK(res.out.find("satisfying A13: 1") != std::string::npos);
  res = cli({"enumerate", "9"});
  CHECK(res.code == 1);
  CHECK(res.err.find("error") != std::string::npos);
}

TEST_CASE("embed-security prints the map") {
  auto res = cli({"embed-security"});
  CHECK(res.code == 0);
  CHECK(res.out.find("C -> {C,S,T}") != std::string::npos);
  CHECK(res.out.find("0s -> {}") != std::string::npos);
  CHECK(res.out.find("25/25") != std::string::npos);
}

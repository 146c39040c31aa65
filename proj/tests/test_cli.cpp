#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {
struct Run {
  int status;
  std::string out;
};

Run qdlab(const std::string& args) {
  std::string cmd = std::string(QDLAB_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}
}  // namespace

TEST_CASE("phi at zero") {
  Run r = qdlab("phi --theta-arg 1/3 --z 0,0");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"][0].get<double>() == doctest::Approx(std::cos(M_PI / 24)).epsilon(1e-12));
  CHECK(j["value"][1].get<double>() == doctest::Approx(-std::sin(M_PI / 24)).epsilon(1e-12));
}

TEST_CASE("inversion check") {
  Run r = qdlab("check inversion --N 3 --samples 100");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"].get<bool>());
  CHECK(j["max_residual"].get<double>() < 1e-9);
}

TEST_CASE("partition schema and output file") {
  std::string path = std::string(QDLAB_BIN) + ".fig8.json";
  REQUIRE(qdlab("census fig8_2tet --out " + path).status == 0);
  Run r = qdlab("partition --in " + path + " --grid 128");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["Z"].size() == 2);
  CHECK(j["abs"].get<double>() == doctest::Approx(1.05958614221).epsilon(1e-9));
  CHECK(j["grid"].get<int>() == 128);
  CHECK(j.contains("error_estimate"));
  CHECK(j["params"]["N"].get<int>() == 1);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(qdlab("phi --theta-arg 2/3").status == 1);
  CHECK(qdlab("phi --bogus 1").status == 1);
  CHECK(qdlab("check nonsense").status == 1);
  CHECK(qdlab("dtheta --N 0").status == 1);
  CHECK(qdlab("census trefoil").status == 1);
  CHECK(qdlab("partition --census fig8_2tet --grid 8 --tol 1e-12").status == 2);
  CHECK(qdlab("check inversion --N 2 --tol 1e-300").status == 3);
}

TEST_CASE("pachner round trip through the command line") {
  Run r = qdlab("pachner --census fig8_2tet --gluing 0");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["tets"].size() == 3);
}

TEST_CASE("repeated runs are byte identical") {
  for (const char* cmd : {"check groupoid --seed 4", "check descent --N 2 --seed 9 --threads 3", "partition --census fig8_2tet --grid 64 --threads 4",
                          "wgz --k 2 --grid 32 --seed 3"}) {
    CAPTURE(cmd);
    Run a = qdlab(cmd), b = qdlab(cmd);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("other subcommands") {
  CHECK(nlohmann::json::parse(qdlab("gamma --N 2").out)["value"][1].get<double>() == doctest::Approx(1.0));
  CHECK(qdlab("dtheta --N 3 --z 0.3,0 --n 1").status == 0);
  CHECK(qdlab("psi --N 2 --charges 1/2,1/5 --z 0.1,0").status == 0);
  CHECK(qdlab("kernel --N 2 --x 0.3 --n 1 --y -0.2").status == 0);
  CHECK(nlohmann::json::parse(qdlab("census").out)["names"].size() == 3);
}

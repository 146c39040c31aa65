#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "qdl/triangulation.hpp"

using namespace qdl;

namespace {
std::vector<double> sorted_sums(const ShapedTriangulation& X) {
  std::vector<double> s = X.edge_angle_sum;
  std::sort(s.begin(), s.end());
  return s;
}

ShapedTriangulation swap_tets(const ShapedTriangulation& X, int a, int b) {
  ShapedTriangulation Y = X;
  std::swap(Y.tets[a], Y.tets[b]);
  auto re = [&](int t) { return t == a ? b : t == b ? a : t; };
  for (auto& g : Y.gluings) {
    g.from_tet = re(g.from_tet);
    g.to_tet = re(g.to_tet);
  }
  Y.finalize();
  return Y;
}

const char* kSingle = R"({"N": 1, "theta_arg_over_pi": 0.3333333333333333,
  "tets": [{"sign": 1, "angles": [0.2, 0.3, 0.5]}], "gluings": []})";
}  // namespace

TEST_CASE("census") {
  auto names = census_names();
  CHECK(names.size() == 3);
  ShapedTriangulation f2 = builtin_census("fig8_2tet");
  CHECK(f2.tets.size() == 2);
  CHECK(f2.num_edges == 2);
  CHECK(f2.closed());
  ShapedTriangulation f3 = builtin_census("fig8_3tet");
  CHECK(f3.tets.size() == 3);
  CHECK(f3.num_edges == 3);
  ShapedTriangulation s = builtin_census("single_tet");
  CHECK(s.tets.size() == 1);
  CHECK(s.num_edges == 6);
  CHECK(std::all_of(s.edge_boundary.begin(), s.edge_boundary.end(), [](bool b) { return b; }));
  try {
    builtin_census("trefoil");
    FAIL("expected UnknownName");
  } catch (const Error& e) {
    CHECK(e.kind == ErrorKind::UnknownName);
  }
}

TEST_CASE("figure-eight edge data") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  // ideal triangulation, cusp vertex removed: -E + F - T = 0
  int faces = static_cast<int>(X.gluings.size());
  CHECK(X.num_edges == static_cast<int>(X.tets.size()));
  CHECK(-X.num_edges + faces - static_cast<int>(X.tets.size()) == 0);
  for (int v : X.edge_valence()) CHECK(v == 6);
  for (double s : X.edge_angle_sum) CHECK(std::abs(s - 2.0) < 1e-15);
  CHECK(X.balance_defect() < 1e-15);
}

TEST_CASE("parse and serialize") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  ShapedTriangulation Y = parse_triangulation(serialize_triangulation(X));
  CHECK(isomorphic(X, Y));
  CHECK(serialize_triangulation(Y) == serialize_triangulation(X));
  ShapedTriangulation S = parse_triangulation(kSingle);
  CHECK(S.num_edges == 6);
  for (int e = 0; e < 6; ++e) CHECK(S.edge_valence()[e] == 1);
}

TEST_CASE("parse errors") {
  auto kind = [](const std::string& doc) {
    try {
      parse_triangulation(doc);
    } catch (const Error& e) {
      return static_cast<int>(e.kind);
    }
    return -1;
  };
  CHECK(kind("{not json") == static_cast<int>(ErrorKind::Schema));
  CHECK(kind(R"({"N": 1, "theta_arg_over_pi": 0.3, "tets": [], "gluings": [], "extra": 1})") == static_cast<int>(ErrorKind::Schema));
  CHECK(kind(R"({"N": 1, "theta_arg_over_pi": 0.3, "tets": [{"sign": 1, "angles": [0.2, 0.3, 0.6]}], "gluings": []})") ==
        static_cast<int>(ErrorKind::Validation));
  const char* twice = R"({"N": 1, "theta_arg_over_pi": 0.3,
    "tets": [{"sign": 1, "angles": [0.2, 0.3, 0.5]}, {"sign": -1, "angles": [0.2, 0.3, 0.5]}, {"sign": 1, "angles": [0.2, 0.3, 0.5]}],
    "gluings": [{"from": [0, 0], "to": [1, 0], "vertex_map": [1, 2, 3]}, {"from": [0, 0], "to": [2, 0], "vertex_map": [1, 2, 3]}]})";
  CHECK(kind(twice) == static_cast<int>(ErrorKind::Validation));
  const char* self = R"({"N": 1, "theta_arg_over_pi": 0.3, "tets": [{"sign": 1, "angles": [0.2, 0.3, 0.5]}],
    "gluings": [{"from": [0, 0], "to": [0, 0], "vertex_map": [1, 2, 3]}]})";
  CHECK(kind(self) == static_cast<int>(ErrorKind::Validation));
}

TEST_CASE("gluing involution") {
  ShapedTriangulation X = builtin_census("fig8_3tet");
  std::set<std::pair<int, int>> seen;
  for (auto& g : X.gluings) {
    CHECK(seen.insert({g.from_tet, g.from_face}).second);
    CHECK(seen.insert({g.to_tet, g.to_face}).second);
  }
  CHECK(seen.size() == 4 * X.tets.size());
}

TEST_CASE("edge classes do not depend on tet order") {
  ShapedTriangulation X = builtin_census("fig8_3tet");
  ShapedTriangulation Y = swap_tets(X, 0, 2);
  CHECK(Y.num_edges == X.num_edges);
  auto a = sorted_sums(X), b = sorted_sums(Y);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-15);
  CHECK(isomorphic(X, Y));
}

TEST_CASE("2-3 move on every shared face") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  for (int g = 0; g < static_cast<int>(X.gluings.size()); ++g) {
    ShapedTriangulation Y = pachner_23(X, g);
    CHECK(Y.tets.size() == 3);
    CHECK(Y.num_edges == 3);
    CHECK(Y.balance_defect() < 1e-14);
    int valence3 = 0;
    for (int e = 0; e < Y.num_edges; ++e)
      if (Y.edge_valence()[e] == 3) {
        ++valence3;
        CHECK(isomorphic(pachner_32(Y, e), X, 1e-12));
      }
    CHECK(valence3 >= 1);
  }
}

TEST_CASE("2-3 move keeps old edge sums") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  // unbalance the input so sums differ between edges
  auto K = balanced_kernel(X);
  REQUIRE(!K.empty());
  std::vector<double> d(6, 0.0);
  d[0] = 0.05;
  d[1] = -0.05;
  X.tets[0].angles.a += d[0];
  X.tets[0].angles.b += d[1];
  X.finalize();
  ShapedTriangulation Y = pachner_23(X, 0);
  auto a = sorted_sums(X);
  std::vector<double> b = Y.edge_angle_sum;
  for (double s : a) {
    bool found = std::any_of(b.begin(), b.end(), [&](double t) { return std::abs(t - s) < 1e-15; });
    CHECK(found);
  }
}

TEST_CASE("2-3 move needs two distinct tets") {
  ShapedTriangulation S = builtin_census("single_tet");
  CHECK_THROWS_AS(pachner_23(S, 0), Error);
}

TEST_CASE("balanced perturbation") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  auto K = balanced_kernel(X);
  CHECK(K.size() == 3);
  for (auto& d : K) {
    double m = positivity_margin(X, d);
    CHECK(m > 0);
    ShapedTriangulation Y = balanced_perturbation(X, d, 0.5 * m);
    for (double s : Y.edge_angle_sum) CHECK(std::abs(s - 2.0) < 1e-15);
    ShapedTriangulation Z = balanced_perturbation(X, d, 0.0);
    CHECK(serialize_triangulation(Z) == serialize_triangulation(X));
    try {
      balanced_perturbation(X, d, 1.01 * m);
      FAIL("expected PositivityViolation");
    } catch (const Error& e) {
      CHECK(e.kind == ErrorKind::Positivity);
    }
  }
  std::vector<double> bad(6, 0.0);
  bad[0] = 1.0;
  CHECK_THROWS_AS(balanced_perturbation(X, bad, 0.01), Error);
}

TEST_CASE("gauge directions") {
  CHECK(gauge_kernel(builtin_census("fig8_2tet")).size() == 1);
  CHECK(gauge_kernel(builtin_census("fig8_3tet")).size() == 2);
  CHECK(balanced_kernel(builtin_census("fig8_3tet")).size() == 4);
}

TEST_CASE("edge orientation flip") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  for (int e = 0; e < X.num_edges; ++e) {
    ShapedTriangulation Y = flip_edge_orientation(X, e);
    CHECK(Y.num_edges == X.num_edges);
    CHECK(Y.balance_defect() < 1e-14);
  }
}

TEST_CASE("relabeling keeps the combinatorics") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  ShapedTriangulation Y = relabel_tet(X, 0, {1, 0, 2, 3});
  CHECK(Y.tets[0].sign == -X.tets[0].sign);
  CHECK(Y.num_edges == 2);
  CHECK(Y.balance_defect() < 1e-14);
}

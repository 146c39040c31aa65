#include <cmath>
#include <random>

#include "doctest.h"
#include "qdl/partition.hpp"

using namespace qdl;

TEST_CASE("empty triangulation") {
  ShapedTriangulation X;
  X.finalize();
  PartitionSpec spec;
  spec.M = 8;
  CHECK(std::abs(partition_function(X, spec).Z - 1.0) < 1e-15);
}

TEST_CASE("equal edge states give the kernel at the origin") {
  ShapedTriangulation X = builtin_census("single_tet", 2);
  QuadratureSpec q;
  std::vector<double> st(X.num_edges, 0.37);
  WeightKernelParams w{X.tets[0].angles, {0, 0}, QdParams::make(X.theta_arg, 2)};
  CHECK(std::abs(boltzmann_weight(X, 0, st, q) - weight_kernel(w, {0, 0}, {0, 0}, q)) < 1e-12);
}

TEST_CASE("negative tets are conjugated") {
  ShapedTriangulation X = builtin_census("single_tet");
  ShapedTriangulation Y = X;
  Y.tets[0].sign = -1;
  Y.finalize();
  QuadratureSpec q;
  std::vector<double> st{0.1, 0.5, 0.2, 0.9, 0.3, 0.7};
  CHECK(std::abs(boltzmann_weight(Y, 0, st, q) - std::conj(boltzmann_weight(X, 0, st, q))) < 1e-15);
}

TEST_CASE("descent of the weight product") {
  QuadratureSpec q;
  std::mt19937_64 rng(3);
  for (int N : {1, 2, 3})
    for (const char* name : {"fig8_2tet", "fig8_3tet"}) {
      ShapedTriangulation X = builtin_census(name, N);
      const double s = std::sqrt(static_cast<double>(N));
      std::uniform_real_distribution<double> U(0.0, s);
      std::vector<double> st(X.num_edges);
      for (auto& v : st) v = U(rng);
      cplx b = boltzmann_product(X, st, q);
      for (int e = 0; e < X.num_edges; ++e) {
        auto t = st;
        t[e] += s;
        CHECK(std::abs(boltzmann_product(X, t, q) - b) < 1e-8 * std::abs(b));
      }
    }
}

TEST_CASE("descent of each two-tet weight") {
  QuadratureSpec q;
  for (int N : {1, 2}) {
    ShapedTriangulation X = builtin_census("fig8_2tet", N);
    const double s = std::sqrt(static_cast<double>(N));
    std::vector<double> st{0.21, 0.64};
    for (int T = 0; T < 2; ++T)
      for (int e = 0; e < 2; ++e) {
        auto t = st;
        t[e] += s;
        cplx a = boltzmann_weight(X, T, st, q), b = boltzmann_weight(X, T, t, q);
        CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
      }
  }
}

TEST_CASE("grid validation") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  PartitionSpec spec;
  spec.M = 48;
  CHECK_THROWS_AS(partition_function(X, spec), Error);
  spec.M = 4;
  CHECK_THROWS_AS(partition_function(X, spec), Error);
}

TEST_CASE("figure-eight value is grid stable") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  PartitionSpec a, b;
  a.M = 128;
  b.M = 256;
  PartitionResult ra = partition_function(X, a), rb = partition_function(X, b);
  CHECK(std::isfinite(ra.Z.real()));
  CHECK(std::abs(std::abs(ra.Z) - std::abs(rb.Z)) < 1e-3 * std::abs(rb.Z));
  CHECK(ra.error_estimate < 1e-3);
  CHECK(std::abs(ra.Z) == doctest::Approx(1.05958614221).epsilon(1e-9));
}

TEST_CASE("convergence ladder") {
  ShapedTriangulation X = builtin_census("fig8_2tet");
  QuadratureSpec q;
  ConvergenceReport r = convergence_report(X, {8, 16, 32}, q);
  CHECK(r.rows.size() == 3);
  CHECK(r.geometric);
  CHECK(r.rows[2].delta < r.rows[1].delta);
  CHECK_THROWS_AS(convergence_report(X, {32}, q), Error);
}

TEST_CASE("pachner invariance at level one") {
  PartitionSpec spec;
  spec.M = 64;
  ShapedTriangulation X = builtin_census("fig8_2tet");
  double z2 = std::abs(partition_function(X, spec).Z);
  for (int g = 0; g < 4; ++g) {
    double z3 = std::abs(partition_function(pachner_23(X, g), spec).Z);
    CHECK(std::abs(z3 - z2) < 1e-3 * z2);
  }
}

TEST_CASE("edge orientation changes") {
  PartitionSpec spec;
  spec.M = 64;
  for (int N : {1, 2}) {
    ShapedTriangulation X = builtin_census("fig8_2tet", N);
    double z = std::abs(partition_function(X, spec, false).Z);
    for (int e = 0; e < X.num_edges; ++e) {
      double w = std::abs(partition_function(flip_edge_orientation(X, e), spec, false).Z);
      CHECK(std::abs(w - z) < 1e-6 * z);
    }
  }
}

TEST_CASE("gauge directions keep the modulus") {
  PartitionSpec spec;
  spec.M = 64;
  ShapedTriangulation X = builtin_census("fig8_2tet");
  double z = std::abs(partition_function(X, spec).Z);
  for (auto& d : gauge_kernel(X)) {
    double w = std::abs(partition_function(balanced_perturbation(X, d, 0.5 * positivity_margin(X, d)), spec, false).Z);
    CHECK(std::abs(w - z) < 1e-3 * z);
  }
}

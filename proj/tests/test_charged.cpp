#include <cmath>
#include <random>

#include "doctest.h"
#include "qdl/charged.hpp"

using namespace qdl;

TEST_CASE("charge triple validation") {
  CHECK_NOTHROW(ChargeTriple::make(0.2, 0.3).validate());
  CHECK(ChargeTriple::make(0.2, 0.3).b == doctest::Approx(0.5));
  CHECK_THROWS_AS(ChargeTriple::make(0.6, 0.5).validate(), Error);
  CHECK_THROWS_AS((ChargeTriple{0.0, 0.5, 0.5}.validate()), Error);
}

TEST_CASE("charged value at the origin") {
  QdParams p = QdParams::make(1.0 / 3, 1);
  ChargeTriple eq;
  CHECK(std::abs(psi_charged(eq, 0.0, 0, p) - 1.0 / dtheta(cplx(0, -1.0 / 3), 0, p)) < 1e-14);
}

TEST_CASE("charged decay") {
  QdParams p = QdParams::make(1.0 / 3, 1);
  ChargeTriple eq;
  double v0 = std::abs(psi_charged(eq, 0.0, 0, p));
  for (double sgn : {1.0, -1.0}) {
    double v8 = std::abs(psi_charged(eq, 8.0 * sgn, 0, p)), v16 = std::abs(psi_charged(eq, 16.0 * sgn, 0, p));
    CHECK(v8 < 1e-3 * v0);
    CHECK(v16 < 1e-3 * v8);
  }
}

TEST_CASE("vanishing charges give 1/D") {
  QdParams p = QdParams::make(1.0 / 3, 2);
  ChargeTriple tiny = ChargeTriple::make(1e-6, 1e-6);
  for (double x : {-0.5, 0.3}) CHECK(std::abs(psi_charged(tiny, x, 1, p) - 1.0 / dtheta(x, 1, p)) < 1e-4);
}

TEST_CASE("forward transform closed form against quadrature") {
  QuadratureSpec spec;
  ChargeTriple eq;
  QdParams p1 = QdParams::make(1.0 / 3, 1);
  cplx a = psi_forward_transform(eq, 0.0, 0, p1, spec, TransformPath::ClosedForm);
  cplx b = psi_forward_transform(eq, 0.0, 0, p1, spec, TransformPath::Quadrature);
  CHECK(std::abs(a - b) < 1e-6);
  QdParams p3 = QdParams::make(1.0 / 3, 3);
  ChargeTriple ch{0.5, 0.3, 0.2};
  a = psi_forward_transform(ch, 0.7, 2, p3, spec, TransformPath::ClosedForm);
  b = psi_forward_transform(ch, 0.7, 2, p3, spec, TransformPath::Quadrature);
  CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("forward transform modulus") {
  QuadratureSpec spec;
  ChargeTriple ch{0.5, 0.3, 0.2};
  ChargeTriple bc{ch.b, ch.a, ch.c};  // psi_{b,c}
  for (int N : {1, 2, 3}) {
    QdParams p = QdParams::make(1.0 / 3, N);
    for (double x : {-0.6, 0.25})
      for (int n = 0; n < N; ++n) {
        double lhs = std::abs(psi_forward_transform(ch, x, n, p, spec, TransformPath::ClosedForm));
        CHECK(lhs == doctest::Approx(std::abs(psi_charged(bc, x, mod(n + p.M, N), p))).epsilon(1e-12));
      }
    CHECK(std::abs(std::abs(transform_constant(p)) - 1.0) < 1e-14);
  }
}

TEST_CASE("charged identities") {
  QuadratureSpec spec;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> X(-1.5, 1.5);
  std::vector<std::pair<int, ChargeTriple>> cases{{1, ChargeTriple{}}, {2, ChargeTriple{0.5, 0.3, 0.2}}, {3, ChargeTriple{0.2, 0.25, 0.55}}};
  for (auto& [N, ch] : cases) {
    QdParams p = QdParams::make(1.0 / 3, N);
    std::vector<ChargedSample> ss;
    for (int i = 0; i < 20; ++i) ss.push_back({X(rng), static_cast<int>(rng() % N)});
    ChargedResiduals r = charged_identity_residuals(ch, ss, p, spec, false);
    CHECK(r.f2_reflect < 1e-8);
    CHECK(r.f2_transform < 1e-8);
    CHECK(r.f3 < 1e-8);
    CHECK(r.f3_paths < 1e-10);
  }
}

TEST_CASE("weight kernel automorphy") {
  QuadratureSpec spec;
  for (int N : {1, 2, 3}) {
    QdParams p = QdParams::make(1.0 / 3, N);
    LcaPoint mu{0.13, 1 % N};
    WeightKernelParams w{{0.5, 0.3, 0.2}, mu, p};
    LcaPoint b0 = b_generator(N);
    std::mt19937_64 rng(N);
    std::uniform_real_distribution<double> X(-0.8, 0.8);
    for (int i = 0; i < 6; ++i) {
      LcaPoint x{X(rng), static_cast<int>(rng() % N)}, y{X(rng), static_cast<int>(rng() % N)};
      cplx W = weight_kernel(w, x, y, spec);
      cplx Wx = weight_kernel(w, add(x, b0, N), y, spec);
      cplx Wy = weight_kernel(w, x, add(y, b0, N), spec);
      CHECK(std::abs(Wx - fourier_kernel(half(y, N), neg(b0, N), N) * W) < 1e-8);
      cplx py = std::conj(gaussian_exp(b0, N)) * fourier_kernel(sub(half(x, N), mu, N), b0, N);
      if (N % 2 == 1 || x.n % 2 == 0) {
        CHECK(std::abs(Wy - py * W) < 1e-8);
      } else {
        // no exact half of an odd residue: the relation holds up to a sign
        CHECK(std::abs(Wy + py * W) < 1e-8);
      }
    }
  }
}

TEST_CASE("weight kernel b-sum truncation") {
  QuadratureSpec spec, fine;
  fine.bsum_tol = 1e-30;
  fine.bsum_max = 100000;
  for (int N : {1, 2}) {
    WeightKernelParams w{ChargeTriple{}, {0, 0}, QdParams::make(1.0 / 3, N)};
    BSumResult a, b;
    cplx v = weight_kernel(w, {0.1, 0}, {0.2, 0}, spec, &a);
    cplx u = weight_kernel(w, {0.1, 0}, {0.2, 0}, fine, &b);
    CHECK(b.terms_hi > a.terms_hi);
    CHECK(std::abs(v - u) < 1e-10 * std::abs(u));
  }
}

TEST_CASE("kernel grid matches direct evaluation") {
  QuadratureSpec spec;
  for (int N : {1, 2, 3}) {
    QdParams p = QdParams::make(1.0 / 3, N);
    ChargeTriple ch{0.5, 0.3, 0.2};
    WeightKernelParams w{ch, {0, 0}, p};
    const int M = 16;
    KernelGrid g(ch, p, M, spec);
    double h = std::sqrt(static_cast<double>(N)) / M;
    for (long long ix : {-20LL, 5LL, 40LL})
      for (long long iy : {-33LL, 2LL, 35LL})
        CHECK(std::abs(weight_kernel(w, {ix * h, 0}, {iy * h, 0}, spec) - g(ix, iy)) < 1e-10);
  }
}

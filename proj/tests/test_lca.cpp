#include <cmath>
#include <random>

#include "doctest.h"
#include "qdl/lca.hpp"

using namespace qdl;

namespace {
double dist(cplx a, cplx b) { return std::abs(a - b); }
}

TEST_CASE("gaussian exponential values") {
  for (int N : {1, 2, 5}) CHECK(dist(gaussian_exp(LcaPoint{0, 0}, N), 1.0) < 1e-15);
  CHECK(dist(gaussian_exp(LcaPoint{1, 0}, 1), -1.0) < 1e-15);
  CHECK(dist(gaussian_exp(LcaPoint{0, 1}, 2), kI) < 1e-15);
}

TEST_CASE("fourier kernel values") {
  CHECK(dist(fourier_kernel(LcaPoint{0.7, 2}, LcaPoint{0, 0}, 3), 1.0) < 1e-15);
  CHECK(dist(fourier_kernel(LcaPoint{0, 1}, LcaPoint{0, 1}, 2), -1.0) < 1e-15);
  for (int N : {1, 3, 4}) CHECK(dist(fourier_kernel(LcaPoint{1, 0}, LcaPoint{1, 0}, N), 1.0) < 1e-14);
}

TEST_CASE("bicharacter, symmetry and gaussian compatibility") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> X(-3, 3);
  for (int N : {1, 2, 3, 6}) {
    std::uniform_int_distribution<int> n(0, N - 1);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      LcaPoint p{X(rng), n(rng)}, q{X(rng), n(rng)}, r{X(rng), n(rng)};
      worst = std::max(worst, dist(gaussian_exp(add(p, q, N), N), gaussian_exp(p, N) * gaussian_exp(q, N) * fourier_kernel(p, q, N)));
      worst = std::max(worst, dist(fourier_kernel(add(p, q, N), r, N), fourier_kernel(p, r, N) * fourier_kernel(q, r, N)));
      worst = std::max(worst, dist(fourier_kernel(p, q, N), fourier_kernel(q, p, N)));
      worst = std::max(worst, dist(gaussian_exp(neg(p, N), N), gaussian_exp(p, N)));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("gaussian exponential is defined mod N") {
  for (int N : {1, 2, 3, 8})
    for (int n = 0; n < N; ++n) CHECK(gaussian_exp(cplx(0.4), n + N, N) == gaussian_exp(cplx(0.4), n, N));
}

TEST_CASE("haar integral of gaussians") {
  QuadratureSpec spec;
  auto g0 = [](double x, int n) { return n == 0 ? cplx(std::exp(-kPi * x * x)) : cplx(0.0); };
  CHECK(dist(haar_integrate(g0, 1, spec).value, 1.0) < 1e-10);
  auto g = [](double x, int) { return cplx(std::exp(-kPi * x * x)); };
  CHECK(dist(haar_integrate(g, 4, spec).value, 2.0) < 1e-10);
}

TEST_CASE("regularized fresnel integral approaches gamma") {
  QuadratureSpec spec;
  spec.window = 60;
  spec.max_window = 320;
  spec.step = 1.0 / 32;
  for (double eps : {0.05, 0.02}) {
    auto f = [eps](double x, int n) { return gaussian_exp(cplx(x), n, 1) * std::exp(-eps * x * x); };
    cplx v = haar_integrate(f, 1, spec).value;
    // closed form of the damped integral
    CHECK(dist(v, std::sqrt(kPi / cplx(eps, -kPi))) < 1e-8);
    CHECK(dist(v, gauss_gamma(1)) < eps);
  }
}

TEST_CASE("gamma closed form") {
  CHECK(dist(gauss_gamma(1), std::polar(1.0, kPi / 4)) < 1e-15);
  CHECK(dist(gauss_gamma(2), kI) < 1e-15);
  for (int N = 1; N <= 12; ++N) CHECK(std::abs(std::abs(gauss_gamma(N)) - 1.0) < 1e-13);
}

TEST_CASE("quotient map and lift") {
  CHECK(project_to_quotient(b_generator(3), 3) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(project_to_quotient(LcaPoint{0.3, 0}, 1) == doctest::Approx(0.3));
  CHECK(project_to_quotient(LcaPoint{1.0, 1}, 4) == doctest::Approx(0.5));
  for (double t : {0.0, 0.2, 1.1}) CHECK(project_to_quotient(lift(t, 2), 2) == doctest::Approx(t));
}

TEST_CASE("halving") {
  for (int N : {1, 3, 5}) {
    for (int n = 0; n < N; ++n) {
      LcaPoint h = half(LcaPoint{0.6, n}, N);
      CHECK(mod(2 * h.n, N) == n);
      CHECK(h.x == 0.3);
    }
  }
  CHECK(half(LcaPoint{0, 2}, 4).n == 1);
  CHECK(half(LcaPoint{0, 3}, 4).n == 3);
  CHECK(half(LcaPoint{0, 1}, 4).n == 2);
}

TEST_CASE("b-sum") {
  QuadratureSpec spec;
  auto delta = [](LcaPoint p) { return std::abs(p.x) < 1e-12 ? cplx(1.0) : cplx(0.0); };
  CHECK(dist(b_sum(delta, LcaPoint{0, 0}, 1, spec).value, 1.0) < 1e-15);
  double brute = 0.0;
  for (int k = -30; k <= 30; ++k) brute += std::exp(-kPi * k * k);
  auto g = [](LcaPoint p) { return cplx(std::exp(-kPi * p.x * p.x)); };
  CHECK(dist(b_sum(g, LcaPoint{0, 0}, 1, spec).value, brute) < 1e-14);
  CHECK(brute == doctest::Approx(1.0864348).epsilon(1e-7));
  auto h = [](LcaPoint p) { return cplx(p.x, 1.0) * std::exp(-2.0 * p.x * p.x); };
  cplx a(0.3, -1.2), b(2.0, 0.5);
  auto lin = [&](LcaPoint p) { return a * g(p) + b * h(p); };
  LcaPoint base{0.17, 1};
  CHECK(dist(b_sum(lin, base, 3, spec).value, a * b_sum(g, base, 3, spec).value + b * b_sum(h, base, 3, spec).value) < 1e-13);
}

TEST_CASE("b-sum rejects growing terms") {
  QuadratureSpec spec;
  auto grow = [](LcaPoint p) { return cplx(std::exp(0.1 * std::abs(p.x))); };
  CHECK_THROWS_AS(b_sum(grow, LcaPoint{0, 0}, 2, spec), Error);
}

TEST_CASE("weil decomposition") {
  QuadratureSpec spec;
  for (int N : {1, 2, 3}) {
    auto f = [](double x, int n) { return cplx(std::exp(-kPi * x * x) * (1.0 + 0.3 * n), 0.2 * x * std::exp(-x * x)); };
    cplx whole = haar_integrate(f, N, spec).value;
    const double s = std::sqrt(static_cast<double>(N));
    const int M = 64;
    cplx acc = 0.0;
    for (int i = 0; i < M; ++i) {
      double t = s * i / M;
      acc += b_sum([&](LcaPoint p) { return f(p.x, p.n); }, lift(t, N), N, spec).value;
    }
    acc *= s / M / s;
    CHECK(dist(whole, acc) < 1e-10);
  }
}

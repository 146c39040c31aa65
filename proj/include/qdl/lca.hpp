#pragma once

#include <complex>
#include <functional>

#include "qdl/errors.hpp"

namespace qdl {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cplx kI{0.0, 1.0};

// Element (x, n) of A_N = R + Z/N; n is kept in [0, N).
struct LcaPoint {
  double x = 0.0;
  int n = 0;
};

void check_modulus(int N);
int mod(long long n, int N);
LcaPoint make_point(double x, long long n, int N);
LcaPoint add(LcaPoint p, LcaPoint q, int N);
LcaPoint sub(LcaPoint p, LcaPoint q, int N);
LcaPoint neg(LcaPoint p, int N);
LcaPoint scale(LcaPoint p, long long k, int N);

// p/2. Odd N uses the inverse of 2 mod N. Even N: n/2 for even n,
// (n + N - 1)/2 for odd n (no exact half exists).
LcaPoint half(LcaPoint p, int N);

// <x,n> = e^{pi i x^2} e^{-pi i n(n+N)/N}
cplx gaussian_exp(LcaPoint p, int N);
// Complex-x continuation of the Gaussian, used on shifted contours.
cplx gaussian_exp(cplx x, int n, int N);

// <x,m; y,n> = e^{2 pi i x y} e^{-2 pi i m n / N}
cplx fourier_kernel(LcaPoint p, LcaPoint q, int N);
cplx fourier_kernel(cplx x, int m, cplx y, int n, int N);

// Regularized integral of the Gaussian over A_N; closed form.
cplx gauss_gamma(int N);

// Generator (N^{-1/2}, 1) of the lattice B.
LcaPoint b_generator(int N);
// A -> A/B ~ [0, sqrt N)
double project_to_quotient(LcaPoint p, int N);
LcaPoint lift(double t, int N);

struct QuadratureSpec {
  double step = 1.0 / 64.0;  // trapezoid step on R
  double window = 10.0;      // initial half-window on R
  double max_window = 160.0;
  double tol = 1e-10;        // absolute change tolerated on window doubling
  int grid = 128;            // points per circle factor of A/B
  double bsum_tol = 1e-15;   // relative tail cut for B-sums
  int bsum_max = 20000;
};

struct IntegralResult {
  cplx value;
  double error = 0.0;
  double window = 0.0;
};

using LcaFunction = std::function<cplx(double x, int n)>;

// (1/sqrt N) sum_n int_R f(x, n) dx by trapezoid; the window doubles until
// the value moves by less than spec.tol.
IntegralResult haar_integrate(const LcaFunction& f, int N, const QuadratureSpec& spec);
// Same, with a fixed window and no doubling.
cplx haar_trapezoid(const LcaFunction& f, int N, double half_window, double step);

struct BSumResult {
  cplx value;
  int terms_lo = 0;  // most negative k included
  int terms_hi = 0;
  double last_term = 0.0;
};

// sum_k f(base + k b0), truncated once a full period of N consecutive terms on
// each side is below spec.bsum_tol relative to the largest term.
BSumResult b_sum(const std::function<cplx(LcaPoint)>& f, LcaPoint base, int N,
                 const QuadratureSpec& spec);

}  // namespace qdl

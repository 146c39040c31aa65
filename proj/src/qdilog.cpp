#include "qdl/qdilog.hpp"

#include <cmath>

namespace qdl {

void QdParams::validate() const {
  check_modulus(N);
  if (mod(2LL * M, N) != 0) throw Error(ErrorKind::Validation, "M must satisfy 2M = 0 mod N");
  if (N % 8 != 0 && mod(M, N) != 0) throw Error(ErrorKind::Validation, "M must be 0 unless 8 divides N");
}

QdParams QdParams::make(double theta_arg, int N, int M) {
  QdParams p{Theta::from_arg(theta_arg), N, M};
  p.validate();
  p.M = mod(M, N);
  return p;
}

namespace {
cplx factor_arg(cplx x, int n, int j, const QdParams& p) {
  double N = p.N;
  const Theta& t = p.th;
  double frac = static_cast<double>(mod(j + n, p.N)) / N;
  return x / std::sqrt(N) + (1.0 - 1.0 / N) * t.c - kI / t.theta * (j / N) - kI * t.theta * frac;
}
}  // namespace

cplx dtheta(cplx x, int n, const QdParams& p) {
  n = mod(n, p.N);
  if (p.N == 1) return phi_theta(x, p.th);
  cplx r = 1.0;
  for (int j = 0; j < p.N; ++j) r *= phi_theta(factor_arg(x, n, j, p), p.th);
  return r;
}

cplx dtheta_conjugate_form(double x, int n, const QdParams& p) {
  n = mod(n, p.N);
  cplx r = 1.0;
  for (int j = 0; j < p.N; ++j) {
    cplx w = factor_arg(cplx(x, 0.0), n, j, p);
    r *= phi_theta(std::conj(w), p.th);
  }
  return r;
}

cplx inversion_constant(const QdParams& p) {
  cplx c2 = p.th.c * p.th.c;
  return std::exp(-kPi * kI * (static_cast<double>(p.N) + 2.0 * c2 / static_cast<double>(p.N)) / 6.0);
}

cplx fourier_constant(const QdParams& p) {
  cplx c2 = p.th.c * p.th.c;
  return std::exp(kPi * kI * (static_cast<double>(p.N) - 4.0 * c2 / static_cast<double>(p.N)) / 12.0);
}

double inversion_residual(double x, int n, const QdParams& p) {
  cplx l = dtheta(x, n, p) * dtheta(-x, -n, p);
  cplx r = gaussian_exp(LcaPoint{x, mod(n, p.N)}, p.N) * inversion_constant(p);
  return std::abs(l - r);
}

FourierCheck fourier_formula_check(double y, int n, const QdParams& p, const QuadratureSpec& spec,
                                   double delta) {
  n = mod(n, p.N);
  const int N = p.N;
  if (n == 0 && std::abs(y) < 1e-12)
    throw Error(ErrorKind::PoleProximity, "Fourier formula is singular at y = 0, n = 0");
  if (delta < 0) delta = p.th.c.imag() / (2.0 * std::sqrt(static_cast<double>(N)));
  auto f = [&](double x, int m) -> cplx {
    cplx z(x, delta);
    cplx F = 1.0 / (1.0 + std::exp(2.0 * kPi * z));
    cplx ph = std::polar(1.0, 2.0 * kPi * static_cast<double>((static_cast<long long>(m) * n) % N) / N);
    return (dtheta(z, m, p) - F) * std::exp(-2.0 * kPi * kI * z * y) * ph;
  };
  QuadratureSpec s = spec;
  IntegralResult ir = haar_integrate(f, N, s);
  cplx lhs = ir.value;
  if (n == 0) lhs += static_cast<double>(N) * kI / (2.0 * std::sinh(kPi * y)) / std::sqrt(static_cast<double>(N));
  cplx rhs = dtheta(-y + p.th.c / std::sqrt(static_cast<double>(N)), p.M - n, p) /
             gaussian_exp(LcaPoint{y, n}, N) * fourier_constant(p);
  return {lhs, rhs, std::abs(lhs - rhs), ir.error};
}

double fourier_formula_residual(double y, int n, const QdParams& p, const QuadratureSpec& spec) {
  return fourier_formula_check(y, n, p, spec).residual;
}

}  // namespace qdl

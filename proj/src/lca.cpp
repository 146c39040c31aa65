#include "qdl/lca.hpp"

#include <cmath>
#include <vector>

#include "qdl/parallel.hpp"

namespace qdl {

void check_modulus(int N) {
  if (N < 1) throw Error(ErrorKind::Validation, "modulus N must be >= 1");
}

int mod(long long n, int N) {
  long long r = n % N;
  if (r < 0) r += N;
  return static_cast<int>(r);
}

LcaPoint make_point(double x, long long n, int N) { return {x, mod(n, N)}; }
LcaPoint add(LcaPoint p, LcaPoint q, int N) { return {p.x + q.x, mod(p.n + q.n, N)}; }
LcaPoint sub(LcaPoint p, LcaPoint q, int N) { return {p.x - q.x, mod(p.n - q.n, N)}; }
LcaPoint neg(LcaPoint p, int N) { return {-p.x, mod(-p.n, N)}; }
LcaPoint scale(LcaPoint p, long long k, int N) {
  return {p.x * static_cast<double>(k), mod(static_cast<long long>(p.n) * k, N)};
}

LcaPoint half(LcaPoint p, int N) {
  if (N % 2 == 1) {
    int inv2 = (N + 1) / 2;
    return {p.x / 2, mod(static_cast<long long>(p.n) * inv2, N)};
  }
  if (p.n % 2 == 0) return {p.x / 2, p.n / 2};
  return {p.x / 2, mod((p.n + N - 1) / 2, N)};
}

cplx gaussian_exp(cplx x, int n, int N) {
  double ph = -kPi * static_cast<double>(n) * static_cast<double>(n + N) / N;
  // reduce the residue phase exactly: n(n+N)/N mod 2
  long long num = static_cast<long long>(n) * (n + N);
  long long r = num % (2LL * N);
  ph = -kPi * static_cast<double>(r) / N;
  return std::exp(kI * kPi * x * x) * std::polar(1.0, ph);
}

cplx gaussian_exp(LcaPoint p, int N) {
  return std::polar(1.0, kPi * p.x * p.x) * gaussian_exp(cplx(0.0), p.n, N);
}

cplx fourier_kernel(cplx x, int m, cplx y, int n, int N) {
  long long r = (static_cast<long long>(m) * n) % N;
  return std::exp(2.0 * kPi * kI * x * y) * std::polar(1.0, -2.0 * kPi * static_cast<double>(r) / N);
}

cplx fourier_kernel(LcaPoint p, LcaPoint q, int N) {
  long long r = (static_cast<long long>(p.n) * q.n) % N;
  return std::polar(1.0, 2.0 * kPi * p.x * q.x - 2.0 * kPi * static_cast<double>(r) / N);
}

cplx gauss_gamma(int N) {
  check_modulus(N);
  cplx s = 0.0;
  for (int n = 0; n < N; ++n) s += gaussian_exp(cplx(0.0), n, N);
  return std::polar(1.0, kPi / 4) * s / std::sqrt(static_cast<double>(N));
}

LcaPoint b_generator(int N) { return {1.0 / std::sqrt(static_cast<double>(N)), mod(1, N)}; }

double project_to_quotient(LcaPoint p, int N) {
  double s = std::sqrt(static_cast<double>(N));
  double t = std::fmod(p.x - p.n / s, s);
  if (t < 0) t += s;
  if (t >= s) t -= s;
  return t;
}

LcaPoint lift(double t, int /*N*/) { return {t, 0}; }

cplx haar_trapezoid(const LcaFunction& f, int N, double half_window, double step) {
  long long K = static_cast<long long>(std::ceil(half_window / step));
  std::size_t npts = static_cast<std::size_t>(2 * K + 1);
  std::vector<cplx> col(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    std::vector<cplx> v(npts);
    parallel_for(npts, [&](std::size_t i) {
      double x = (static_cast<long long>(i) - K) * step;
      v[i] = f(x, n);
    });
    col[static_cast<std::size_t>(n)] = pairwise_sum(v) * step;
  }
  return pairwise_sum(col) / std::sqrt(static_cast<double>(N));
}

IntegralResult haar_integrate(const LcaFunction& f, int N, const QuadratureSpec& spec) {
  check_modulus(N);
  double L = spec.window;
  cplx prev = haar_trapezoid(f, N, L, spec.step);
  for (;;) {
    double L2 = 2 * L;
    if (L2 > spec.max_window)
      throw Error(ErrorKind::NonConvergent, "haar_integrate: window limit reached");
    cplx cur = haar_trapezoid(f, N, L2, spec.step);
    double d = std::abs(cur - prev);
    if (d <= spec.tol) return {cur, d, L2};
    prev = cur;
    L = L2;
  }
}

BSumResult b_sum(const std::function<cplx(LcaPoint)>& f, LcaPoint base, int N,
                 const QuadratureSpec& spec) {
  LcaPoint b = b_generator(N);
  auto at = [&](long long k) {
    LcaPoint p{base.x + static_cast<double>(k) * b.x, mod(base.n + k, N)};
    return f(p);
  };
  BSumResult r;
  std::vector<cplx> pos, negs;  // k >= 0 and k < 0
  double big = 0.0;
  auto run = [&](int dir, std::vector<cplx>& out) {
    double prev_block = INFINITY;
    int quiet = 0;
    for (long long k = (dir > 0 ? 0 : -1);; k += dir) {
      if (std::llabs(k) > spec.bsum_max)
        throw Error(ErrorKind::NonConvergent, "b_sum: term limit reached");
      cplx v = at(k);
      out.push_back(v);
      double a = std::abs(v);
      big = std::max(big, a);
      if (out.size() % static_cast<std::size_t>(N) == 0) {
        double blk = 0.0;
        for (std::size_t i = out.size() - N; i < out.size(); ++i) blk = std::max(blk, std::abs(out[i]));
        if (blk <= spec.bsum_tol * big) {
          if (++quiet >= 2) {
            r.last_term = std::max(r.last_term, blk);
            return;
          }
        } else {
          quiet = 0;
          if (out.size() > static_cast<std::size_t>(64 * N) && blk > prev_block && blk > 1e-300)
            throw Error(ErrorKind::NonConvergent, "b_sum: terms not decreasing");
        }
        prev_block = blk;
      }
    }
  };
  run(+1, pos);
  run(-1, negs);
  r.terms_hi = static_cast<int>(pos.size()) - 1;
  r.terms_lo = -static_cast<int>(negs.size());
  std::vector<cplx> all;
  all.reserve(pos.size() + negs.size());
  for (auto it = negs.rbegin(); it != negs.rend(); ++it) all.push_back(*it);
  for (auto& v : pos) all.push_back(v);
  r.value = pairwise_sum(all);
  return r;
}

}  // namespace qdl

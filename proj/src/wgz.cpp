#include "qdl/wgz.hpp"

#include <cmath>
#include <random>

#include "qdl/parallel.hpp"

namespace qdl {

void TestVector::validate() const {
  if (k < 1 || static_cast<int>(f.size()) != k) throw Error(ErrorKind::Validation, "test vector needs k >= 1 components");
  for (int j = 0; j < k; ++j) {
    double peak = 0.0;
    for (int i = -8; i <= 8; ++i) peak = std::max(peak, std::abs(f[j](window * i / 8.0)));
    for (double x : {-window, window, -window - 1.0, window + 1.0})
      if (std::abs(f[j](x)) > 1e-12 * std::max(peak, 1.0))
        throw Error(ErrorKind::DecayViolation, "component " + std::to_string(j) + " does not decay inside the window");
  }
}

TestVector gaussian_poly_vector(int k, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  TestVector t;
  t.k = k;
  for (int j = 0; j < k; ++j) {
    std::array<cplx, 4> c{};
    for (auto& x : c) x = cplx(U(rng), U(rng));
    double center = 0.3 * U(rng), width = 1.0 + 0.5 * (U(rng) + 1.0) / 2.0;
    t.f.push_back([c, center, width](cplx u) {
      cplx y = u - center;
      return (c[0] + y * (c[1] + y * (c[2] + y * c[3]))) * std::exp(-kPi * y * y / width);
    });
  }
  t.window = 9.0;
  return t;
}

cplx QuasiPeriodicSection::at(long long iu, long long iv) const {
  const long long m = M;
  auto split = [m](long long i, long long& q) {
    q = i >= 0 ? i / m : -((-i + m - 1) / m);
    return i - q * m;
  };
  long long qu, qv;
  long long ru = split(iu, qu), rv = split(iv, qv);
  double u0 = static_cast<double>(ru) / M, v = static_cast<double>(iv) / M;
  // s(u0 + qu, v) = e^{pi i k qu v} s(u0, v); s(u0, v0 + qv) = e^{-pi i k qv u0} s(u0, v0)
  double ph = kPi * k * (static_cast<double>(qu) * v - static_cast<double>(qv) * u0);
  return std::polar(1.0, ph) * grid(static_cast<int>(ru), static_cast<int>(rv));
}

double QuasiPeriodicSection::wrap_defect() const {
  double d = 0.0;
  for (int i = 0; i <= M; ++i) {
    double t = static_cast<double>(i) / M;
    d = std::max(d, std::abs(grid(M, i) - std::polar(1.0, kPi * k * t) * grid(0, i)));
    d = std::max(d, std::abs(grid(i, M) - std::polar(1.0, -kPi * k * t) * grid(i, 0)));
  }
  return d;
}

cplx wgz_eval(const TestVector& f, double u, double v) {
  const int k = f.k;
  long long mlo = static_cast<long long>(std::floor(k * (-f.window - 1.0 - u)));
  long long mhi = static_cast<long long>(std::ceil(k * (f.window + 1.0 - u)));
  std::vector<cplx> terms;
  terms.reserve(static_cast<std::size_t>((mhi - mlo + 1) * k));
  for (int j = 0; j < k; ++j) {
    cplx pj = std::polar(1.0, 2.0 * kPi * j * u);
    for (long long m = mlo; m <= mhi; ++m)
      terms.push_back(f.f[j](u + static_cast<double>(m) / k) * std::polar(1.0, -2.0 * kPi * static_cast<double>(m) * v) * pj);
  }
  return std::polar(1.0, -kPi * k * u * v) * pairwise_sum(terms);
}

int wgz_grid(int M, int k) {
  if (M < 8) throw Error(ErrorKind::Validation, "WGZ grid must be at least 8");
  return ((M + k - 1) / k) * k;
}

QuasiPeriodicSection wgz_forward(const TestVector& f, int M) {
  f.validate();
  QuasiPeriodicSection s;
  s.k = f.k;
  s.M = wgz_grid(M, f.k);
  const int G = s.M + 1;
  s.values.assign(static_cast<std::size_t>(G) * G, 0.0);
  parallel_for(static_cast<std::size_t>(G), [&](std::size_t iu) {
    for (int iv = 0; iv < G; ++iv)
      s.values[iu * G + iv] = wgz_eval(f, static_cast<double>(iu) / s.M, static_cast<double>(iv) / s.M);
  });
  return s;
}

cplx SampledVector::value(int j, long long i) const {
  if (i < lo || i > hi) return 0.0;
  return vals[j][static_cast<std::size_t>(i - lo)];
}

SampledVector wgz_inverse(const QuasiPeriodicSection& s, double window, double tol) {
  if (s.M % s.k) throw Error(ErrorKind::Validation, "section grid must be a multiple of k");
  if (s.wrap_defect() > tol) throw Error(ErrorKind::QuasiPeriodicity, "section violates the quasi-periodicity multipliers");
  const int k = s.k, M = s.M;
  SampledVector g;
  g.k = k;
  g.M = M;
  g.hi = static_cast<long long>(std::ceil(window * M));
  g.lo = -g.hi;
  const std::size_t n = static_cast<std::size_t>(g.hi - g.lo + 1);
  g.vals.assign(k, std::vector<cplx>(n));
  const long long step = M / k;
  parallel_for(n, [&](std::size_t idx) {
    long long i = g.lo + static_cast<long long>(idx);
    double u = static_cast<double>(i) / M;
    // integrals over v for each j', periodic trapezoid
    std::vector<cplx> I(k);
    for (int jp = 0; jp < k; ++jp) {
      long long iu = i - jp * step;
      double us = static_cast<double>(iu) / M;
      std::vector<cplx> terms(static_cast<std::size_t>(M));
      for (int iv = 0; iv < M; ++iv) {
        double v = static_cast<double>(iv) / M;
        terms[iv] = s.at(iu, iv) * std::polar(1.0, kPi * k * us * v + 2.0 * kPi * jp * v);
      }
      I[jp] = pairwise_sum(terms) / static_cast<double>(M);
    }
    for (int j0 = 0; j0 < k; ++j0) {
      cplx acc = 0.0;
      for (int jp = 0; jp < k; ++jp) acc += std::polar(1.0, 2.0 * kPi * j0 * jp / k) * I[jp];
      g.vals[j0][idx] = std::polar(1.0, -2.0 * kPi * j0 * u) * acc / static_cast<double>(k);
    }
  });
  return g;
}

QuasiPeriodicSection wgz_forward(const SampledVector& g) {
  QuasiPeriodicSection s;
  s.k = g.k;
  s.M = g.M;
  const int k = g.k, M = g.M, G = M + 1;
  const long long step = M / k;
  s.values.assign(static_cast<std::size_t>(G) * G, 0.0);
  parallel_for(static_cast<std::size_t>(G), [&](std::size_t iu) {
    double u = static_cast<double>(iu) / M;
    for (int iv = 0; iv < G; ++iv) {
      double v = static_cast<double>(iv) / M;
      std::vector<cplx> terms;
      for (int j = 0; j < k; ++j) {
        long long mlo = (g.lo - static_cast<long long>(iu)) / step - 1, mhi = (g.hi - static_cast<long long>(iu)) / step + 1;
        for (long long m = mlo; m <= mhi; ++m)
          terms.push_back(g.value(j, static_cast<long long>(iu) + m * step) *
                          std::polar(1.0, -2.0 * kPi * static_cast<double>(m) * v + 2.0 * kPi * j * u));
      }
      s.values[iu * G + iv] = std::polar(1.0, -kPi * k * u * v) * pairwise_sum(terms);
    }
  });
  return s;
}

TestVector conjugated_operator(WgzOp op, cplx b, const TestVector& f) {
  const int k = f.k;
  cplx b2 = b * b;
  if (std::abs(2.0 * b2.real() - k) > 1e-12) throw Error(ErrorKind::LevelMismatch, "k must equal 2 Re(b^2)");
  TestVector g;
  g.k = k;
  g.window = f.window + 2.0;
  auto src = f.f;
  const cplx ib2 = 1.0 / b2;
  const cplx bb2 = 1.0 / (std::conj(b) * std::conj(b));
  for (int j = 0; j < k; ++j) {
    switch (op) {
      case WgzOp::U: {
        auto fj = src[(j + 1) % k];
        g.f.push_back([fj, ib2, k](cplx u) { return std::exp(2.0 * kPi * kI * static_cast<double>(k) * ib2 * u) * fj(u); });
        break;
      }
      case WgzOp::V: {
        auto fj = src[j];
        g.f.push_back([fj, k](cplx u) { return fj(u + 1.0 / k); });
        break;
      }
      case WgzOp::Utilde: {
        auto fj = src[j];
        cplx ph = std::exp(2.0 * kPi * kI * bb2 * static_cast<double>(j));
        g.f.push_back([fj, ph, bb2, k](cplx u) { return ph * fj(u - bb2 - 1.0 / k); });
        break;
      }
      case WgzOp::Vtilde:
        g.f.push_back(src[(j + 1) % k]);
        break;
    }
  }
  return g;
}

WgzReport wgz_check(int k, int M, unsigned seed, cplx b) {
  WgzReport r;
  r.k = k;
  TestVector f = gaussian_poly_vector(k, seed);
  QuasiPeriodicSection s = wgz_forward(f, M);
  r.grid = s.M;
  // quasi-periodicity against direct evaluation off the unit square
  for (int i = 0; i < s.M; i += std::max(1, s.M / 16))
    for (int l = 0; l < s.M; l += std::max(1, s.M / 16)) {
      double u = static_cast<double>(i) / s.M, v = static_cast<double>(l) / s.M;
      r.quasi_u = std::max(r.quasi_u, std::abs(wgz_eval(f, u + 1.0, v) - std::polar(1.0, kPi * k * v) * s.grid(i, l)));
      r.quasi_v = std::max(r.quasi_v, std::abs(wgz_eval(f, u, v + 1.0) - std::polar(1.0, -kPi * k * u) * s.grid(i, l)));
    }
  SampledVector g = wgz_inverse(s, f.window);
  for (int j = 0; j < k; ++j)
    for (long long i = g.lo; i <= g.hi; ++i)
      r.roundtrip = std::max(r.roundtrip, std::abs(g.value(j, i) - f.f[j](static_cast<double>(i) / g.M)));
  QuasiPeriodicSection s2 = wgz_forward(g);
  for (std::size_t i = 0; i < s.values.size(); ++i) r.forward_inverse = std::max(r.forward_inverse, std::abs(s2.values[i] - s.values[i]));
  // operators at sample points
  TestVector vt = f;
  for (int c = 0; c < k; ++c) vt = conjugated_operator(WgzOp::Vtilde, b, vt);
  TestVector vk = f;
  for (int c = 0; c < k; ++c) vk = conjugated_operator(WgzOp::V, b, vk);
  TestVector U = conjugated_operator(WgzOp::U, b, f), V = conjugated_operator(WgzOp::V, b, f);
  TestVector VU = conjugated_operator(WgzOp::V, b, U), UV = conjugated_operator(WgzOp::U, b, V);
  TestVector Ut = conjugated_operator(WgzOp::Utilde, b, f);
  TestVector UUt = conjugated_operator(WgzOp::U, b, Ut), UtU = conjugated_operator(WgzOp::Utilde, b, U);
  const cplx ib2 = 1.0 / (b * b), bb2 = 1.0 / (std::conj(b) * std::conj(b));
  const cplx q = std::exp(2.0 * kPi * kI * ib2);
  r.vtilde_cycle_exact = true;
  for (int j = 0; j < k; ++j)
    for (double x : {-1.3, -0.2, 0.0, 0.45, 1.7}) {
      r.vtilde_cycle_exact = r.vtilde_cycle_exact && vt.f[j](x) == f.f[j](x);
      r.vk_shift = std::max(r.vk_shift, std::abs(vk.f[j](x) - f.f[j](x + 1.0)));
      r.uv_commutation = std::max(r.uv_commutation, std::abs(VU.f[j](x) - q * UV.f[j](x)));
      // U Utilde picks e^{2 pi i bb2 ((j+1) mod k)}; Utilde U picks e^{2 pi i bb2 j} and the shifted U phase
      cplx pred = std::exp(2.0 * kPi * kI * bb2 * static_cast<double>((j + 1) % k - j)) *
                  std::exp(2.0 * kPi * kI * static_cast<double>(k) * ib2 * (bb2 + 1.0 / k));
      double scale = std::max(1.0, std::abs(UUt.f[j](x)));
      r.u_utilde = std::max(r.u_utilde, std::abs(UUt.f[j](x) - pred * UtU.f[j](x)) / scale);
    }
  // plain L2 pairing ratio
  double num = 0.0;
  for (cplx v : s.values) num += std::norm(v);
  num /= static_cast<double>(s.values.size());
  double den = 0.0;
  for (int j = 0; j < k; ++j)
    for (long long i = g.lo; i <= g.hi; ++i) den += std::norm(f.f[j](static_cast<double>(i) / g.M)) / g.M;
  r.plain_l2_ratio = num / den;
  return r;
}

}  // namespace qdl

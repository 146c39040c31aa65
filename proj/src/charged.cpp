#include "qdl/charged.hpp"

#include <cmath>

#include "qdl/parallel.hpp"

namespace qdl {

ChargeTriple ChargeTriple::make(double a, double c) {
  ChargeTriple t{a, 1.0 - a - c, c};
  t.validate();
  return t;
}

void ChargeTriple::validate(double tol) const {
  if (!(a > 0 && b > 0 && c > 0)) throw Error(ErrorKind::Positivity, "charges must be strictly positive");
  if (std::abs(a + b + c - 1.0) > tol) throw Error(ErrorKind::Validation, "charges must sum to 1");
}

namespace {
double rs(const QdParams& p) { return std::sqrt(static_cast<double>(p.N)); }
cplx c2(const QdParams& p) { return p.th.c * p.th.c; }
}  // namespace

cplx psi_charged(const ChargeTriple& ch, cplx x, int n, const QdParams& p) {
  double a = ch.a / rs(p), c = ch.c / rs(p);
  const cplx ct = p.th.c;
  return std::exp(-2.0 * kPi * kI * ct * a * x) / dtheta(x - ct * (a + c), n, p);
}

cplx transform_constant(const QdParams& p) { return 1.0 / fourier_constant(p); }

namespace {

cplx inverse_closed(const ChargeTriple& ch, cplx x, int n, const QdParams& p) {
  double a = ch.a / rs(p), c = ch.c / rs(p);
  ChargeTriple cb{ch.c, ch.a, ch.b};  // psi_{c,b}
  return gaussian_exp(x, mod(n, p.N), p.N) * psi_charged(cb, x, n + p.M, p) *
         std::exp(-kPi * kI * c2(p) * a * (a + 2.0 * c)) * transform_constant(p);
}

cplx transform_quadrature(const ChargeTriple& ch, double x, int n, const QdParams& p,
                          const QuadratureSpec& spec, double sign) {
  auto f = [&](double y, int m) {
    cplx k = fourier_kernel(LcaPoint{y, m}, LcaPoint{x, mod(n, p.N)}, p.N);
    if (sign < 0) k = std::conj(k);
    return psi_charged(ch, y, m, p) * k;
  };
  QuadratureSpec s = spec;
  s.window = std::max(spec.window, 20.0);
  s.max_window = std::max(spec.max_window, 640.0);
  return haar_integrate(f, p.N, s).value;
}

}  // namespace

cplx psi_forward_transform(const ChargeTriple& ch, double x, int n, const QdParams& p,
                           const QuadratureSpec& spec, TransformPath path) {
  ch.validate();
  if (path == TransformPath::Quadrature) return transform_quadrature(ch, x, n, p, spec, +1.0);
  return inverse_closed(ch, -x, -n, p);
}

cplx psi_inverse_transform(const ChargeTriple& ch, cplx x, int n, const QdParams& p,
                           const QuadratureSpec& spec, TransformPath path) {
  ch.validate();
  if (path == TransformPath::Quadrature) {
    if (x.imag() != 0.0) throw Error(ErrorKind::Validation, "quadrature transform needs real x");
    return transform_quadrature(ch, x.real(), n, p, spec, -1.0);
  }
  return inverse_closed(ch, x, n, p);
}

ChargedResiduals charged_identity_residuals(const ChargeTriple& ch, const std::vector<ChargedSample>& samples,
                                            const QdParams& p, const QuadratureSpec& spec,
                                            bool with_quadrature) {
  ch.validate();
  const int N = p.N;
  double a = ch.a / rs(p), b = ch.b / rs(p), c = ch.c / rs(p);
  ChargeTriple ca{ch.c, ch.b, ch.a};  // psi_{c,a}
  ChargeTriple bc{ch.b, ch.a, ch.c};  // psi_{b,c}
  const cplx E = transform_constant(p);
  const cplx inv = inversion_constant(p);
  const cplx C2 = c2(p);
  std::vector<ChargedResiduals> per(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    double x = samples[i].x;
    int n = mod(samples[i].n, N);
    ChargedResiduals r;
    if (with_quadrature) {
      cplx cf = psi_forward_transform(ch, x, n, p, spec, TransformPath::ClosedForm);
      cplx qf = psi_forward_transform(ch, x, n, p, spec, TransformPath::Quadrature);
      r.f1 = std::abs(cf - qf);
    }
    LcaPoint pt{x, n};
    cplx g = gaussian_exp(pt, N);
    cplx lhs2 = std::conj(psi_charged(ch, x, n, p));
    cplx r2a = psi_charged(ca, -x, -n, p) * g * std::exp(kPi * kI * C2 * (a + c) * (a + c)) * inv;
    cplx r2b = inverse_closed(bc, -x, -n + p.M, p) *
               std::polar(1.0, 2.0 * kPi * static_cast<double>((static_cast<long long>(p.M) * n) % N) / N) *
               std::exp(-2.0 * kPi * kI * C2 * a * b) * E;
    r.f2_reflect = std::abs(lhs2 - r2a);
    r.f2_transform = std::abs(lhs2 - r2b);
    cplx lhs3 = std::conj(inverse_closed(ch, x, n, p) / g);
    cplx gM = gaussian_exp(LcaPoint{x, mod(n + p.M, N)}, N);
    cplx r3 = psi_charged(bc, -x, -n + p.M, p) * gM * std::exp(-2.0 * kPi * kI * C2 * a * b) * E;
    r.f3 = std::abs(lhs3 - r3);
    // conj psi_{c,b}(x, n+M) rewritten with the reflection identity
    cplx conj_cb = psi_charged(bc, -x, -n - p.M, p) * gM * std::exp(kPi * kI * C2 * (c + b) * (c + b)) * inv;
    cplx composed = conj_cb * std::conj(std::exp(-kPi * kI * C2 * a * (a + 2.0 * c)) * E);
    r.f3_paths = std::abs(composed - r3);
    per[i] = r;
  });
  ChargedResiduals out;
  for (auto& r : per) {
    out.f1 = std::max(out.f1, r.f1);
    out.f2_reflect = std::max(out.f2_reflect, r.f2_reflect);
    out.f2_transform = std::max(out.f2_transform, r.f2_transform);
    out.f3 = std::max(out.f3, r.f3);
    out.f3_paths = std::max(out.f3_paths, r.f3_paths);
  }
  return out;
}

cplx psi_normalization(const ChargeTriple& ch, const QdParams& p) {
  double a = ch.a / rs(p), c = ch.c / rs(p);
  return std::exp(kPi * kI * c2(p) * a * (a + c));
}

cplx kernel_profile(const ChargeTriple& ch, cplx y, int m, const QdParams& p) {
  return std::conj(inverse_closed(ch, -y, -m, p) * psi_normalization(ch, p));
}

cplx weight_kernel(const WeightKernelParams& w, LcaPoint x, LcaPoint y, const QuadratureSpec& spec,
                   BSumResult* info) {
  const int N = w.params.N;
  const double s = std::sqrt(static_cast<double>(N));
  w.charges.validate();
  LcaPoint mx = sub(w.mu, x, N);
  auto term = [&](LcaPoint q) {
    long long k = std::llround((q.x - y.x) * s);
    LcaPoint kb = scale(b_generator(N), k, N);
    double sg = (k % 2 == 0) ? 1.0 : -1.0;
    return kernel_profile(w.charges, q.x, q.n, w.params) * sg * fourier_kernel(kb, mx, N);
  };
  BSumResult r = b_sum(term, y, N, spec);
  if (info) *info = r;
  return fourier_kernel(x, neg(half(y, N), N), N) * r.value;
}

KernelGrid::KernelGrid(const ChargeTriple& ch, const QdParams& p, int M, const QuadratureSpec& spec)
    : M_(M), N_(p.N) {
  if (M < 8) throw Error(ErrorKind::Validation, "kernel grid needs M >= 8");
  ch.validate();
  const double s = std::sqrt(static_cast<double>(N_));
  h_ = s / M;
  table_.assign(static_cast<std::size_t>(M) * M, cplx(0.0));
  const double h = h_;
  const int N = N_;
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t iy) {
    double y = static_cast<double>(iy) * h;
    // K(y + k b0) (-1)^k for k >= 0 and k < 0, cut at a relative tail
    std::vector<cplx> pos, negs;
    double big = 0.0;
    auto grow = [&](int dir, std::vector<cplx>& out) {
      int quiet = 0;
      for (long long k = (dir > 0 ? 0 : -1);; k += dir) {
        if (std::llabs(k) > spec.bsum_max) throw Error(ErrorKind::NonConvergent, "kernel grid: B-sum limit reached");
        double sg = (k % 2 == 0) ? 1.0 : -1.0;
        cplx v = kernel_profile(ch, y + static_cast<double>(k) / s, mod(k, N), p) * sg;
        out.push_back(v);
        big = std::max(big, std::abs(v));
        if (out.size() % static_cast<std::size_t>(N) == 0) {
          double blk = 0.0;
          for (std::size_t i = out.size() - N; i < out.size(); ++i) blk = std::max(blk, std::abs(out[i]));
          if (blk <= spec.bsum_tol * big) {
            if (++quiet >= 2) return;
          } else {
            quiet = 0;
          }
        }
      }
    };
    grow(+1, pos);
    grow(-1, negs);
    std::vector<cplx> terms(pos.size() + negs.size());
    for (int ix = 0; ix < M; ++ix) {
      double x = static_cast<double>(ix) * h;
      std::size_t t = 0;
      for (std::size_t i = negs.size(); i-- > 0;) {
        double k = -static_cast<double>(i + 1);
        terms[t++] = negs[i] * std::polar(1.0, -2.0 * kPi * k * x / s);
      }
      for (std::size_t i = 0; i < pos.size(); ++i) {
        double k = static_cast<double>(i);
        terms[t++] = pos[i] * std::polar(1.0, -2.0 * kPi * k * x / s);
      }
      table_[static_cast<std::size_t>(ix) * M + iy] = std::polar(1.0, -kPi * x * y) * pairwise_sum(terms);
    }
  });
}

cplx KernelGrid::operator()(long long ix, long long iy) const {
  const long long M = M_;
  long long qx = ix >= 0 ? ix / M : -((-ix + M - 1) / M);
  long long rx = ix - qx * M;
  long long qy = iy >= 0 ? iy / M : -((-iy + M - 1) / M);
  long long ry = iy - qy * M;
  // phase in units of pi/M, reduced mod 2M
  long long twoM = 2 * M;
  auto md = [&](long long v) {
    long long r = v % twoM;
    return r < 0 ? r + twoM : r;
  };
  long long ph = md(md(-iy * N_ % twoM * md(qx)) + md(rx * N_ % twoM * md(qy)) + md(M * N_ % twoM * md(qy)));
  cplx v = table_[static_cast<std::size_t>(rx) * M_ + static_cast<std::size_t>(ry)];
  if (ph == 0) return v;
  return v * std::polar(1.0, kPi * static_cast<double>(ph) / static_cast<double>(M));
}

}  // namespace qdl

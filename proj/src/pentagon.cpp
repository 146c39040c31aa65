#include "qdl/pentagon.hpp"

#include <algorithm>
#include <cmath>

#include "qdl/parallel.hpp"

namespace qdl {

double PentagonCharges::condition_residual() const {
  const auto& s = t;
  double r = 0.0;
  r = std::max(r, std::abs(s[1].a - s[0].a - s[2].a));
  r = std::max(r, std::abs(s[3].a - s[2].a - s[4].a));
  r = std::max(r, std::abs(s[1].c - s[0].c - s[4].a));
  r = std::max(r, std::abs(s[3].c - s[0].a - s[4].c));
  r = std::max(r, std::abs(s[2].c - s[1].c - s[3].c));
  return r;
}

std::array<LcaPoint, 5> PentagonCharges::mus(int N) const {
  LcaPoint ab = add(alpha, beta, N);
  return {alpha, alpha, ab, beta, beta};
}

FeasibleInterval pentagon_interval(const ChargeTriple& t1, const ChargeTriple& t3) {
  double lo = std::max({0.0, t1.a - t3.a, t1.a + t1.c + t3.c - 1.0});
  double hi = std::min({t1.a, t3.c, t1.c + t1.a - t3.a});
  return {lo, hi};
}

PentagonCharges solve_pentagon_charges(const ChargeTriple& t1, const ChargeTriple& t3, std::optional<double> a0opt) {
  t1.validate();
  t3.validate();
  FeasibleInterval iv = pentagon_interval(t1, t3);
  // b0 = 1 - c1 + a3 - a1 and b4 = 1 - a3 + a1 - c3 do not depend on a0
  if (!(iv.lo < iv.hi) || !(1.0 - t1.c + t3.a - t1.a > 0) || !(1.0 - t3.a + t1.a - t3.c > 0))
    throw Error(ErrorKind::Infeasible, "pentagon charge interval is empty");
  double a0 = a0opt ? *a0opt : 0.5 * (iv.lo + iv.hi);
  if (!(a0 > iv.lo && a0 < iv.hi)) throw Error(ErrorKind::Infeasible, "free charge outside the feasibility interval");
  double a1 = t1.a, c1 = t1.c, a3 = t3.a, c3 = t3.c;
  double a2 = a1 - a0, a4 = a3 - a2, c0 = c1 - a4, c4 = c3 - a0, c2 = c1 + c3;
  PentagonCharges pc;
  pc.t[0] = {a0, 1.0 - a0 - c0, c0};
  pc.t[1] = t1;
  pc.t[2] = {a2, 1.0 - a2 - c2, c2};
  pc.t[3] = t3;
  pc.t[4] = {a4, 1.0 - a4 - c4, c4};
  for (const auto& x : pc.t) x.validate(1e-12);
  return pc;
}

namespace {
double rel(cplx l, cplx r) {
  double d = std::abs(l) + std::abs(r);
  return d == 0.0 ? 0.0 : std::abs(l - r) / d;
}
}  // namespace

PentagonReport check_charged_beta_pentagon(const PentagonCharges& pc, const std::vector<BetaSample>& samples,
                                           const QdParams& p, const QuadratureSpec& spec) {
  const int N = p.N;
  const int M = spec.grid;
  if (M < 8 || M % 2) throw Error(ErrorKind::Validation, "pentagon grid must be even and >= 8");
  auto mu = pc.mus(N);
  std::array<WeightKernelParams, 5> w;
  for (int j = 0; j < 5; ++j) w[j] = {pc.t[j], mu[j], p};
  auto W = [&](int j, LcaPoint a, LcaPoint b) { return weight_kernel(w[j], a, b, spec); };
  const double s = std::sqrt(static_cast<double>(N));
  auto integrand = [&](const BetaSample& q, LcaPoint z) {
    LcaPoint a4 = add(q.u, q.y, N), b4 = sub(q.v, z, N);
    LcaPoint a2 = sub(add(add(q.x, q.y, N), add(q.u, q.v, N), N), z, N);
    LcaPoint a0 = add(q.x, q.v, N), b0 = sub(q.y, z, N);
    return W(4, a4, b4) * W(2, a2, z) * W(0, a0, b0);
  };
  PentagonReport rep;
  rep.grid = M;
  rep.residuals.assign(samples.size(), 0.0);
  std::vector<double> coarse(samples.size()), shift(samples.size()), signed_res(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& q = samples[i];
    cplx lhs = W(1, q.x, q.y) * W(3, q.u, q.v);
    std::vector<cplx> vals(static_cast<std::size_t>(M));
    parallel_for(vals.size(), [&](std::size_t k) { vals[k] = integrand(q, LcaPoint{static_cast<double>(k) * s / M, 0}); });
    std::vector<cplx> even;
    for (int k = 0; k < M; k += 2) even.push_back(vals[static_cast<std::size_t>(k)]);
    cplx fine = pairwise_sum(vals) / static_cast<double>(M);
    cplx crs = pairwise_sum(even) / static_cast<double>(M / 2);
    rep.residuals[i] = rel(lhs, fine);
    coarse[i] = rel(lhs, crs);
    signed_res[i] = std::min(rep.residuals[i], rel(-lhs, fine));
    double sh = 0.0;
    for (double t : {0.1, 0.37 * s, 0.81 * s}) {
      LcaPoint z{t, 0};
      cplx a = integrand(q, z), b = integrand(q, add(z, b_generator(N), N));
      sh = std::max(sh, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
    shift[i] = sh;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    rep.max_residual = std::max(rep.max_residual, rep.residuals[i]);
    rep.coarse_max_residual = std::max(rep.coarse_max_residual, coarse[i]);
    rep.bshift = std::max(rep.bshift, shift[i]);
    rep.max_residual_up_to_sign = std::max(rep.max_residual_up_to_sign, signed_res[i]);
  }
  return rep;
}

std::array<AFunction, 5> faddeev_type_functions(const PentagonCharges& pc, const QdParams& p) {
  std::array<AFunction, 5> f;
  QuadratureSpec unused;
  for (int j = 0; j < 5; ++j) {
    ChargeTriple ch = pc.t[j];
    cplx nrm = psi_normalization(ch, p);
    f[j] = [ch, nrm, p, unused](double x, int n) {
      return std::conj(psi_inverse_transform(ch, x, n, p, unused, TransformPath::ClosedForm) * nrm);
    };
  }
  return f;
}

PentagonReport check_five_term(const std::array<AFunction, 5>& f, const std::vector<PairSample>& samples,
                               const QdParams& p, const QuadratureSpec& spec) {
  const int N = p.N;
  PentagonReport rep;
  if (spec.grid < 8 || spec.grid % 2) throw Error(ErrorKind::Validation, "five-term grid must be even and >= 8");
  QuadratureSpec s = spec;
  s.window = std::max(spec.window, 20.0);
  s.max_window = std::max(spec.max_window, 640.0);
  s.step = 4.0 / spec.grid;
  QuadratureSpec sc = s;
  sc.step = 2.0 * s.step;
  rep.grid = spec.grid;
  for (const auto& q : samples) {
    cplx lhs = f[1](q.x.x, q.x.n) * f[3](q.y.x, q.y.n);
    auto g = [&](double z, int k) {
      return f[4](q.y.x - z, mod(q.y.n - k, N)) * f[2](z, k) * f[0](q.x.x - z, mod(q.x.n - k, N)) *
             gaussian_exp(LcaPoint{z, k}, N);
    };
    cplx rhs = std::conj(fourier_kernel(q.x, q.y, N)) * haar_integrate(g, N, s).value;
    cplx crs = std::conj(fourier_kernel(q.x, q.y, N)) * haar_integrate(g, N, sc).value;
    double r = rel(lhs, rhs);
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
    rep.coarse_max_residual = std::max(rep.coarse_max_residual, rel(lhs, crs));
  }
  return rep;
}

PentagonReport check_faddeev_type(const PentagonCharges& pc, const std::vector<PairSample>& samples,
                                  const QdParams& p, const QuadratureSpec& spec) {
  return check_five_term(faddeev_type_functions(pc, p), samples, p, spec);
}

PentagonReport check_faddeev_type_gaussian_control(const std::vector<PairSample>& samples, const QdParams& p,
                                                   const QuadratureSpec& spec) {
  AFunction g = [](double x, int) { return cplx(std::exp(-kPi * x * x)); };
  return check_five_term({g, g, g, g, g}, samples, p, spec);
}

}  // namespace qdl

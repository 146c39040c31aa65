#include "qdl/faddeev.hpp"

#include <cmath>
#include <limits>

namespace qdl {

Theta Theta::from_arg(double arg, double floor) {
  if (!(arg > 0.0 && arg < 0.5))
    throw Error(ErrorKind::Validation, "theta argument must lie in (0, 1/2) in units of pi");
  Theta t;
  t.arg = arg;
  t.theta = std::polar(1.0, kPi * arg);
  cplx th2 = t.theta * t.theta;
  if (th2.imag() < floor)
    throw Error(ErrorKind::SlowConvergence, "Im theta^2 below the convergence floor");
  t.q = std::exp(2.0 * kPi * kI * th2);
  t.qt = std::exp(-2.0 * kPi * kI / th2);
  t.c = kI * (t.theta + 1.0 / t.theta) / 2.0;
  return t;
}

namespace {

struct Poch {
  cplx value;
  double tail;
  int terms;
};

// (x; q)_inf
Poch qpoch(cplx x, cplx q, const PhiOptions& opt) {
  double aq = std::abs(q);
  cplx p = 1.0, t = x;
  int k = 0;
  for (;; ++k) {
    if (k > opt.max_terms) throw Error(ErrorKind::SlowConvergence, "q-Pochhammer product did not converge");
    double at = std::abs(t);
    if (at < opt.tol) break;
    p *= 1.0 - t;
    t *= q;
  }
  return {p, 2.0 * std::abs(t) / (1.0 - aq), k};
}

PhiResult direct(cplx z, const Theta& t, const PhiOptions& opt) {
  Poch a = qpoch(std::exp(2.0 * kPi * t.theta * (z + t.c)), t.q, opt);
  Poch b = qpoch(std::exp(2.0 * kPi / t.theta * (z - t.c)), t.qt, opt);
  return {a.value / b.value, a.tail + b.tail, a.terms + b.terms};
}

}  // namespace

cplx phi_zero(const Theta& t) { return std::exp(-kPi * kI * (1.0 + 2.0 * t.c * t.c) / 12.0); }

double pole_distance(cplx z, const Theta& t) {
  double best = std::numeric_limits<double>::infinity();
  double step = t.theta.real();  // Im of i theta = Im of i theta^{-1} = Re theta
  double reach = z.imag() + 1.0;
  if (t.c.imag() > reach) return std::abs(z - t.c);
  int kmax = static_cast<int>((reach - t.c.imag()) / step) + 1;
  for (int m = 0; m <= kmax; ++m)
    for (int k = 0; k + m <= kmax; ++k) {
      cplx p = t.c + kI * t.theta * static_cast<double>(m) + kI / t.theta * static_cast<double>(k);
      best = std::min(best, std::abs(z - p));
    }
  return best;
}

bool near_pole(cplx z, const Theta& t, double dist) {
  if (z.imag() < t.c.imag() - dist) return false;
  return pole_distance(z, t) < dist;
}

PhiResult phi_theta_ex(cplx z, const Theta& t, const PhiOptions& opt) {
  if (near_pole(z, t, opt.pole_dist)) throw Error(ErrorKind::PoleProximity, "argument within pole distance");
  if (z.real() <= 0.0) return direct(z, t, opt);
  // zeros of Phi(-z) sit at the poles of Phi(z), already excluded
  PhiResult r = direct(-z, t, opt);
  cplx p0 = phi_zero(t);
  r.value = std::exp(kPi * kI * z * z) * p0 * p0 / r.value;
  return r;
}

cplx phi_theta(cplx z, const Theta& t) { return phi_theta_ex(z, t).value; }

}  // namespace qdl

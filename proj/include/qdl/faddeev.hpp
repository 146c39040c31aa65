#pragma once

#include "qdl/lca.hpp"

namespace qdl {

// Unit-modulus deformation parameter theta = e^{i pi arg}, 0 < arg < 1/2.
struct Theta {
  double arg = 1.0 / 3.0;
  cplx theta, q, qt, c;

  // Rejects arg outside (0, 1/2) and Im theta^2 below floor.
  static Theta from_arg(double arg, double floor = 0.05);
};

struct PhiResult {
  cplx value;
  double error = 0.0;  // bound on the neglected product tails, relative
  int terms = 0;
};

struct PhiOptions {
  double tol = 1e-17;        // cut once |x q^k| < tol
  double pole_dist = 1e-9;   // PoleProximity threshold
  int max_terms = 100000;
};

// Faddeev's function as a ratio of two q-Pochhammer products; for Re z > 0
// the inversion relation is used to keep the products well scaled.
PhiResult phi_theta_ex(cplx z, const Theta& t, const PhiOptions& opt = {});
cplx phi_theta(cplx z, const Theta& t);

// e^{-pi i (1 + 2 c^2)/12}
cplx phi_zero(const Theta& t);

// Distance from z to the pole lattice c + i theta m + i theta^{-1} k, m,k >= 0.
double pole_distance(cplx z, const Theta& t);
bool near_pole(cplx z, const Theta& t, double dist);

}  // namespace qdl

#pragma once

#include <functional>
#include <vector>

#include "qdl/lca.hpp"

namespace qdl {

// k components, each a rapidly decaying function on R that can be evaluated
// at complex arguments (needed by the shifted operators).
struct TestVector {
  int k = 1;
  std::vector<std::function<cplx(cplx)>> f;
  double window = 8.0;  // tails below 1e-12 outside [-window, window]

  void validate() const;
};

// Gaussian times a random cubic per component.
TestVector gaussian_poly_vector(int k, unsigned seed);

// Samples of a section on [0,1]^2 with step 1/M, wraparound row and column kept.
struct QuasiPeriodicSection {
  int k = 1;
  int M = 0;
  std::vector<cplx> values;  // (M+1) x (M+1), index iu*(M+1)+iv

  cplx grid(int iu, int iv) const { return values[static_cast<std::size_t>(iu) * (M + 1) + iv]; }
  // Any lattice point (iu/M, iv/M), through the multipliers.
  cplx at(long long iu, long long iv) const;
  // Max over the wraparound row/column of the multiplier mismatch.
  double wrap_defect() const;
};

// Direct value of the transform at (u, v).
cplx wgz_eval(const TestVector& f, double u, double v);

// M is raised to the next multiple of k.
int wgz_grid(int M, int k);
QuasiPeriodicSection wgz_forward(const TestVector& f, int M);

// Components sampled on the lattice i/M, i in [lo, hi].
struct SampledVector {
  int k = 1;
  int M = 0;
  long long lo = 0, hi = 0;
  std::vector<std::vector<cplx>> vals;

  cplx value(int j, long long i) const;
};

SampledVector wgz_inverse(const QuasiPeriodicSection& s, double window, double tol = 1e-9);
QuasiPeriodicSection wgz_forward(const SampledVector& g);

enum class WgzOp { U, V, Utilde, Vtilde };

// Componentwise formulas for the conjugated operators; requires k = 2 Re(b^2).
TestVector conjugated_operator(WgzOp op, cplx b, const TestVector& f);

struct WgzReport {
  int k = 0;
  int grid = 0;
  double roundtrip = 0.0;           // sup |W^{-1} W f - f| on the window lattice
  double forward_inverse = 0.0;     // sup |W W^{-1} s - s| on the grid
  double quasi_u = 0.0, quasi_v = 0.0;
  bool vtilde_cycle_exact = false;  // Vtilde^k f == f bitwise at sample points
  double vk_shift = 0.0;            // V^k f vs f(u + 1)
  double uv_commutation = 0.0;      // VU f vs e^{2 pi i b^{-2}} UV f
  double u_utilde = 0.0;            // U Utilde f vs predicted diagonal times Utilde U f
  double plain_l2_ratio = 0.0;      // ||Wf||^2 on the torus over sum ||f_j||^2, reported only
};

WgzReport wgz_check(int k, int M, unsigned seed, cplx b);

}  // namespace qdl

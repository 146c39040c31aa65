#pragma once

#include "qdl/faddeev.hpp"

namespace qdl {

struct QdParams {
  Theta th;
  int N = 1;
  int M = 0;  // epsilon = (0, M) of order two

  // Requires 2M = 0 mod N, and M = 0 unless 8 | N.
  void validate() const;
  static QdParams make(double theta_arg, int N, int M = 0);
};

// Product of N Faddeev factors with fractional-part shifts; x may be complex.
cplx dtheta(cplx x, int n, const QdParams& p);
// Same product with every factor argument complex-conjugated; for real x the
// conjugated arguments are a reindexing of the originals.
cplx dtheta_conjugate_form(double x, int n, const QdParams& p);

// e^{-pi i (N + 2 c^2 / N) / 6}
cplx inversion_constant(const QdParams& p);
// e^{pi i (N - 4 c^2 / N) / 12}
cplx fourier_constant(const QdParams& p);

double inversion_residual(double x, int n, const QdParams& p);

struct FourierCheck {
  cplx lhs, rhs;
  double residual = 0.0;
  double quad_error = 0.0;
};

// Integral of D(x,m) <y,n; x,m>^{-1} over A along Im x = delta, regularized by
// subtracting 1/(1+e^{2 pi x}) per residue and adding its transform back.
FourierCheck fourier_formula_check(double y, int n, const QdParams& p, const QuadratureSpec& spec,
                                   double delta = -1.0);
double fourier_formula_residual(double y, int n, const QdParams& p, const QuadratureSpec& spec);

}  // namespace qdl

#pragma once

#include <vector>

#include "qdl/qdilog.hpp"

namespace qdl {

// Shape angles in units of pi, a + b + c = 1, all strictly positive.
struct ChargeTriple {
  double a = 1.0 / 3.0, b = 1.0 / 3.0, c = 1.0 / 3.0;

  static ChargeTriple make(double a, double c);  // b = 1 - a - c
  void validate(double tol = 1e-12) const;
};

// psi(x,n) = e^{-2 pi i c_theta a x} / D(x - c_theta (a + c), n), charges scaled by N^{-1/2}
cplx psi_charged(const ChargeTriple& ch, cplx x, int n, const QdParams& p);

// e^{-pi i (N - 4 c^2/N)/12}
cplx transform_constant(const QdParams& p);

enum class TransformPath { ClosedForm, Quadrature };

// Forward transform int psi(y,m) <y,m; x,n> d(y,m).
cplx psi_forward_transform(const ChargeTriple& ch, double x, int n, const QdParams& p,
                           const QuadratureSpec& spec, TransformPath path);
// Inverse transform int psi(y,m) <y,m; x,n>^{-1} d(y,m).
cplx psi_inverse_transform(const ChargeTriple& ch, cplx x, int n, const QdParams& p,
                           const QuadratureSpec& spec, TransformPath path);

struct ChargedResiduals {
  double f1 = 0.0;           // closed form vs quadrature, forward transform
  double f2_reflect = 0.0;   // conj psi against psi_{c,a}(-x,-n)
  double f2_transform = 0.0; // conj psi against the transform of psi_{b,c}
  double f3 = 0.0;           // conj of the transform against psi_{b,c}(-x,-n+M)
  double f3_paths = 0.0;     // f3 right side directly vs through f1 and f2
};

struct ChargedSample {
  double x;
  int n;
};

ChargedResiduals charged_identity_residuals(const ChargeTriple& ch, const std::vector<ChargedSample>& samples,
                                            const QdParams& p, const QuadratureSpec& spec,
                                            bool with_quadrature = true);

// e^{pi i c^2 a (a + c)} with scaled charges: normalization used for the
// pentagon and for the weight kernel.
cplx psi_normalization(const ChargeTriple& ch, const QdParams& p);

// y -> conj(F psi_hat)(y, m): the function summed over B in the weight kernel.
cplx kernel_profile(const ChargeTriple& ch, cplx y, int m, const QdParams& p);

struct WeightKernelParams {
  ChargeTriple charges;
  LcaPoint mu;
  QdParams params;
};

// W(x,y) = <x; -y/2> sum_k K(y + k b0) (-1)^k <k b0; mu - x>
cplx weight_kernel(const WeightKernelParams& w, LcaPoint x, LcaPoint y, const QuadratureSpec& spec,
                   BSumResult* info = nullptr);

// W on the lattice (i h, 0), h = sqrt(N)/M, for mu = 0. Values for indices
// outside [0, M) come from the sqrt(N) automorphy phases.
class KernelGrid {
 public:
  KernelGrid(const ChargeTriple& ch, const QdParams& p, int M, const QuadratureSpec& spec);
  cplx operator()(long long ix, long long iy) const;
  int size() const { return M_; }

 private:
  int M_;
  int N_;
  double h_;
  std::vector<cplx> table_;  // row-major [ix][iy]
};

}  // namespace qdl

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "qdl/charged.hpp"

namespace qdl {

struct PentagonCharges {
  std::array<ChargeTriple, 5> t;
  LcaPoint alpha, beta;

  // a1 = a0 + a2, a3 = a2 + a4, c1 = c0 + a4, c3 = a0 + c4, c2 = c1 + c3
  double condition_residual() const;
  std::array<LcaPoint, 5> mus(int N) const;
};

struct FeasibleInterval {
  double lo, hi;
};

FeasibleInterval pentagon_interval(const ChargeTriple& t1, const ChargeTriple& t3);
// a0 defaults to the midpoint of the open feasibility interval.
PentagonCharges solve_pentagon_charges(const ChargeTriple& t1, const ChargeTriple& t3,
                                       std::optional<double> a0 = std::nullopt);

struct BetaSample {
  LcaPoint x, y, u, v;
};

struct PentagonReport {
  std::vector<double> residuals;  // relative, per sample
  double max_residual = 0.0;
  double coarse_max_residual = 0.0;  // same at half the grid
  double bshift = 0.0;               // integrand change under z -> z + b0, relative
  double max_residual_up_to_sign = 0.0;  // beta pentagon only: min over lhs and -lhs
  int grid = 0;
};

PentagonReport check_charged_beta_pentagon(const PentagonCharges& pc, const std::vector<BetaSample>& samples,
                                           const QdParams& p, const QuadratureSpec& spec);

struct PairSample {
  LcaPoint x, y;
};

using AFunction = std::function<cplx(double x, int n)>;

// f1(x) f3(y) against <x;-y> int f4(y-z) f2(z) f0(x-z) <z> dz, relative residual.
// Trapezoid step 4/spec.grid on R; coarse_max_residual uses twice the step.
PentagonReport check_five_term(const std::array<AFunction, 5>& f, const std::vector<PairSample>& samples,
                               const QdParams& p, const QuadratureSpec& spec);

// The functions entering the five-term check: conj of the inverse transform
// of e^{pi i c^2 a(a+c)} psi_j.
std::array<AFunction, 5> faddeev_type_functions(const PentagonCharges& pc, const QdParams& p);

PentagonReport check_faddeev_type(const PentagonCharges& pc, const std::vector<PairSample>& samples,
                                  const QdParams& p, const QuadratureSpec& spec);

// Negative control: all five functions replaced by e^{-pi x^2}.
PentagonReport check_faddeev_type_gaussian_control(const std::vector<PairSample>& samples, const QdParams& p,
                                                   const QuadratureSpec& spec);

}  // namespace qdl

#pragma once

#include <vector>

#include "qdl/triangulation.hpp"

namespace qdl {

struct PartitionSpec {
  int M = 128;            // grid points per edge, power of 2
  double target = 1e-3;   // allowed relative M vs M/2 change
  QuadratureSpec quad;    // B-sum and product tolerances for the kernels
};

struct PartitionResult {
  cplx Z;
  cplx Z_half;
  int grid = 0;
  int internal_edges = 0;
  double error_estimate = 0.0;  // |Z_M - Z_{M/2}| / |Z_M|
};

// Edge states: one circle variable per edge class, in [0, sqrt N).
cplx boltzmann_weight(const ShapedTriangulation& X, int tet, const std::vector<double>& state,
                      const QuadratureSpec& spec);
// Product of all Boltzmann weights.
cplx boltzmann_product(const ShapedTriangulation& X, const std::vector<double>& state, const QuadratureSpec& spec);

// Periodic trapezoid over the internal edges (boundary edges held at 0).
// Throws NonConvergent when error_estimate exceeds spec.target.
PartitionResult partition_function(const ShapedTriangulation& X, const PartitionSpec& spec, bool enforce_target = true);

struct ConvergenceRow {
  int M;
  cplx Z;
  double delta;  // |Z_M - Z_prev| / |Z_M|, 0 for the first row
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool geometric = false;  // deltas strictly decreasing
};

ConvergenceReport convergence_report(const ShapedTriangulation& X, const std::vector<int>& ladder,
                                     const QuadratureSpec& quad);

}  // namespace qdl

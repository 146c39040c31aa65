#include "qdl/partition.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <tuple>

#include "qdl/parallel.hpp"

namespace qdl {

namespace {

QdParams params_of(const ShapedTriangulation& X) { return QdParams::make(X.theta_arg, X.N, 0); }

std::array<double, 2> kernel_args(const ShapedTriangulation& X, int t, const std::vector<double>& s) {
  auto x = [&](int u, int v) { return s[X.edge_class[t][edge_index(u, v)]]; };
  return {x(0, 1) + x(2, 3) - x(0, 3) - x(1, 2), x(0, 3) + x(1, 2) - x(0, 2) - x(1, 3)};
}

}  // namespace

cplx boltzmann_weight(const ShapedTriangulation& X, int t, const std::vector<double>& state, const QuadratureSpec& spec) {
  if (static_cast<int>(state.size()) != X.num_edges) throw Error(ErrorKind::Validation, "state needs one value per edge");
  auto [u, v] = kernel_args(X, t, state);
  WeightKernelParams w{X.tets[t].angles, {0.0, 0}, params_of(X)};
  cplx b = weight_kernel(w, {u, 0}, {v, 0}, spec);
  return X.tets[t].sign > 0 ? b : std::conj(b);
}

cplx boltzmann_product(const ShapedTriangulation& X, const std::vector<double>& state, const QuadratureSpec& spec) {
  cplx p = 1.0;
  for (int t = 0; t < static_cast<int>(X.tets.size()); ++t) p *= boltzmann_weight(X, t, state, spec);
  return p;
}

namespace {

struct TetPlan {
  const KernelGrid* grid;
  int sign;
  std::array<int, 6> edge;  // edge class per local edge
};

// sum over the grid with stride (1 for M, 2 for M/2), normalized by points
cplx torus_sum(const std::vector<TetPlan>& plan, const std::vector<int>& internal, int num_edges, int M, int stride) {
  const int E = static_cast<int>(internal.size());
  const int m = M / stride;
  if (E == 0) {
    std::vector<long long> idx(num_edges, 0);
    cplx p = 1.0;
    for (const auto& tp : plan) {
      cplx v = (*tp.grid)(0, 0);
      p *= tp.sign > 0 ? v : std::conj(v);
    }
    return p;
  }
  long long inner = 1;
  for (int e = 1; e < E; ++e) inner *= m;
  std::vector<cplx> rows(static_cast<std::size_t>(m));
  parallel_for(rows.size(), [&](std::size_t r) {
    std::vector<long long> idx(num_edges, 0);
    std::vector<cplx> vals(static_cast<std::size_t>(inner));
    for (long long f = 0; f < inner; ++f) {
      idx[internal[0]] = static_cast<long long>(r) * stride;
      long long rest = f;
      for (int e = E - 1; e >= 1; --e) {
        idx[internal[e]] = (rest % m) * stride;
        rest /= m;
      }
      cplx p = 1.0;
      for (const auto& tp : plan) {
        auto x = [&](int u, int v) { return idx[tp.edge[edge_index(u, v)]]; };
        cplx w = (*tp.grid)(x(0, 1) + x(2, 3) - x(0, 3) - x(1, 2), x(0, 3) + x(1, 2) - x(0, 2) - x(1, 3));
        p *= tp.sign > 0 ? w : std::conj(w);
      }
      vals[static_cast<std::size_t>(f)] = p;
    }
    rows[r] = pairwise_sum(vals);
  });
  double pts = std::pow(static_cast<double>(m), E);
  return pairwise_sum(rows) / pts;
}

}  // namespace

PartitionResult partition_function(const ShapedTriangulation& X, const PartitionSpec& spec, bool enforce_target) {
  const int M = spec.M;
  if (M < 8 || (M & (M - 1)) != 0) throw Error(ErrorKind::Validation, "grid must be a power of 2, at least 8");
  PartitionResult res;
  res.grid = M;
  if (X.tets.empty()) {
    res.Z = res.Z_half = 1.0;
    return res;
  }
  QdParams p = params_of(X);
  std::vector<int> internal;
  for (int e = 0; e < X.num_edges; ++e)
    if (!X.edge_boundary[e]) internal.push_back(e);
  res.internal_edges = static_cast<int>(internal.size());
  if (internal.size() > 4) throw Error(ErrorKind::Validation, "torus quadrature limited to 4 internal edges");
  std::map<std::tuple<double, double, double>, std::unique_ptr<KernelGrid>> grids;
  std::vector<TetPlan> plan;
  for (int t = 0; t < static_cast<int>(X.tets.size()); ++t) {
    const auto& a = X.tets[t].angles;
    auto key = std::make_tuple(a.a, a.b, a.c);
    auto& g = grids[key];
    if (!g) g = std::make_unique<KernelGrid>(a, p, M, spec.quad);
    plan.push_back({g.get(), X.tets[t].sign, X.edge_class[t]});
  }
  res.Z = torus_sum(plan, internal, X.num_edges, M, 1);
  res.Z_half = torus_sum(plan, internal, X.num_edges, M, 2);
  double den = std::abs(res.Z);
  res.error_estimate = den > 0 ? std::abs(res.Z - res.Z_half) / den : std::abs(res.Z - res.Z_half);
  if (enforce_target && res.error_estimate > spec.target)
    throw Error(ErrorKind::NonConvergent, "partition function: M vs M/2 change exceeds target");
  return res;
}

ConvergenceReport convergence_report(const ShapedTriangulation& X, const std::vector<int>& ladder,
                                     const QuadratureSpec& quad) {
  if (ladder.size() < 3) throw Error(ErrorKind::Validation, "convergence ladder needs at least 3 grid sizes");
  ConvergenceReport rep;
  cplx prev = 0.0;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    PartitionSpec s;
    s.M = ladder[k];
    s.quad = quad;
    cplx z = partition_function(X, s, false).Z;
    double d = k == 0 ? 0.0 : std::abs(z - prev) / std::max(std::abs(z), 1e-300);
    rep.rows.push_back({ladder[k], z, d});
    prev = z;
  }
  rep.geometric = true;
  for (std::size_t k = 2; k < rep.rows.size(); ++k)
    rep.geometric = rep.geometric && rep.rows[k].delta < rep.rows[k - 1].delta;
  return rep;
}

}  // namespace qdl

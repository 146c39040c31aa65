#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qdl {

// Global worker count; 1 runs everything on the calling thread.
void set_threads(int n);
int threads();

// Runs fn(i) for i in [0, n). Each i must write only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Fixed-tree pairwise sum; result depends only on the input order.
std::complex<double> pairwise_sum(const std::complex<double>* v, std::size_t n);
inline std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v) {
  return pairwise_sum(v.data(), v.size());
}
double pairwise_sum(const double* v, std::size_t n);

}  // namespace qdl

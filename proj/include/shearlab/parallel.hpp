#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace shearlab {

// Worker count: explicit setting, else SHEARLAB_THREADS, else hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n) over contiguous chunks, one per worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise (tree) summation in index order; reproducible for a fixed input.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace shearlab

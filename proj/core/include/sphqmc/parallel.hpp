#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace sphqmc {

// Number of worker threads used by the library; 0 selects hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for every i in [0, n). Work is distributed dynamically, so body must
// write only to slots owned by i. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Compensated sum of a contiguous range.
double compensated_sum(std::span<const double> values);

// Sum of f(i) over [0, n). The grouping into fixed-size blocks and the pairwise
// combination of block sums do not depend on the thread count, so the result is
// bitwise reproducible.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& f);

// Same, for a contiguous array of partial results.
double pairwise_sum(std::span<const double> values);

}  // namespace sphqmc

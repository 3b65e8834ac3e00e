#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace dpp {

/// Global worker-thread count used by parallel_for. 1 = sequential.
void set_thread_count(int n);
int thread_count();

/// Parallel loop over [0, n). Work is split into a fixed number of chunks
/// independent of the thread count, so any chunk-wise reduction combined in
/// chunk order yields identical results for every thread setting.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk_fn);

/// Chunk-wise max reduction over [0, n). `fn(i)` must be pure.
double parallel_max(std::size_t n, const std::function<double(std::size_t)>& fn);

} // namespace dpp

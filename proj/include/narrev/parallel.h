// Copyright 2026 The Narrev Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NARREV_PARALLEL_H_
#define NARREV_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace narrev {

// Number of workers to use when the caller asks for `requested` (0 = auto).
inline size_t ResolveWorkers(size_t requested) {
  if (requested > 0) return requested;
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

// Calls fn(i) for i in [0, n) on up to `workers` threads. Each index is
// visited exactly once; callers write results into slot i so the output
// order never depends on scheduling. The first exception is rethrown.
template <typename Fn>
void ParallelFor(size_t n, size_t workers, Fn &&fn) {
  workers = std::min(ResolveWorkers(workers), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto &t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

// Ordered parallel map.
template <typename T, typename Fn>
std::vector<T> ParallelMap(size_t n, size_t workers, Fn &&fn) {
  std::vector<T> out(n);
  ParallelFor(n, workers, [&](size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace narrev

#endif  // NARREV_PARALLEL_H_

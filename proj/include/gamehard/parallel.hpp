// Copyright 2026 The gamehard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAMEHARD_PARALLEL_HPP_
#define GAMEHARD_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace gamehard {

// jobs <= 0 means one worker per hardware thread.
inline unsigned resolve_jobs(int jobs) {
  if (jobs > 0) return static_cast<unsigned>(jobs);
  return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, count) into `jobs` contiguous chunks and runs
// fn(worker, begin, end) for each on its own thread. The first exception
// thrown by any worker is rethrown on the caller's thread.
template <typename Fn>
void parallel_chunks(std::uint64_t count, unsigned jobs, Fn&& fn) {
  jobs = static_cast<unsigned>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs, count)));
  if (jobs == 1) {
    fn(0u, std::uint64_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    std::uint64_t begin = count * w / jobs;
    std::uint64_t end = count * (w + 1) / jobs;
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Returns the smallest index in [0, count) with pred(index) true, scanning in
// parallel. Workers abandon indices above the best hit found so far, so the
// answer never depends on scheduling.
template <typename Pred>
std::optional<std::uint64_t> parallel_find_first(std::uint64_t count,
                                                 unsigned jobs, Pred&& pred) {
  constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{kNone};
  parallel_chunks(count, jobs, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) {
      if (i > best.load(std::memory_order_relaxed)) return;
      if (pred(i)) {
        std::uint64_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  });
  if (best.load() == kNone) return std::nullopt;
  return best.load();
}

}  // namespace gamehard

#endif  // GAMEHARD_PARALLEL_HPP_

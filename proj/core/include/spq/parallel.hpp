// Copyright 2026 The spq Authors
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

#ifndef SPQ_PARALLEL_HPP_
#define SPQ_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spq {

// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, count).
// Chunk boundaries depend only on `chunk`, never on `jobs`, so callers that
// reduce per-chunk partials in chunk order get schedule-independent results.
template <typename Fn>
void for_each_chunk(std::size_t count, std::size_t chunk, std::size_t jobs,
                    Fn&& fn) {
  if (count == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (count + chunk - 1) / chunk;
  jobs = std::clamp<std::size_t>(jobs, 1, chunks);
  if (jobs == 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      fn(c, c * chunk, std::min(count, (c + 1) * chunk));
    }
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += jobs) {
        try {
          fn(c, c * chunk, std::min(count, (c + 1) * chunk));
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace spq

#endif  // SPQ_PARALLEL_HPP_

// Copyright 2026 The anoseg Authors.
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace anoseg {

// Thread count from ANOSEG_THREADS, else the hardware concurrency.
inline std::size_t default_thread_count() {
  if (const char* env = std::getenv("ANOSEG_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs produce(i) for i in [0, n) on up to `threads` workers, in waves, and
// hands each result to consume(i, value) strictly in index order. Results are
// therefore independent of the thread count. The first exception wins.
template <typename Produce, typename Consume>
void for_each_ordered(std::size_t n, std::size_t threads, Produce&& produce,
                      Consume&& consume) {
  threads = std::max<std::size_t>(1, threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) consume(i, produce(i));
    return;
  }
  using Value = decltype(produce(std::size_t{0}));
  for (std::size_t begin = 0; begin < n; begin += threads) {
    const std::size_t end = std::min(n, begin + threads);
    std::vector<std::optional<Value>> results(end - begin);
    std::vector<std::exception_ptr> errors(end - begin);
    {
      std::vector<std::jthread> workers;
      workers.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        workers.emplace_back([&, i] {
          try {
            results[i - begin].emplace(produce(i));
          } catch (...) {
            errors[i - begin] = std::current_exception();
          }
        });
      }
    }
    for (std::size_t i = begin; i < end; ++i) {
      if (errors[i - begin]) std::rethrow_exception(errors[i - begin]);
      consume(i, std::move(*results[i - begin]));
    }
  }
}

}  // namespace anoseg

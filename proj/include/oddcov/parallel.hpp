// Copyright 2026 The oddcov Authors
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
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace oddcov {

unsigned default_jobs();

// Splits [0, total) into contiguous blocks, runs `work(begin, end)` on up to
// `jobs` threads at a time and hands each result to `consume` in ascending
// block order. A `consume` returning bool stops the loop on false. An
// exception from a block is rethrown after every earlier block has been
// consumed, so failures are deterministic for any `jobs`.
template <class Work, class Consume>
void ordered_parallel_for(std::uint64_t total, unsigned jobs,
                          std::uint64_t block, Work&& work, Consume&& consume) {
  using Result = decltype(work(std::uint64_t{}, std::uint64_t{}));
  jobs = std::max(1u, jobs);
  block = std::max<std::uint64_t>(1, block);
  const std::uint64_t blocks = (total + block - 1) / block;

  for (std::uint64_t first = 0; first < blocks; first += jobs) {
    const std::uint64_t wave = std::min<std::uint64_t>(jobs, blocks - first);
    std::vector<std::optional<Result>> results(wave);
    std::vector<std::exception_ptr> errors(wave);
    auto run = [&](std::uint64_t k) {
      const std::uint64_t begin = (first + k) * block;
      const std::uint64_t end = std::min(total, begin + block);
      try {
        results[k].emplace(work(begin, end));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    if (wave == 1) {
      run(0);
    } else {
      std::vector<std::jthread> threads;
      threads.reserve(wave - 1);
      for (std::uint64_t k = 1; k < wave; ++k) threads.emplace_back(run, k);
      run(0);
    }
    for (std::uint64_t k = 0; k < wave; ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      if constexpr (std::is_same_v<decltype(consume(std::move(*results[k]))), bool>) {
        if (!consume(std::move(*results[k]))) return;
      } else {
        consume(std::move(*results[k]));
      }
    }
  }
}

}  // namespace oddcov

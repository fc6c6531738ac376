/*
   Copyright 2026 The hbtsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include <omp.h>

namespace hbt {

/// Worker count for OpenMP regions; 0 selects the runtime default.
struct Execution {
    int workers = 0;

    int resolved() const { return workers > 0 ? workers : omp_get_max_threads(); }
};

/// Splits [0, n_items) into fixed-size blocks, reduces each block into its own
/// Partial on whichever worker picks it up, then merges the partials serially in
/// block order. Because neither the partition nor the merge order depends on the
/// worker count, the result is bit-identical for any number of workers.
///
/// `make` builds an empty partial, `fill(partial, begin, end)` accumulates one
/// block, and Partial::merge(const Partial&) combines two.
template <class Make, class Fill>
auto block_reduce(std::uint64_t n_items, std::uint64_t block_size, Execution exec, Make make,
                  Fill fill)
{
    using Partial = decltype(make());
    block_size = std::max<std::uint64_t>(block_size, 1);
    const auto n_blocks = static_cast<std::int64_t>((n_items + block_size - 1) / block_size);
    std::vector<Partial> partials;
    partials.reserve(static_cast<std::size_t>(n_blocks));
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        partials.push_back(make());
    }

#pragma omp parallel for schedule(dynamic, 1) num_threads(exec.resolved())
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * block_size;
        const std::uint64_t end = std::min(n_items, begin + block_size);
        fill(partials[static_cast<std::size_t>(b)], begin, end);
    }

    Partial total = make();
    for (const Partial& p : partials) {
        total.merge(p);
    }
    return total;
}

} // namespace hbt

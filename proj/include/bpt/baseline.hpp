/*
 * Copyright 2026 The bpt-batch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BPT_BASELINE_HPP
#define BPT_BASELINE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "bpt/batch_engine.hpp"
#include "bpt/flat_tree.hpp"

namespace bpt
{
// Per-key root-to-leaf search: the unbatched reference the batch engine is checked against.

struct PointOutcome {
  SearchResult result{};
  std::uint64_t loads{};
};

struct SequentialOutcome {
  std::vector<SearchResult> results{};
  std::uint64_t total_loads{};
};

auto point_search(const FlatTree &tree, const Key256 &key) -> PointOutcome;

/// Keys in any order; results stay aligned with the input.
auto sequential_batch(const FlatTree &tree, std::span<const Key256> keys) -> SequentialOutcome;

}  // namespace bpt

#endif  // BPT_BASELINE_HPP

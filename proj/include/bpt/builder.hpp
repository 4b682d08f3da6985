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

#ifndef BPT_BUILDER_HPP
#define BPT_BUILDER_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bpt/flat_tree.hpp"
#include "bpt/tree_model.hpp"

namespace bpt
{
using Entry = std::pair<Key256, DataValue>;

/**
 * @brief Bulk-load sorted entries into a breadth-first flattened B+ tree.
 *
 * Each level is packed left to right at full fill. When the last node of a
 * level would hold fewer than ceil(k_max / 2) keys (leaves) or ceil(m / 2)
 * children (inner), it and its left neighbour share their contents evenly.
 * Every separator is the maximum key of the subtree on its left.
 *
 * Throws std::invalid_argument for an empty input, keys that are not strictly
 * ascending, a payload equal to kNotFound, or an unsupported order.
 */
auto bulk_load(std::span<const Entry> entries, std::uint32_t order_m) -> FlatTree;

/// Sizes of the consecutive groups a level of `count` items is cut into.
auto PackLevel(std::uint64_t count, std::uint64_t capacity, std::uint64_t min_fill)
    -> std::vector<std::uint64_t>;

}  // namespace bpt

#endif  // BPT_BUILDER_HPP

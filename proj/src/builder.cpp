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

#include "bpt/builder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bpt
{
namespace
{
/// A node of the level under construction: its key range within the level below.
struct PendingNode {
  std::uint64_t first{};  // index of first entry (leaves) or first child (inner)
  std::uint64_t count{};  // number of entries or children
  Key256 max_key{};
};

void
CheckEntries(std::span<const Entry> entries)
{
  if (entries.empty()) throw std::invalid_argument{"cannot bulk-load an empty entry set"};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second == kNotFound) {
      throw std::invalid_argument{"entry " + std::to_string(i) + " carries the not-found sentinel"};
    }
    if (i > 0 && !(entries[i - 1].first < entries[i].first)) {
      throw std::invalid_argument{"entries not strictly ascending at index " + std::to_string(i)};
    }
  }
}

auto
MakeLevel(const std::vector<std::uint64_t> &sizes)  //
    -> std::vector<PendingNode>
{
  std::vector<PendingNode> level;
  level.reserve(sizes.size());
  std::uint64_t first = 0;
  for (const auto s : sizes) {
    level.push_back({first, s, {}});
    first += s;
  }
  return level;
}
}  // namespace

auto
PackLevel(const std::uint64_t count, const std::uint64_t capacity, const std::uint64_t min_fill)  //
    -> std::vector<std::uint64_t>
{
  std::vector<std::uint64_t> sizes(count / capacity, capacity);
  if (const auto rest = count % capacity; rest > 0) sizes.push_back(rest);
  if (sizes.size() >= 2 && sizes.back() < min_fill) {
    const auto total = sizes[sizes.size() - 2] + sizes.back();
    sizes[sizes.size() - 2] = (total + 1) / 2;
    sizes.back() = total / 2;
  }
  return sizes;
}

auto
bulk_load(std::span<const Entry> entries, const std::uint32_t order_m)  //
    -> FlatTree
{
  if (!IsValidOrder(order_m)) {
    throw std::invalid_argument{"unsupported tree order " + std::to_string(order_m)};
  }
  CheckEntries(entries);

  const std::uint64_t k_max = order_m - 1;

  // levels[0] holds the leaves; the last level is the root
  std::vector<std::vector<PendingNode>> levels;
  levels.push_back(MakeLevel(PackLevel(entries.size(), k_max, (k_max + 1) / 2)));
  for (auto &leaf : levels[0]) leaf.max_key = entries[leaf.first + leaf.count - 1].first;

  while (levels.back().size() > 1) {
    const auto &below = levels.back();
    auto level = MakeLevel(PackLevel(below.size(), order_m, (order_m + 1) / 2));
    for (auto &n : level) n.max_key = below[n.first + n.count - 1].max_key;
    levels.push_back(std::move(level));
  }

  const auto height = static_cast<std::uint32_t>(levels.size());
  std::uint64_t node_count = 0;
  for (const auto &l : levels) node_count += l.size();

  auto meta = TreeMeta::Make(order_m, height, node_count, entries.size());
  const auto ns = meta.node_size;

  // offset of the first node at each depth, root level first in the buffer
  std::vector<std::uint64_t> level_base(height);
  std::uint64_t base = 0;
  for (std::uint32_t d = height; d-- > 0;) {
    level_base[d] = base;
    base += levels[d].size() * ns;
  }

  std::vector<std::uint8_t> buf(node_count * ns, 0);
  for (std::uint32_t d = 0; d < height; ++d) {
    for (std::uint64_t j = 0; j < levels[d].size(); ++j) {
      const auto &pn = levels[d][j];
      auto node = std::span<std::uint8_t>{buf}.subspan(level_base[d] + j * ns, ns);
      const auto tail = kNodeHeaderSize + kKeyBytes * k_max;

      if (d == 0) {
        StoreU32(node, kSlotUseOffset, static_cast<std::uint32_t>(pn.count));
        StoreU32(node, kDepthOffset, 0);
        for (std::uint64_t i = 0; i < pn.count; ++i) {
          const auto &[key, data] = entries[pn.first + i];
          std::copy(key.bytes.begin(), key.bytes.end(), node.begin() + kNodeHeaderSize + kKeyBytes * i);
          StoreU64(node, tail + 8 * i, data);
        }
        continue;
      }

      const auto &below = levels[d - 1];
      StoreU32(node, kSlotUseOffset, static_cast<std::uint32_t>(pn.count - 1));
      StoreU32(node, kDepthOffset, d);
      for (std::uint64_t i = 0; i < pn.count; ++i) {
        const auto child = pn.first + i;
        if (i + 1 < pn.count) {
          const auto &key = below[child].max_key;
          std::copy(key.bytes.begin(), key.bytes.end(), node.begin() + kNodeHeaderSize + kKeyBytes * i);
        }
        StoreU64(node, tail + 8 * i, level_base[d - 1] + child * ns);
      }
    }
  }

  return FlatTree{meta, std::move(buf)};
}

}  // namespace bpt

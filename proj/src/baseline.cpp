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

#include "bpt/baseline.hpp"

#include <stdexcept>
#include <string>

#include "bpt/comparator.hpp"

namespace bpt
{
auto
point_search(const FlatTree &tree, const Key256 &key)  //
    -> PointOutcome
{
  const auto &meta = tree.meta();
  PointOutcome out;
  auto offset = meta.root_offset;

  for (std::uint32_t level = meta.height_h; level-- > 0;) {
    const auto node = tree.node(offset);
    ++out.loads;
    if (node.depth() != level) {
      throw TreeFormatError{TreeErrc::kDepthMismatch, offset, "expected depth " + std::to_string(level)};
    }
    const auto su = node.slot_use();
    if (su < 1 || su > meta.k_max) {
      throw TreeFormatError{TreeErrc::kSlotUseInvalid, offset, "slot_use " + std::to_string(su)};
    }
    const auto sel = select_slot(key.View(), node.key_region(), su);
    if (level == 0) {
      if (sel.exact) out.result = SearchResult{node.data(sel.slot)};
      break;
    }
    offset = node.child(sel.slot);
  }
  return out;
}

auto
sequential_batch(const FlatTree &tree, std::span<const Key256> keys)  //
    -> SequentialOutcome
{
  if (keys.empty()) throw std::invalid_argument{"search batch is empty"};
  SequentialOutcome out;
  out.results.reserve(keys.size());
  for (const auto &k : keys) {
    const auto r = point_search(tree, k);
    out.results.push_back(r.result);
    out.total_loads += r.loads;
  }
  return out;
}

}  // namespace bpt

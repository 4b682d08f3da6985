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

#ifndef BPT_COMPARATOR_HPP
#define BPT_COMPARATOR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "bpt/tree_model.hpp"

namespace bpt
{
/// One three-state verdict per byte position of a 32-byte comparison.
using ByteVerdicts = std::array<Ordering, kKeyBytes>;

/// Reduced outcome of comparing a search key against one slot key.
struct SlotOutcome {
  bool le{};  // search <= slot
  bool eq{};  // search == slot

  friend constexpr auto operator==(const SlotOutcome &, const SlotOutcome &) -> bool = default;
};

/// Priority-encoded decision for one node.
struct SlotSelection {
  std::size_t slot{};  // first slot with search <= key, or slot_use if none
  bool exact{};        // the selected slot holds the search key

  friend constexpr auto operator==(const SlotSelection &, const SlotSelection &) -> bool = default;
};

/// Bank of 32 independent unsigned 8-bit comparators.
auto byte_compare(KeyBytes search, KeyBytes slot) -> ByteVerdicts;

inline auto
byte_compare(const Key256 &search, const Key256 &slot)  //
    -> ByteVerdicts
{
  return byte_compare(search.View(), slot.View());
}

/// Cascading priority reduction: the first non-equal byte, scanning from byte 0, decides.
auto cbpc_reduce(const ByteVerdicts &verdicts) -> SlotOutcome;

/**
 * @brief Route a search key through one node.
 *
 * All k_max slots of `key_region` (k_max * 32 bytes) are compared, then slots at or
 * beyond `slot_use` are masked and a priority encoder picks the lowest slot whose
 * outcome is "less or equal".
 */
auto select_slot(KeyBytes search, std::span<const std::uint8_t> key_region, std::size_t slot_use)
    -> SlotSelection;

/// Convenience overload over an array of keys; `keys.size()` plays the role of k_max.
auto select_slot(const Key256 &search, std::span<const Key256> keys, std::size_t slot_use)
    -> SlotSelection;

}  // namespace bpt

#endif  // BPT_COMPARATOR_HPP

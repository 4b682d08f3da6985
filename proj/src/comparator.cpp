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

#include "bpt/comparator.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace bpt
{
namespace
{
auto
EncodePriority(std::span<const SlotOutcome> outcomes, const std::size_t slot_use)  //
    -> SlotSelection
{
  for (std::size_t i = 0; i < slot_use; ++i) {
    if (outcomes[i].le) return {i, outcomes[i].eq};
  }
  return {slot_use, false};
}
}  // namespace

auto
byte_compare(KeyBytes search, KeyBytes slot)  //
    -> ByteVerdicts
{
  ByteVerdicts v{};
  for (std::size_t i = 0; i < kKeyBytes; ++i) {
    v[i] = search[i] < slot[i]    ? Ordering::kLess
           : search[i] == slot[i] ? Ordering::kEqual
                                  : Ordering::kGreater;
  }
  return v;
}

auto
cbpc_reduce(const ByteVerdicts &verdicts)  //
    -> SlotOutcome
{
  for (const auto v : verdicts) {
    if (v == Ordering::kLess) return {true, false};
    if (v == Ordering::kGreater) return {false, false};
  }
  return {true, true};
}

auto
select_slot(KeyBytes search, std::span<const std::uint8_t> key_region, const std::size_t slot_use)  //
    -> SlotSelection
{
  const auto k_max = key_region.size() / kKeyBytes;
  if (slot_use < 1 || slot_use > k_max) throw std::invalid_argument{"slot_use outside 1..k_max"};

  // one outcome per physical slot; padding slots are evaluated and then masked
  std::array<SlotOutcome, 256> small{};
  std::vector<SlotOutcome> large;
  std::span<SlotOutcome> outcomes{small};
  if (k_max > small.size()) {
    large.resize(k_max);
    outcomes = large;
  }
  for (std::size_t i = 0; i < k_max; ++i) {
    const KeyBytes slot{key_region.subspan(kKeyBytes * i, kKeyBytes)};
    outcomes[i] = cbpc_reduce(byte_compare(search, slot));
  }
  return EncodePriority(outcomes, slot_use);
}

auto
select_slot(const Key256 &search, std::span<const Key256> keys, const std::size_t slot_use)  //
    -> SlotSelection
{
  std::vector<std::uint8_t> region(keys.size() * kKeyBytes);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::copy(keys[i].bytes.begin(), keys[i].bytes.end(), region.begin() + kKeyBytes * i);
  }
  return select_slot(search.View(), region, slot_use);
}

}  // namespace bpt

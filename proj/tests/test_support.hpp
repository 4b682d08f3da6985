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

// Shared helpers and independent oracles for the test suites.

#ifndef BPT_TESTS_TEST_SUPPORT_HPP
#define BPT_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "bpt/batch_engine.hpp"
#include "bpt/builder.hpp"
#include "bpt/flat_tree.hpp"

namespace bpt::testing
{
/// Entries with integer keys; payload = 10 * key + 1.
inline auto
IntEntries(std::span<const std::uint64_t> keys)  //
    -> std::vector<Entry>
{
  std::vector<Entry> out;
  for (const auto k : keys) out.emplace_back(Key256::FromU64(k), 10 * k + 1);
  return out;
}

inline auto
RangeEntries(const std::uint64_t first, const std::uint64_t last)  //
    -> std::vector<Entry>
{
  std::vector<std::uint64_t> keys;
  for (auto k = first; k <= last; ++k) keys.push_back(k);
  return IntEntries(keys);
}

/// Exact-match lookup in a std::map; shares no code with the tree.
class MapOracle
{
 public:
  explicit MapOracle(std::span<const Entry> entries)
  {
    for (const auto &[k, v] : entries) map_.emplace(k, v);
  }

  [[nodiscard]] auto
  Lookup(const Key256 &k) const  //
      -> SearchResult
  {
    const auto it = map_.find(k);
    return it == map_.end() ? SearchResult{} : SearchResult{it->second};
  }

  [[nodiscard]] auto
  LookupAll(std::span<const Key256> keys) const  //
      -> std::vector<SearchResult>
  {
    std::vector<SearchResult> out;
    for (const auto &k : keys) out.push_back(Lookup(k));
    return out;
  }

 private:
  std::map<Key256, DataValue> map_;
};

/**
 * @brief Root-to-leaf path of one key, found by a plain linear scan over node keys.
 *
 * Independent of the comparator module: uses std::lexicographical_compare on
 * the raw key bytes.
 */
inline auto
PathOffsets(const FlatTree &tree, const Key256 &key)  //
    -> std::vector<std::uint64_t>
{
  std::vector<std::uint64_t> path;
  auto off = tree.meta().root_offset;
  for (std::uint32_t level = tree.height(); level-- > 0;) {
    path.push_back(off);
    const auto node = tree.node(off);
    std::size_t slot = 0;
    while (slot < node.slot_use()) {
      const auto nk = node.key(slot);
      const bool key_greater =
          std::lexicographical_compare(nk.begin(), nk.end(), key.bytes.begin(), key.bytes.end());
      if (!key_greater) break;
      ++slot;
    }
    if (level > 0) off = node.child(slot);
  }
  return path;  // root first
}

/// Distinct nodes visited per depth by the union of all per-key paths.
inline auto
VisitedPerDepth(const FlatTree &tree, std::span<const Key256> keys)  //
    -> std::vector<std::uint64_t>
{
  const auto h = tree.height();
  std::vector<std::set<std::uint64_t>> seen(h);
  for (const auto &k : keys) {
    const auto path = PathOffsets(tree, k);
    for (std::size_t i = 0; i < path.size(); ++i) seen[h - 1 - i].insert(path[i]);
  }
  std::vector<std::uint64_t> out;
  for (const auto &s : seen) out.push_back(s.size());
  return out;
}

/// Random sorted key sample (with duplicates) mixing stored and absent narrow keys.
inline auto
MixedSortedBatch(std::span<const Entry> entries, const std::size_t size, std::mt19937_64 &rng)  //
    -> std::vector<Key256>
{
  std::vector<Key256> keys;
  for (std::size_t i = 0; i < size; ++i) {
    if (rng() % 2 == 0) {
      keys.push_back(entries[rng() % entries.size()].first);
    } else {
      keys.push_back(Key256::FromU64(rng()));
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace bpt::testing

#endif  // BPT_TESTS_TEST_SUPPORT_HPP

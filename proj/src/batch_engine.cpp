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

#include "bpt/batch_engine.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bpt/comparator.hpp"

namespace bpt
{
/*######################################################################################
 * SortedBatch / SearchStats
 *####################################################################################*/

SortedBatch::SortedBatch(std::vector<Key256> keys, const std::size_t max_batch)
    : keys_{std::move(keys)}, max_batch_{max_batch}
{
  if (keys_.empty()) throw std::invalid_argument{"search batch is empty"};
  if (keys_.size() > max_batch_) {
    throw std::invalid_argument{"batch of " + std::to_string(keys_.size()) + " keys exceeds maximum " +
                                std::to_string(max_batch_)};
  }
  if (keys_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument{"batch too large for 32-bit key counts"};
  }
  if (!std::is_sorted(keys_.begin(), keys_.end())) {
    throw std::invalid_argument{"search batch is not sorted"};
  }
}

auto
SearchStats::operator+=(const SearchStats &other)  //
    -> SearchStats &
{
  if (node_loads_per_level.size() < other.node_loads_per_level.size()) {
    node_loads_per_level.resize(other.node_loads_per_level.size(), 0);
  }
  for (std::size_t d = 0; d < other.node_loads_per_level.size(); ++d) {
    node_loads_per_level[d] += other.node_loads_per_level[d];
  }
  total_node_loads += other.total_node_loads;
  bytes_fetched += other.bytes_fetched;
  slot_comparisons += other.slot_comparisons;
  fifo_high_water += other.fifo_high_water;
  batch_size += other.batch_size;
  return *this;
}

/*######################################################################################
 * Level-wise search
 *####################################################################################*/

auto
batch_search(const FlatTree &tree, const SortedBatch &batch, const bool record_trace)  //
    -> BatchOutcome
{
  const auto &meta = tree.meta();
  const auto keys = batch.keys();
  const auto n = keys.size();

  BatchOutcome out;
  out.results.assign(n, SearchResult{});
  auto &stats = out.stats;
  stats.node_loads_per_level.assign(meta.height_h, 0);
  stats.batch_size = n;

  std::deque<FifoEntry> fifo;
  fifo.push_back({meta.root_offset, static_cast<std::uint32_t>(n)});
  stats.fifo_high_water = 1;

  for (std::uint32_t level = meta.height_h; level-- > 0;) {
    const auto level_entries = fifo.size();
    if (record_trace) out.trace.emplace_back(fifo.begin(), fifo.end());

    std::size_t key_index = 0;  // running index into the sorted batch
    std::uint64_t last_emitted = 0;
    bool emitted_any = false;

    auto emit = [&](const std::uint64_t child, const std::uint32_t count, const std::uint64_t parent) {
      // sorted keys and BFS layout make children strictly increase within a level
      if (emitted_any && child <= last_emitted) {
        throw TreeFormatError{TreeErrc::kTopology, parent, "child addresses not increasing within a level"};
      }
      fifo.push_back({child, count});
      last_emitted = child;
      emitted_any = true;
      stats.fifo_high_water = std::max<std::uint64_t>(stats.fifo_high_water, fifo.size());
    };

    for (std::size_t e = 0; e < level_entries; ++e) {
      const auto entry = fifo.front();
      fifo.pop_front();

      const auto node = tree.node(entry.child_address);
      if (node.depth() != level) {
        throw TreeFormatError{TreeErrc::kDepthMismatch, entry.child_address,
                              "expected depth " + std::to_string(level) + ", node says " +
                                  std::to_string(node.depth())};
      }
      const auto su = node.slot_use();
      if (su < 1 || su > meta.k_max) {
        throw TreeFormatError{TreeErrc::kSlotUseInvalid, entry.child_address, "slot_use " + std::to_string(su)};
      }
      if (entry.key_count == 0 || key_index + entry.key_count > n) {
        throw std::logic_error{"FIFO key counts do not cover the batch"};
      }
      ++stats.node_loads_per_level[level];
      stats.slot_comparisons += static_cast<std::uint64_t>(entry.key_count) * meta.k_max;

      const auto key_region = node.key_region();
      if (level == 0) {
        for (std::uint32_t j = 0; j < entry.key_count; ++j, ++key_index) {
          const auto sel = select_slot(keys[key_index].View(), key_region, su);
          out.results[key_index] = sel.exact ? SearchResult{node.data(sel.slot)} : SearchResult{};
        }
        continue;
      }

      std::uint64_t current = 0;
      std::uint32_t count = 0;
      for (std::uint32_t j = 0; j < entry.key_count; ++j, ++key_index) {
        const auto sel = select_slot(keys[key_index].View(), key_region, su);
        const auto child = node.child(sel.slot);
        if (count > 0 && child == current) {
          ++count;
          continue;
        }
        if (count > 0) emit(current, count, entry.child_address);
        current = child;
        count = 1;
      }
      emit(current, count, entry.child_address);
    }

    if (key_index != n) throw std::logic_error{"level did not consume the whole batch"};
  }

  for (const auto loads : stats.node_loads_per_level) stats.total_node_loads += loads;
  stats.bytes_fetched = stats.total_node_loads * meta.node_size;
  return out;
}

/*######################################################################################
 * Batch partitioning
 *####################################################################################*/

auto
SplitEvenly(const std::size_t n, const std::size_t parts)  //
    -> std::vector<std::size_t>
{
  if (parts == 0 || parts > n) throw std::invalid_argument{"instance count must be in 1..batch size"};
  std::vector<std::size_t> sizes(parts, n / parts);
  for (std::size_t i = 0; i < n % parts; ++i) ++sizes[i];
  return sizes;
}

auto
partitioned_search(const FlatTree &tree,
                   const SortedBatch &batch,
                   const std::size_t instances,
                   const bool concurrent)  //
    -> PartitionedOutcome
{
  PartitionedOutcome out;
  out.sub_batch_sizes = SplitEvenly(batch.size(), instances);

  std::vector<SortedBatch> parts;
  parts.reserve(instances);
  auto first = batch.keys().begin();
  for (const auto size : out.sub_batch_sizes) {
    parts.emplace_back(std::vector<Key256>(first, first + static_cast<std::ptrdiff_t>(size)), batch.max_batch());
    first += static_cast<std::ptrdiff_t>(size);
  }

  std::vector<BatchOutcome> outcomes;
  outcomes.reserve(instances);
  if (concurrent && instances > 1) {
    std::vector<std::future<BatchOutcome>> futures;
    futures.reserve(instances);
    for (const auto &part : parts) {
      futures.push_back(std::async(std::launch::async, [&tree, &part] { return batch_search(tree, part); }));
    }
    for (auto &f : futures) outcomes.push_back(f.get());
  } else {
    for (const auto &part : parts) outcomes.push_back(batch_search(tree, part));
  }

  out.results.reserve(batch.size());
  out.aggregate.node_loads_per_level.assign(tree.height(), 0);
  for (auto &o : outcomes) {
    out.results.insert(out.results.end(), o.results.begin(), o.results.end());
    out.aggregate += o.stats;
    out.per_instance.push_back(std::move(o.stats));
  }
  return out;
}

/*######################################################################################
 * Host-side ordering
 *####################################################################################*/

auto
sort_and_restore(std::span<const Key256> raw, const std::size_t max_batch)  //
    -> SortedWithPermutation
{
  if (raw.empty()) throw std::invalid_argument{"search batch is empty"};
  if (raw.size() > max_batch) {
    throw std::invalid_argument{"batch of " + std::to_string(raw.size()) + " keys exceeds maximum " +
                                std::to_string(max_batch)};
  }
  std::vector<std::size_t> perm(raw.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&raw](const auto a, const auto b) { return raw[a] < raw[b]; });

  std::vector<Key256> sorted;
  sorted.reserve(raw.size());
  for (const auto i : perm) sorted.push_back(raw[i]);
  return {SortedBatch{std::move(sorted), max_batch}, std::move(perm)};
}

auto
RestoreOrder(std::span<const std::size_t> permutation, std::span<const SearchResult> sorted)  //
    -> std::vector<SearchResult>
{
  if (permutation.size() != sorted.size()) throw std::invalid_argument{"permutation and results differ in length"};
  std::vector<SearchResult> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) out[permutation[i]] = sorted[i];
  return out;
}

}  // namespace bpt

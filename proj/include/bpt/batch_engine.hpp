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

#ifndef BPT_BATCH_ENGINE_HPP
#define BPT_BATCH_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bpt/flat_tree.hpp"
#include "bpt/tree_model.hpp"

namespace bpt
{
inline constexpr std::size_t kDefaultMaxBatch = 1000;

/*######################################################################################
 * Domain types
 *####################################################################################*/

/// Intermediate result: a node to fetch on the next level and how many queued keys it serves.
struct FifoEntry {
  std::uint64_t child_address{};
  std::uint32_t key_count{};

  friend constexpr auto operator==(const FifoEntry &, const FifoEntry &) -> bool = default;
};

/// Final answer for one key: the stored payload, or kNotFound.
struct SearchResult {
  DataValue value{kNotFound};

  [[nodiscard]] constexpr auto found() const -> bool { return value != kNotFound; }

  friend constexpr auto operator==(const SearchResult &, const SearchResult &) -> bool = default;
};

/// A non-empty, non-decreasing batch of search keys no longer than its configured maximum.
class SortedBatch
{
 public:
  /// Throws std::invalid_argument if `keys` is empty, longer than max_batch, or unsorted.
  explicit SortedBatch(std::vector<Key256> keys, std::size_t max_batch = kDefaultMaxBatch);

  [[nodiscard]] auto keys() const -> std::span<const Key256> { return keys_; }
  [[nodiscard]] auto size() const -> std::size_t { return keys_.size(); }
  [[nodiscard]] auto max_batch() const -> std::size_t { return max_batch_; }

 private:
  std::vector<Key256> keys_;
  std::size_t max_batch_;
};

/// Memory-access accounting for one search run.
struct SearchStats {
  std::vector<std::uint64_t> node_loads_per_level{};  // indexed by depth, 0 = leaves
  std::uint64_t total_node_loads{};
  std::uint64_t bytes_fetched{};
  std::uint64_t slot_comparisons{};
  std::uint64_t fifo_high_water{};
  std::uint64_t batch_size{};

  /// Element-wise sum; high-water marks add up since instances own separate FIFOs.
  auto operator+=(const SearchStats &other) -> SearchStats &;

  friend auto operator==(const SearchStats &, const SearchStats &) -> bool = default;
};

/// FIFO contents handed from one level to the next, root level first.
using FifoTrace = std::vector<std::vector<FifoEntry>>;

struct BatchOutcome {
  std::vector<SearchResult> results{};  // aligned with the batch
  SearchStats stats{};
  FifoTrace trace{};  // filled only when requested
};

struct PartitionedOutcome {
  std::vector<SearchResult> results{};
  std::vector<SearchStats> per_instance{};
  std::vector<std::size_t> sub_batch_sizes{};
  SearchStats aggregate{};
};

/*######################################################################################
 * Operations
 *####################################################################################*/

/**
 * @brief Level-wise search of a sorted batch.
 *
 * The FIFO is seeded with (root, batch size). Each level pops its entries in
 * order, fetches every node once and routes the next `key_count` keys of the
 * batch through it via a single running key index. Consecutive keys choosing
 * the same child are merged into one FIFO entry. At the leaf level the keys
 * yield payloads or kNotFound instead of FIFO entries.
 *
 * Throws TreeFormatError when a fetched node is out of range or its depth
 * disagrees with the level being processed.
 */
auto batch_search(const FlatTree &tree, const SortedBatch &batch, bool record_trace = false)
    -> BatchOutcome;

/// Sizes of `parts` contiguous sub-batches of `n` keys, differing by at most one.
auto SplitEvenly(std::size_t n, std::size_t parts) -> std::vector<std::size_t>;

/**
 * @brief Search `instances` contiguous sub-batches independently.
 *
 * Results are concatenated in batch order. With `concurrent` set each instance
 * runs on its own thread; the outcome is identical either way.
 */
auto partitioned_search(const FlatTree &tree,
                        const SortedBatch &batch,
                        std::size_t instances,
                        bool concurrent = true) -> PartitionedOutcome;

/// A sorted batch plus the permutation that maps it back to input order.
struct SortedWithPermutation {
  SortedBatch batch;
  std::vector<std::size_t> permutation;  // batch.keys()[i] == raw[permutation[i]]
};

/// Stable sort of raw keys. Throws std::invalid_argument if empty or oversize.
auto sort_and_restore(std::span<const Key256> raw, std::size_t max_batch = kDefaultMaxBatch)
    -> SortedWithPermutation;

/// Reorders sorted-order results back to input order.
auto RestoreOrder(std::span<const std::size_t> permutation, std::span<const SearchResult> sorted)
    -> std::vector<SearchResult>;

}  // namespace bpt

#endif  // BPT_BATCH_ENGINE_HPP

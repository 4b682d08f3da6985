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

#ifndef BPT_GEN_HPP
#define BPT_GEN_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bpt/builder.hpp"
#include "bpt/tree_model.hpp"

namespace bpt
{
/**
 * @brief Seeded workload generation.
 *
 * Only the raw output of std::mt19937_64 is consumed (never a standard
 * distribution), so the same seed gives byte-identical data on every platform.
 * Narrow keys have random low 64 bits and zero high bytes; wide keys are 32
 * random bytes. Stored payloads are the key's low 64 bits, so keys whose low
 * 64 bits are all ones are never stored.
 */
struct GenSpec {
  std::uint64_t entry_count{};
  std::uint32_t order_m{16};
  std::uint64_t seed{};
  double hit_ratio{0.5};
  bool wide_keys{false};
};

/// Uniform integer in [0, bound) by rejection; bound must be positive.
auto UniformBelow(std::mt19937_64 &rng, std::uint64_t bound) -> std::uint64_t;

auto RandomKey(std::mt19937_64 &rng, bool wide) -> Key256;

/// `count` distinct entries sorted by key.
auto GenerateEntries(std::uint64_t count, std::uint64_t seed, bool wide) -> std::vector<Entry>;

/// GenerateEntries followed by bulk_load.
auto GenerateTree(const GenSpec &spec) -> FlatTree;

/**
 * @brief Draw a query batch against sorted `entries`.
 *
 * ceil(hit_ratio * size) keys are drawn uniformly (with replacement) from the
 * stored keys, the rest are random keys rejected until absent. The two groups
 * are shuffled together; the result is left unsorted.
 * Throws std::invalid_argument for hit_ratio outside [0, 1], size 0, or hits
 * requested from an empty entry set.
 */
auto GenerateBatch(std::span<const Entry> entries,
                   std::size_t size,
                   std::uint64_t seed,
                   double hit_ratio,
                   bool wide) -> std::vector<Key256>;

}  // namespace bpt

#endif  // BPT_GEN_HPP

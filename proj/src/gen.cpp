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

#include "bpt/gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bpt
{
namespace
{
auto
Storable(const Key256 &k)  //
    -> bool
{
  return k.LowU64() != kNotFound;
}

auto
IsStored(std::span<const Entry> entries, const Key256 &k)  //
    -> bool
{
  const auto it = std::lower_bound(entries.begin(), entries.end(), k,
                                   [](const Entry &e, const Key256 &key) { return e.first < key; });
  return it != entries.end() && it->first == k;
}
}  // namespace

auto
UniformBelow(std::mt19937_64 &rng, const std::uint64_t bound)  //
    -> std::uint64_t
{
  if (bound == 0) throw std::invalid_argument{"UniformBelow needs a positive bound"};
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound + 1) % bound;
  while (true) {
    const auto x = rng();
    if (x <= limit) return x % bound;
  }
}

auto
RandomKey(std::mt19937_64 &rng, const bool wide)  //
    -> Key256
{
  if (!wide) return Key256::FromU64(rng());
  Key256 k{};
  for (std::size_t i = 0; i < kKeyBytes; i += 8) {
    const auto word = rng();
    for (std::size_t b = 0; b < 8; ++b) k.bytes[i + b] = static_cast<std::uint8_t>(word >> (56 - 8 * b));
  }
  return k;
}

auto
GenerateEntries(const std::uint64_t count, const std::uint64_t seed, const bool wide)  //
    -> std::vector<Entry>
{
  std::mt19937_64 rng{seed};
  std::vector<Key256> keys;
  keys.reserve(count);
  while (keys.size() < count) {
    const auto deficit = count - keys.size();
    for (std::uint64_t i = 0; i < deficit; ++i) {
      auto k = RandomKey(rng, wide);
      while (!Storable(k)) k = RandomKey(rng, wide);
      keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  }

  std::vector<Entry> entries;
  entries.reserve(count);
  for (const auto &k : keys) entries.emplace_back(k, k.LowU64());
  return entries;
}

auto
GenerateTree(const GenSpec &spec)  //
    -> FlatTree
{
  const auto entries = GenerateEntries(spec.entry_count, spec.seed, spec.wide_keys);
  return bulk_load(entries, spec.order_m);
}

auto
GenerateBatch(std::span<const Entry> entries,
              const std::size_t size,
              const std::uint64_t seed,
              const double hit_ratio,
              const bool wide)  //
    -> std::vector<Key256>
{
  if (!(hit_ratio >= 0.0 && hit_ratio <= 1.0)) throw std::invalid_argument{"hit ratio must lie in [0, 1]"};
  if (size == 0) throw std::invalid_argument{"batch size must be positive"};

  const auto hits = static_cast<std::size_t>(std::ceil(hit_ratio * static_cast<double>(size)));
  if (hits > 0 && entries.empty()) throw std::invalid_argument{"cannot draw hits from an empty tree"};

  std::mt19937_64 rng{seed};
  std::vector<Key256> batch;
  batch.reserve(size);
  for (std::size_t i = 0; i < hits; ++i) batch.push_back(entries[UniformBelow(rng, entries.size())].first);
  while (batch.size() < size) {
    const auto k = RandomKey(rng, wide);
    if (!IsStored(entries, k)) batch.push_back(k);
  }

  // Fisher-Yates over UniformBelow; std::shuffle draw order is implementation-defined
  for (std::size_t i = batch.size(); i > 1; --i) {
    std::swap(batch[i - 1], batch[UniformBelow(rng, i)]);
  }
  return batch;
}

}  // namespace bpt

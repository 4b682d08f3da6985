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

#include "bpt/tree_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace bpt
{
namespace
{
auto
CheckedMul(const std::uint64_t a, const std::uint64_t b)  //
    -> std::uint64_t
{
  std::uint64_t out{};
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error{"tree metric overflows 64 bits"};
  return out;
}

auto
CheckedAdd(const std::uint64_t a, const std::uint64_t b)  //
    -> std::uint64_t
{
  std::uint64_t out{};
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error{"tree metric overflows 64 bits"};
  return out;
}

void
RequireOrder(const std::uint64_t order_m)
{
  if (order_m < 3) throw std::invalid_argument{"tree order must be at least 3"};
}
}  // namespace

auto
Key256::FromBytes(KeyBytes raw)  //
    -> Key256
{
  Key256 k{};
  std::copy(raw.begin(), raw.end(), k.bytes.begin());
  return k;
}

auto
Key256::ToHex() const  //
    -> std::string
{
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * kKeyBytes);
  for (const auto b : bytes) {
    out.push_back(kDigits[b >> 4U]);
    out.push_back(kDigits[b & 0xFU]);
  }
  return out;
}

auto
compare_keys(KeyBytes a, KeyBytes b)  //
    -> Ordering
{
  for (std::size_t i = 0; i < kKeyBytes; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? Ordering::kLess : Ordering::kGreater;
  }
  return Ordering::kEqual;
}

auto
node_size(const std::uint32_t order_m)  //
    -> std::uint64_t
{
  if (order_m < 3) throw std::invalid_argument{"tree order must be at least 3"};
  if (order_m % 4 != 0) {
    throw std::invalid_argument{"tree order must be a multiple of 4 to fill 32-byte chunks"};
  }
  const std::uint64_t k_max = order_m - 1;
  // header chunk + key chunks + (k_max + 1) / 4 chunks of child addresses
  return 32 + 32 * k_max + 32 * ((k_max + 1) / 4);
}

auto
n_max(const std::uint64_t order_m, const std::uint64_t height_h)  //
    -> std::uint64_t
{
  RequireOrder(order_m);
  if (height_h < 1) throw std::invalid_argument{"tree height must be at least 1"};

  std::uint64_t total = 0;
  std::uint64_t level_nodes = 1;
  for (std::uint64_t i = 0; i < height_h; ++i) {
    total = CheckedAdd(total, level_nodes);
    if (i + 1 < height_h) level_nodes = CheckedMul(level_nodes, order_m);
  }
  return total;
}

auto
l_max(const std::uint64_t order_m, const std::uint64_t height_h)  //
    -> std::uint64_t
{
  RequireOrder(order_m);
  std::uint64_t leaves = 1;
  for (std::uint64_t i = 0; i < height_h; ++i) {
    leaves = CheckedMul(leaves, order_m);
  }
  return CheckedMul(leaves, order_m - 1);
}

auto
TreeMeta::Make(const std::uint32_t order_m,
               const std::uint32_t height_h,
               const std::uint64_t node_count,
               const std::uint64_t entry_count)  //
    -> TreeMeta
{
  return TreeMeta{
      .order_m = order_m,
      .k_max = order_m - 1,
      .height_h = height_h,
      .node_count = node_count,
      .entry_count = entry_count,
      .root_offset = 0,
      .node_size = bpt::node_size(order_m),
  };
}

}  // namespace bpt

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

#ifndef BPT_TREE_MODEL_HPP
#define BPT_TREE_MODEL_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace bpt
{
/*######################################################################################
 * Keys and payloads
 *####################################################################################*/

inline constexpr std::size_t kKeyBytes = 32;

/// A read-only view of one serialized 32-byte key.
using KeyBytes = std::span<const std::uint8_t, kKeyBytes>;

/// Three-way outcome shared by whole-key and per-byte comparisons.
enum class Ordering : std::uint8_t { kLess, kEqual, kGreater };

/**
 * @brief A fixed-width 32-byte key.
 *
 * Byte 0 is the most significant byte, so lexicographic byte order equals
 * unsigned 256-bit numeric order.
 */
struct Key256 {
  std::array<std::uint8_t, kKeyBytes> bytes{};

  /// Key whose low 8 bytes hold `v` (big-endian) and whose high 24 bytes are zero.
  static constexpr auto
  FromU64(const std::uint64_t v)  //
      -> Key256
  {
    Key256 k{};
    for (std::size_t i = 0; i < 8; ++i) {
      k.bytes[kKeyBytes - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
    return k;
  }

  static auto FromBytes(KeyBytes raw) -> Key256;

  /// Low 64 bits of the numeric value.
  [[nodiscard]] constexpr auto
  LowU64() const  //
      -> std::uint64_t
  {
    std::uint64_t v = 0;
    for (std::size_t i = kKeyBytes - 8; i < kKeyBytes; ++i) {
      v = (v << 8) | bytes[i];
    }
    return v;
  }

  [[nodiscard]] auto
  View() const  //
      -> KeyBytes
  {
    return KeyBytes{bytes};
  }

  [[nodiscard]] auto ToHex() const -> std::string;

  friend constexpr auto operator<=>(const Key256 &, const Key256 &) = default;
  friend constexpr auto operator==(const Key256 &, const Key256 &) -> bool = default;
};

/// Stored payload. The all-ones pattern is reserved for kNotFound.
using DataValue = std::uint64_t;

inline constexpr DataValue kNotFound = ~DataValue{0};

auto compare_keys(KeyBytes a, KeyBytes b) -> Ordering;

inline auto
compare_keys(const Key256 &a, const Key256 &b)  //
    -> Ordering
{
  return compare_keys(a.View(), b.View());
}

/*######################################################################################
 * Tree shape metrics
 *####################################################################################*/

/// Size in bytes of one serialized node of order `order_m` (40 bytes per child slot).
/// Throws std::invalid_argument unless order_m >= 4 and order_m % 4 == 0.
auto node_size(std::uint32_t order_m) -> std::uint64_t;

/// Node count of a completely full tree: sum of m^i for i in [0, h).
/// Throws std::overflow_error instead of wrapping.
auto n_max(std::uint64_t order_m, std::uint64_t height_h) -> std::uint64_t;

/// Key capacity of a full tree whose leaves sit `height_h` levels below the root: m^h * (m - 1).
auto l_max(std::uint64_t order_m, std::uint64_t height_h) -> std::uint64_t;

/// Whether `order_m` can be used for a serialized tree.
constexpr auto
IsValidOrder(const std::uint64_t order_m)  //
    -> bool
{
  return order_m >= 4 && order_m % 4 == 0 && order_m <= (1U << 16U);
}

struct TreeMeta {
  std::uint32_t order_m{};
  std::uint32_t k_max{};
  std::uint32_t height_h{};
  std::uint64_t node_count{};
  std::uint64_t entry_count{};
  std::uint64_t root_offset{};
  std::uint64_t node_size{};

  /// Fills k_max and node_size from the order.
  static auto Make(std::uint32_t order_m,
                   std::uint32_t height_h,
                   std::uint64_t node_count,
                   std::uint64_t entry_count) -> TreeMeta;

  friend auto operator==(const TreeMeta &, const TreeMeta &) -> bool = default;
};

}  // namespace bpt

#endif  // BPT_TREE_MODEL_HPP

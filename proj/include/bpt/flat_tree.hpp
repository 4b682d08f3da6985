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

#ifndef BPT_FLAT_TREE_HPP
#define BPT_FLAT_TREE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bpt/tree_model.hpp"

namespace bpt
{
/*######################################################################################
 * Layout constants
 *####################################################################################*/

inline constexpr std::uint64_t kFileHeaderSize = 64;
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr char kMagic[4] = {'B', 'P', 'T', 'F'};

inline constexpr std::uint64_t kNodeHeaderSize = 32;
inline constexpr std::uint64_t kSlotUseOffset = 0;
inline constexpr std::uint64_t kDepthOffset = 4;

/*######################################################################################
 * Errors
 *####################################################################################*/

/// Every rule a serialized tree can break. Each has its own error kind.
enum class TreeErrc : std::uint8_t {
  kBadMagic,
  kUnsupportedVersion,
  kInvalidOrder,
  kInvalidHeight,
  kBadRootOffset,
  kTruncated,
  kNodeCountMismatch,
  kEntryCountMismatch,
  kSlotUseInvalid,
  kKeyOrder,
  kSeparatorMismatch,
  kUnderfilled,
  kChildOutOfBounds,
  kMisalignedChild,
  kDepthMismatch,
  kLayering,
  kTopology,
  kSentinelPayload,
  kNonZeroPadding,
};

auto ToString(TreeErrc kind) -> std::string_view;

/// One broken rule, located at a byte offset into the node region.
struct Violation {
  TreeErrc kind{};
  std::uint64_t offset{};
  std::string detail{};
};

/// Thrown by deserialization and by traversals that meet a corrupt node.
class TreeFormatError : public std::runtime_error
{
 public:
  TreeFormatError(TreeErrc kind, std::uint64_t offset, const std::string &detail);
  explicit TreeFormatError(const Violation &v) : TreeFormatError{v.kind, v.offset, v.detail} {}

  [[nodiscard]] auto
  kind() const  //
      -> TreeErrc
  {
    return kind_;
  }

  [[nodiscard]] auto
  offset() const  //
      -> std::uint64_t
  {
    return offset_;
  }

 private:
  TreeErrc kind_;
  std::uint64_t offset_;
};

/*######################################################################################
 * Little-endian field access
 *####################################################################################*/

auto LoadU32(std::span<const std::uint8_t> buf, std::uint64_t pos) -> std::uint32_t;
auto LoadU64(std::span<const std::uint8_t> buf, std::uint64_t pos) -> std::uint64_t;
void StoreU32(std::span<std::uint8_t> buf, std::uint64_t pos, std::uint32_t v);
void StoreU64(std::span<std::uint8_t> buf, std::uint64_t pos, std::uint64_t v);

/*######################################################################################
 * Node view
 *####################################################################################*/

/**
 * @brief Read-only view of one serialized node.
 *
 * Layout: a 32-byte header (slotUse, depth, padding), k_max keys, then either
 * k_max + 1 child offsets (inner) or k_max payloads followed by 8 unused bytes (leaf).
 * Accessors do not bounds-check the slot index against slot_use.
 */
class NodeRef
{
 public:
  NodeRef(std::span<const std::uint8_t> raw, std::uint64_t offset, std::uint32_t k_max)
      : raw_{raw}, offset_{offset}, k_max_{k_max}
  {
  }

  [[nodiscard]] auto slot_use() const -> std::uint32_t { return LoadU32(raw_, kSlotUseOffset); }
  [[nodiscard]] auto depth() const -> std::uint32_t { return LoadU32(raw_, kDepthOffset); }
  [[nodiscard]] auto is_leaf() const -> bool { return depth() == 0; }
  [[nodiscard]] auto offset() const -> std::uint64_t { return offset_; }
  [[nodiscard]] auto k_max() const -> std::uint32_t { return k_max_; }

  /// All k_max key slots, 32 bytes each, padding included.
  [[nodiscard]] auto
  key_region() const  //
      -> std::span<const std::uint8_t>
  {
    return raw_.subspan(kNodeHeaderSize, kKeyBytes * k_max_);
  }

  [[nodiscard]] auto
  key(const std::size_t slot) const  //
      -> KeyBytes
  {
    return KeyBytes{raw_.subspan(kNodeHeaderSize + kKeyBytes * slot, kKeyBytes)};
  }

  [[nodiscard]] auto
  child(const std::size_t slot) const  //
      -> std::uint64_t
  {
    return LoadU64(raw_, tail_offset() + 8 * slot);
  }

  [[nodiscard]] auto
  data(const std::size_t slot) const  //
      -> DataValue
  {
    return LoadU64(raw_, tail_offset() + 8 * slot);
  }

  [[nodiscard]] auto
  raw() const  //
      -> std::span<const std::uint8_t>
  {
    return raw_;
  }

  [[nodiscard]] auto
  tail_offset() const  //
      -> std::uint64_t
  {
    return kNodeHeaderSize + kKeyBytes * k_max_;
  }

 private:
  std::span<const std::uint8_t> raw_;
  std::uint64_t offset_;
  std::uint32_t k_max_;
};

/*######################################################################################
 * Flat tree
 *####################################################################################*/

/**
 * @brief A B+ tree flattened breadth-first into equally sized nodes.
 *
 * The root sits at offset 0 and every depth-d node precedes every depth-(d-1)
 * node. Construction does not validate; use validate() or deserialize() for
 * untrusted bytes.
 */
class FlatTree
{
 public:
  FlatTree() = default;
  FlatTree(TreeMeta meta, std::vector<std::uint8_t> nodes)
      : meta_{meta}, nodes_{std::move(nodes)}
  {
  }

  [[nodiscard]] auto meta() const -> const TreeMeta & { return meta_; }
  [[nodiscard]] auto bytes() const -> std::span<const std::uint8_t> { return nodes_; }
  [[nodiscard]] auto height() const -> std::uint32_t { return meta_.height_h; }

  /// Node at a byte offset; throws TreeFormatError for misaligned or out-of-range offsets.
  [[nodiscard]] auto node(std::uint64_t offset) const -> NodeRef;

  [[nodiscard]] auto root() const -> NodeRef { return node(meta_.root_offset); }

  /// Number of nodes stored at each depth, indexed by depth (0 = leaves).
  [[nodiscard]] auto nodes_per_depth() const -> std::vector<std::uint64_t>;

  /// All (key, data) pairs in key order, read from the leaf level.
  [[nodiscard]] auto entries() const -> std::vector<std::pair<Key256, DataValue>>;

  friend auto
  operator==(const FlatTree &a, const FlatTree &b)  //
      -> bool
  {
    return a.meta_ == b.meta_ && a.nodes_ == b.nodes_;
  }

 private:
  TreeMeta meta_{};
  std::vector<std::uint8_t> nodes_{};
};

/*######################################################################################
 * Serialization and validation
 *####################################################################################*/

/// File header followed by the raw node region; deterministic and bit-exact.
auto serialize(const FlatTree &tree) -> std::vector<std::uint8_t>;
void serialize(const FlatTree &tree, std::ostream &out);

/// Parses and fully validates a tree file. Throws TreeFormatError on the first broken rule.
auto deserialize(std::span<const std::uint8_t> file) -> FlatTree;
auto deserialize(std::istream &in) -> FlatTree;

/// Every violated rule, in discovery order. Empty iff the tree is well formed.
auto validate(const FlatTree &tree) -> std::vector<Violation>;

}  // namespace bpt

#endif  // BPT_FLAT_TREE_HPP

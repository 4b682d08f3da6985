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

#include "bpt/flat_tree.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace bpt
{
namespace
{
constexpr std::uint32_t kMaxHeight = 64;

auto
AllZero(std::span<const std::uint8_t> s)  //
    -> bool
{
  return std::all_of(s.begin(), s.end(), [](const std::uint8_t b) { return b == 0; });
}

auto
Describe(TreeErrc kind, std::uint64_t offset, const std::string &detail)  //
    -> std::string
{
  std::ostringstream os;
  os << ToString(kind) << " at offset " << offset;
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

/// Checks the metadata on its own; a tree failing here cannot be walked.
void
ValidateMeta(const TreeMeta &meta,
             const std::uint64_t buffer_size,
             std::vector<Violation> &out)
{
  if (!IsValidOrder(meta.order_m)) {
    out.push_back({TreeErrc::kInvalidOrder, 0, "order " + std::to_string(meta.order_m)});
    return;
  }
  if (meta.k_max != meta.order_m - 1 || meta.node_size != node_size(meta.order_m)) {
    out.push_back({TreeErrc::kInvalidOrder, 0, "k_max or node_size inconsistent with order"});
    return;
  }
  if (meta.height_h < 1 || meta.height_h > kMaxHeight) {
    out.push_back({TreeErrc::kInvalidHeight, 0, "height " + std::to_string(meta.height_h)});
    return;
  }
  if (meta.root_offset != 0) {
    out.push_back({TreeErrc::kBadRootOffset, 0, "root offset must be 0"});
    return;
  }
  if (meta.node_count == 0) {
    out.push_back({TreeErrc::kNodeCountMismatch, 0, "tree has no nodes"});
    return;
  }
  std::uint64_t expected{};
  if (__builtin_mul_overflow(meta.node_count, meta.node_size, &expected)) {
    out.push_back({TreeErrc::kNodeCountMismatch, 0, "node_count * node_size overflows"});
    return;
  }
  if (buffer_size < expected) {
    out.push_back({TreeErrc::kTruncated, buffer_size, "node region shorter than node_count nodes"});
    return;
  }
  if (buffer_size > expected) {
    out.push_back({TreeErrc::kNodeCountMismatch, expected, "node region longer than node_count nodes"});
    return;
  }
  try {
    if (meta.node_count > n_max(meta.order_m, meta.height_h)) {
      out.push_back({TreeErrc::kNodeCountMismatch, 0, "more nodes than a full tree of this height"});
    }
  } catch (const std::overflow_error &) {
    // capacity beyond 64 bits bounds nothing
  }
}

struct SubtreeRange {
  Key256 min{};
  Key256 max{};
};

void
ValidateSeparators(const FlatTree &tree, std::vector<Violation> &out)
{
  const auto &meta = tree.meta();
  std::vector<SubtreeRange> ranges(meta.node_count);

  // children live at larger offsets than their parents, so a reverse scan sees them first
  for (std::uint64_t idx = meta.node_count; idx-- > 0;) {
    const auto node = tree.node(idx * meta.node_size);
    const auto su = node.slot_use();
    if (node.is_leaf()) {
      ranges[idx] = {Key256::FromBytes(node.key(0)), Key256::FromBytes(node.key(su - 1))};
      continue;
    }
    for (std::uint32_t i = 0; i <= su; ++i) {
      const auto &child = ranges[node.child(i) / meta.node_size];
      if (i < su && compare_keys(child.max.View(), node.key(i)) != Ordering::kEqual) {
        out.push_back({TreeErrc::kSeparatorMismatch, node.offset(),
                       "separator " + std::to_string(i) + " is not the maximum of its subtree"});
      }
      if (i > 0 && compare_keys(child.min.View(), node.key(i - 1)) != Ordering::kGreater) {
        out.push_back({TreeErrc::kSeparatorMismatch, node.offset(),
                       "subtree " + std::to_string(i) + " holds a key not above separator " +
                           std::to_string(i - 1)});
      }
    }
    ranges[idx] = {ranges[node.child(0) / meta.node_size].min,
                   ranges[node.child(su) / meta.node_size].max};
  }
}
}  // namespace

auto
ToString(const TreeErrc kind)  //
    -> std::string_view
{
  switch (kind) {
    case TreeErrc::kBadMagic:
      return "bad_magic";
    case TreeErrc::kUnsupportedVersion:
      return "unsupported_version";
    case TreeErrc::kInvalidOrder:
      return "invalid_order";
    case TreeErrc::kInvalidHeight:
      return "invalid_height";
    case TreeErrc::kBadRootOffset:
      return "bad_root_offset";
    case TreeErrc::kTruncated:
      return "truncated";
    case TreeErrc::kNodeCountMismatch:
      return "node_count_mismatch";
    case TreeErrc::kEntryCountMismatch:
      return "entry_count_mismatch";
    case TreeErrc::kSlotUseInvalid:
      return "slot_use_invalid";
    case TreeErrc::kKeyOrder:
      return "key_order";
    case TreeErrc::kSeparatorMismatch:
      return "separator_mismatch";
    case TreeErrc::kUnderfilled:
      return "underfilled";
    case TreeErrc::kChildOutOfBounds:
      return "child_out_of_bounds";
    case TreeErrc::kMisalignedChild:
      return "misaligned_child";
    case TreeErrc::kDepthMismatch:
      return "depth_mismatch";
    case TreeErrc::kLayering:
      return "layering";
    case TreeErrc::kTopology:
      return "topology";
    case TreeErrc::kSentinelPayload:
      return "sentinel_payload";
    case TreeErrc::kNonZeroPadding:
      return "nonzero_padding";
  }
  return "unknown";
}

TreeFormatError::TreeFormatError(const TreeErrc kind,
                                 const std::uint64_t offset,
                                 const std::string &detail)
    : std::runtime_error{Describe(kind, offset, detail)}, kind_{kind}, offset_{offset}
{
}

auto
LoadU32(std::span<const std::uint8_t> buf, const std::uint64_t pos)  //
    -> std::uint32_t
{
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[pos + i]) << (8 * i);
  return v;
}

auto
LoadU64(std::span<const std::uint8_t> buf, const std::uint64_t pos)  //
    -> std::uint64_t
{
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[pos + i]) << (8 * i);
  return v;
}

void
StoreU32(std::span<std::uint8_t> buf, const std::uint64_t pos, const std::uint32_t v)
{
  for (std::size_t i = 0; i < 4; ++i) buf[pos + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void
StoreU64(std::span<std::uint8_t> buf, const std::uint64_t pos, const std::uint64_t v)
{
  for (std::size_t i = 0; i < 8; ++i) buf[pos + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

/*######################################################################################
 * FlatTree
 *####################################################################################*/

auto
FlatTree::node(const std::uint64_t offset) const  //
    -> NodeRef
{
  const auto ns = meta_.node_size;
  if (ns == 0 || offset % ns != 0) {
    throw TreeFormatError{TreeErrc::kMisalignedChild, offset, "node address not node-aligned"};
  }
  if (offset >= nodes_.size() || nodes_.size() - offset < ns) {
    throw TreeFormatError{TreeErrc::kChildOutOfBounds, offset, "node address past end of tree"};
  }
  return NodeRef{std::span<const std::uint8_t>{nodes_}.subspan(offset, ns), offset, meta_.k_max};
}

auto
FlatTree::nodes_per_depth() const  //
    -> std::vector<std::uint64_t>
{
  std::vector<std::uint64_t> counts(meta_.height_h, 0);
  for (std::uint64_t off = 0; off + meta_.node_size <= nodes_.size(); off += meta_.node_size) {
    const auto d = node(off).depth();
    if (d < counts.size()) ++counts[d];
  }
  return counts;
}

auto
FlatTree::entries() const  //
    -> std::vector<std::pair<Key256, DataValue>>
{
  std::vector<std::pair<Key256, DataValue>> out;
  out.reserve(meta_.entry_count);
  for (std::uint64_t off = 0; off + meta_.node_size <= nodes_.size(); off += meta_.node_size) {
    const auto n = node(off);
    if (!n.is_leaf()) continue;
    const auto su = std::min(n.slot_use(), meta_.k_max);
    for (std::uint32_t i = 0; i < su; ++i) out.emplace_back(Key256::FromBytes(n.key(i)), n.data(i));
  }
  return out;
}

/*######################################################################################
 * Serialization
 *####################################################################################*/

auto
serialize(const FlatTree &tree)  //
    -> std::vector<std::uint8_t>
{
  const auto &meta = tree.meta();
  const auto body = tree.bytes();
  std::vector<std::uint8_t> out(kFileHeaderSize + body.size(), 0);
  std::memcpy(out.data(), kMagic, sizeof(kMagic));
  StoreU32(out, 4, kFormatVersion);
  StoreU32(out, 8, meta.order_m);
  StoreU32(out, 12, meta.height_h);
  StoreU64(out, 16, meta.node_count);
  StoreU64(out, 24, meta.entry_count);
  StoreU64(out, 32, meta.root_offset);
  std::copy(body.begin(), body.end(), out.begin() + kFileHeaderSize);
  return out;
}

void
serialize(const FlatTree &tree, std::ostream &out)
{
  const auto bytes = serialize(tree);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error{"failed to write tree"};
}

auto
deserialize(std::span<const std::uint8_t> file)  //
    -> FlatTree
{
  if (file.size() < kFileHeaderSize) {
    throw TreeFormatError{TreeErrc::kTruncated, file.size(), "file shorter than header"};
  }
  if (std::memcmp(file.data(), kMagic, sizeof(kMagic)) != 0) {
    throw TreeFormatError{TreeErrc::kBadMagic, 0, "expected \"BPTF\""};
  }
  if (const auto v = LoadU32(file, 4); v != kFormatVersion) {
    throw TreeFormatError{TreeErrc::kUnsupportedVersion, 4, "version " + std::to_string(v)};
  }
  const auto order_m = LoadU32(file, 8);
  if (!IsValidOrder(order_m)) {
    throw TreeFormatError{TreeErrc::kInvalidOrder, 8, "order " + std::to_string(order_m)};
  }
  const auto height = LoadU32(file, 12);
  if (height < 1 || height > kMaxHeight) {
    throw TreeFormatError{TreeErrc::kInvalidHeight, 12, "height " + std::to_string(height)};
  }
  if (LoadU64(file, 32) != 0) {
    throw TreeFormatError{TreeErrc::kBadRootOffset, 32, "root offset must be 0"};
  }
  if (!AllZero(file.subspan(40, kFileHeaderSize - 40))) {
    throw TreeFormatError{TreeErrc::kNonZeroPadding, 40, "header padding"};
  }

  auto meta = TreeMeta::Make(order_m, height, LoadU64(file, 16), LoadU64(file, 24));
  const auto body = file.subspan(kFileHeaderSize);

  std::vector<Violation> violations;
  ValidateMeta(meta, body.size(), violations);
  if (!violations.empty()) throw TreeFormatError{violations.front()};

  FlatTree tree{meta, std::vector<std::uint8_t>(body.begin(), body.end())};
  violations = validate(tree);
  if (!violations.empty()) throw TreeFormatError{violations.front()};
  return tree;
}

auto
deserialize(std::istream &in)  //
    -> FlatTree
{
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
  if (in.bad()) throw std::runtime_error{"failed to read tree"};
  return deserialize(std::span<const std::uint8_t>{bytes});
}

/*######################################################################################
 * Validation
 *####################################################################################*/

auto
validate(const FlatTree &tree)  //
    -> std::vector<Violation>
{
  std::vector<Violation> out;
  const auto &meta = tree.meta();
  ValidateMeta(meta, tree.bytes().size(), out);
  if (!out.empty()) return out;

  const auto ns = meta.node_size;
  const auto k_max = meta.k_max;
  const auto min_children = (meta.order_m + 1) / 2;
  const auto buffer_size = tree.bytes().size();
  std::vector<std::uint32_t> parents(meta.node_count, 0);
  std::uint64_t leaf_entries = 0;
  std::optional<std::uint32_t> prev_depth{};
  bool references_complete = true;  // false once a node's children cannot be enumerated

  for (std::uint64_t off = 0; off < buffer_size; off += ns) {
    const auto node = tree.node(off);
    const auto su = node.slot_use();
    const auto depth = node.depth();
    const bool su_ok = su >= 1 && su <= k_max;
    const bool depth_ok = depth < meta.height_h;

    if (!su_ok) {
      out.push_back({TreeErrc::kSlotUseInvalid, off, "slot_use " + std::to_string(su)});
    }
    if (!depth_ok) {
      out.push_back({TreeErrc::kDepthMismatch, off, "depth beyond tree height"});
    }
    if (off == 0 && depth != meta.height_h - 1) {
      out.push_back({TreeErrc::kDepthMismatch, off, "root depth must be height - 1"});
    }
    if (prev_depth && depth > *prev_depth) {
      out.push_back({TreeErrc::kLayering, off, "depth increases in breadth-first order"});
    }
    prev_depth = depth;
    if (!AllZero(node.raw().subspan(8, kNodeHeaderSize - 8))) {
      out.push_back({TreeErrc::kNonZeroPadding, off, "node header padding"});
    }
    if (!su_ok || !depth_ok) {
      references_complete = false;
      continue;
    }

    for (std::uint32_t i = 1; i < su; ++i) {
      if (compare_keys(node.key(i - 1), node.key(i)) != Ordering::kLess) {
        out.push_back({TreeErrc::kKeyOrder, off, "keys not strictly ascending at slot " + std::to_string(i)});
        break;
      }
    }
    if (!AllZero(node.key_region().subspan(kKeyBytes * su))) {
      out.push_back({TreeErrc::kNonZeroPadding, off, "unused key slots"});
    }

    const auto tail = node.raw().subspan(node.tail_offset());
    if (node.is_leaf()) {
      leaf_entries += su;
      for (std::uint32_t i = 0; i < su; ++i) {
        if (node.data(i) == kNotFound) {
          out.push_back({TreeErrc::kSentinelPayload, off, "payload equals the not-found sentinel"});
          break;
        }
      }
      if (!AllZero(tail.subspan(8 * su))) {
        out.push_back({TreeErrc::kNonZeroPadding, off, "unused payload slots"});
      }
      continue;
    }

    if (off != 0 && su + 1 < min_children) {
      out.push_back({TreeErrc::kUnderfilled, off,
                     std::to_string(su + 1) + " children, need " + std::to_string(min_children)});
    }
    for (std::uint32_t i = 0; i <= su; ++i) {
      const auto c = node.child(i);
      if (c % ns != 0) {
        out.push_back({TreeErrc::kMisalignedChild, off, "child " + std::to_string(i) + " -> " + std::to_string(c)});
      } else if (c >= buffer_size) {
        out.push_back({TreeErrc::kChildOutOfBounds, off, "child " + std::to_string(i) + " -> " + std::to_string(c)});
      } else if (c == 0) {
        out.push_back({TreeErrc::kTopology, off, "child points at the root"});
      } else if (tree.node(c).depth() + 1 != depth) {
        out.push_back({TreeErrc::kDepthMismatch, c, "child depth is not parent depth - 1"});
      } else {
        ++parents[c / ns];
      }
    }
    if (!AllZero(tail.subspan(8 * (su + 1)))) {
      out.push_back({TreeErrc::kNonZeroPadding, off, "unused child slots"});
    }
  }

  for (std::uint64_t idx = 1; idx < meta.node_count; ++idx) {
    if (parents[idx] > 1 || (parents[idx] == 0 && references_complete)) {
      out.push_back({TreeErrc::kTopology, idx * ns,
                     "node referenced " + std::to_string(parents[idx]) + " times"});
    }
  }
  if (out.empty() && leaf_entries != meta.entry_count) {
    out.push_back({TreeErrc::kEntryCountMismatch, 0,
                   "header says " + std::to_string(meta.entry_count) + ", leaves hold " +
                       std::to_string(leaf_entries)});
  }
  if (out.empty()) ValidateSeparators(tree, out);
  return out;
}

}  // namespace bpt

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
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "bpt/builder.hpp"
#include "bpt/gen.hpp"
#include "corruptions.hpp"
#include "test_support.hpp"

namespace bpt::test
{
using bpt::testing::RangeEntries;

namespace
{
auto
Hex(std::span<const std::uint8_t> bytes)  //
    -> std::string
{
  std::string out;
  char buf[3];
  for (const auto b : bytes) {
    std::snprintf(buf, sizeof(buf), "%02x", b);
    out += buf;
  }
  return out;
}

auto
WithBytes(const FlatTree &tree, const std::function<void(std::vector<std::uint8_t> &)> &mutate)  //
    -> FlatTree
{
  std::vector<std::uint8_t> bytes(tree.bytes().begin(), tree.bytes().end());
  mutate(bytes);
  return FlatTree{tree.meta(), std::move(bytes)};
}

auto
Kinds(const std::vector<Violation> &vs)  //
    -> std::set<TreeErrc>
{
  std::set<TreeErrc> out;
  for (const auto &v : vs) out.insert(v.kind);
  return out;
}
}  // namespace

TEST(Serialize, SingleLeafFileLayout)
{
  const auto tree = bulk_load(RangeEntries(0x42, 0x42), 16);
  const auto file = serialize(tree);
  ASSERT_EQ(file.size(), 64U + 640U);

  // header, field by field
  EXPECT_EQ(Hex(std::span{file}.first(64)),
            "42505446"            // "BPTF"
            "01000000"            // version 1
            "10000000"            // order 16
            "01000000"            // height 1
            "0100000000000000"    // node_count
            "0100000000000000"    // entry_count
            "0000000000000000"    // root_offset
            + std::string(48, '0'));

  const auto node = std::span{file}.subspan(64);
  EXPECT_EQ(Hex(node.first(8)), "0100000000000000");  // slotUse 1, depth 0
  EXPECT_TRUE(std::all_of(node.begin() + 8, node.begin() + 32, [](auto b) { return b == 0; }));
  EXPECT_EQ(Hex(node.subspan(32, 32)), std::string(62, '0') + "42");
  const auto data_pos = 32 + 32 * 15;
  EXPECT_EQ(Hex(node.subspan(data_pos, 8)), "9502000000000000");  // 10 * 0x42 + 1 = 661
  EXPECT_TRUE(std::all_of(node.begin() + data_pos + 8, node.end(), [](auto b) { return b == 0; }));
}

TEST(Serialize, FourNodeTreeRegion)
{
  const auto tree = bulk_load(RangeEntries(1, 40), 16);  // leaves 15/15/10 under one root
  ASSERT_EQ(tree.meta().node_count, 4U);
  EXPECT_EQ(tree.bytes().size(), 4U * 640U);
  EXPECT_EQ(serialize(tree).size(), 64U + 2560U);
}

TEST(Serialize, RoundTripIsByteIdentical)
{
  std::mt19937_64 rng{11};
  for (int i = 0; i < 30; ++i) {
    const std::uint32_t m = std::array<std::uint32_t, 3>{16, 32, 64}[rng() % 3];
    const auto tree = GenerateTree({.entry_count = 1 + rng() % 20000, .order_m = m, .seed = rng(),
                                    .wide_keys = rng() % 2 == 0});
    const auto file = serialize(tree);
    ASSERT_EQ(file.size(), kFileHeaderSize + tree.meta().node_count * 40ULL * m);
    const auto back = deserialize(std::span<const std::uint8_t>{file});
    ASSERT_EQ(back, tree);
    ASSERT_EQ(serialize(back), file);
  }
}

TEST(Serialize, StreamRoundTrip)
{
  const auto tree = bulk_load(RangeEntries(1, 500), 16);
  std::stringstream ss;
  serialize(tree, ss);
  EXPECT_EQ(deserialize(ss), tree);
}

TEST(Deserialize, RejectsEachCorruptionWithItsOwnKind)
{
  const auto tree = GenerateTree({.entry_count = 1000, .order_m = 16, .seed = 3});
  ASSERT_EQ(tree.height(), 3U);
  std::set<TreeErrc> seen;
  for (const auto &c : bpt::testing::MakeCorruptions(tree)) {
    try {
      (void)deserialize(std::span<const std::uint8_t>{c.file});
      ADD_FAILURE() << c.name << " accepted";
    } catch (const TreeFormatError &e) {
      EXPECT_EQ(e.kind(), c.expected) << c.name << ": " << e.what();
      seen.insert(e.kind());
    }
  }
  EXPECT_EQ(seen.size(), 10U);
}

TEST(Deserialize, HeaderErrors)
{
  const auto file = serialize(bulk_load(RangeEntries(1, 100), 16));
  auto expect_kind = [](std::vector<std::uint8_t> f, TreeErrc kind) {
    try {
      (void)deserialize(std::span<const std::uint8_t>{f});
      ADD_FAILURE() << "accepted";
    } catch (const TreeFormatError &e) {
      EXPECT_EQ(e.kind(), kind) << e.what();
    }
  };
  auto f = file;
  StoreU32(f, 4, 2);
  expect_kind(f, TreeErrc::kUnsupportedVersion);
  f = file;
  StoreU32(f, 8, 18);
  expect_kind(f, TreeErrc::kInvalidOrder);
  f = file;
  StoreU32(f, 12, 0);
  expect_kind(f, TreeErrc::kInvalidHeight);
  f = file;
  StoreU64(f, 32, 640);
  expect_kind(f, TreeErrc::kBadRootOffset);
  f = file;
  f[50] = 1;
  expect_kind(f, TreeErrc::kNonZeroPadding);
  expect_kind(std::vector<std::uint8_t>(file.begin(), file.begin() + 20), TreeErrc::kTruncated);
  f = file;
  StoreU64(f, 16, 1ULL << 62);
  expect_kind(f, TreeErrc::kNodeCountMismatch);
}

TEST(Deserialize, ChildAtBufferEndIsOutOfBounds)
{
  const auto tree = bulk_load(RangeEntries(1, 100), 16);
  auto file = serialize(tree);
  StoreU64(file, kFileHeaderSize + 32 + 32 * 15, tree.bytes().size());
  try {
    (void)deserialize(std::span<const std::uint8_t>{file});
    FAIL();
  } catch (const TreeFormatError &e) {
    EXPECT_EQ(e.kind(), TreeErrc::kChildOutOfBounds);
    EXPECT_EQ(e.offset(), 0U);
  }
}

TEST(Validate, FreshTreeIsClean)
{
  EXPECT_TRUE(validate(bulk_load(RangeEntries(1, 5000), 32)).empty());
}

TEST(Validate, SlotUseZeroOnInnerNode)
{
  const auto tree = bulk_load(RangeEntries(1, 5000), 16);
  ASSERT_GE(tree.height(), 3U);
  const std::uint64_t inner = 640;  // first node below the root
  ASSERT_FALSE(tree.node(inner).is_leaf());
  const auto bad = WithBytes(tree, [&](auto &b) { StoreU32(b, inner, 0); });
  const auto vs = validate(bad);
  ASSERT_EQ(vs.size(), 1U);
  EXPECT_EQ(vs[0].kind, TreeErrc::kSlotUseInvalid);
  EXPECT_EQ(vs[0].offset, inner);
}

TEST(Validate, SwappedLeafKeys)
{
  const auto tree = bulk_load(RangeEntries(1, 100), 16);
  const auto leaf = bpt::testing::FirstLeaf(tree);
  const auto bad = WithBytes(tree, [&](auto &b) {
    for (std::size_t i = 0; i < kKeyBytes; ++i) std::swap(b[leaf + 32 + i], b[leaf + 64 + i]);
  });
  const auto vs = validate(bad);
  ASSERT_FALSE(vs.empty());
  EXPECT_EQ(vs[0].kind, TreeErrc::kKeyOrder);
  EXPECT_EQ(vs[0].offset, leaf);
}

TEST(Validate, SeparatorNotSubtreeMaximum)
{
  const auto tree = bulk_load(RangeEntries(10, 100), 16);
  // separator 0 of the root: bump its lowest byte so it no longer equals the left subtree max
  const auto bad = WithBytes(tree, [](auto &b) { b[32 + 31] += 1; });
  EXPECT_EQ(Kinds(validate(bad)), std::set<TreeErrc>{TreeErrc::kSeparatorMismatch});
}

TEST(Validate, UnderfilledInnerNode)
{
  // order 16 needs 8 children in non-root inner nodes; keep only 7 in the first inner node
  const auto tree = bulk_load(RangeEntries(1, 5000), 16);
  const std::uint64_t inner = 640;
  const auto su = tree.node(inner).slot_use();
  const auto bad = WithBytes(tree, [&](auto &b) {
    StoreU32(b, inner, 6);
    for (std::uint32_t i = 6; i < su; ++i) std::fill_n(b.begin() + inner + 32 + 32 * i, 32, 0);
    for (std::uint32_t i = 7; i <= su; ++i) StoreU64(b, inner + 32 + 32 * 15 + 8 * i, 0);
  });
  const auto kinds = Kinds(validate(bad));
  EXPECT_TRUE(kinds.count(TreeErrc::kUnderfilled));
  EXPECT_TRUE(kinds.count(TreeErrc::kTopology));  // the dropped children became unreachable
}

TEST(Validate, LayeringAndPadding)
{
  const auto tree = bulk_load(RangeEntries(1, 100), 16);
  const auto padded = WithBytes(tree, [](auto &b) { b[20] = 7; });
  EXPECT_EQ(validate(padded)[0].kind, TreeErrc::kNonZeroPadding);

  const auto leaf_tail = WithBytes(tree, [](auto &b) { b[640 + 639] = 1; });
  EXPECT_EQ(validate(leaf_tail)[0].kind, TreeErrc::kNonZeroPadding);
}

TEST(Validate, MetaMismatch)
{
  const auto tree = bulk_load(RangeEntries(1, 100), 16);
  auto meta = tree.meta();
  meta.node_count += 1;
  const FlatTree bad{meta, std::vector<std::uint8_t>(tree.bytes().begin(), tree.bytes().end())};
  EXPECT_EQ(validate(bad)[0].kind, TreeErrc::kTruncated);
}

TEST(FlatTree, NodeAccessChecksAddress)
{
  const auto tree = bulk_load(RangeEntries(1, 100), 16);
  EXPECT_THROW((void)tree.node(8), TreeFormatError);
  EXPECT_THROW((void)tree.node(tree.bytes().size()), TreeFormatError);
  EXPECT_EQ(tree.nodes_per_depth(), (std::vector<std::uint64_t>{7, 1}));
}

}  // namespace bpt::test

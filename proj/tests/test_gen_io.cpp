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
#include <filesystem>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bpt/io.hpp"
#include "test_support.hpp"

namespace bpt::test
{
TEST(UniformBelow, StaysInRangeAndCoversIt)
{
  std::mt19937_64 rng{1};
  std::vector<int> hist(7);
  for (int i = 0; i < 70000; ++i) {
    const auto v = UniformBelow(rng, 7);
    ASSERT_LT(v, 7U);
    ++hist[v];
  }
  for (const auto c : hist) EXPECT_GT(c, 9000);
  EXPECT_THROW(UniformBelow(rng, 0), std::invalid_argument);
}

TEST(GenerateEntries, DistinctSortedAndSeeded)
{
  for (const bool wide : {false, true}) {
    const auto a = GenerateEntries(5000, 42, wide);
    ASSERT_EQ(a.size(), 5000U);
    EXPECT_TRUE(std::adjacent_find(a.begin(), a.end(), [](const auto &x, const auto &y) {
                  return !(x.first < y.first);
                }) == a.end());
    for (const auto &[k, v] : a) EXPECT_NE(v, kNotFound);
    EXPECT_EQ(a, GenerateEntries(5000, 42, wide));
    EXPECT_NE(a, GenerateEntries(5000, 43, wide));
  }
}

TEST(GenerateTree, SameSeedSameBytes)
{
  const auto a = GenerateTree({.entry_count = 3000, .order_m = 32, .seed = 5});
  const auto b = GenerateTree({.entry_count = 3000, .order_m = 32, .seed = 5});
  EXPECT_EQ(serialize(a), serialize(b));
  EXPECT_TRUE(validate(a).empty());
}

TEST(GenerateBatch, HitRatioExtremes)
{
  const auto entries = GenerateEntries(2000, 9, false);
  const bpt::testing::MapOracle oracle{entries};
  const auto all_hits = GenerateBatch(entries, 500, 1, 1.0, false);
  ASSERT_EQ(all_hits.size(), 500U);
  for (const auto &k : all_hits) EXPECT_TRUE(oracle.Lookup(k).found());

  const auto no_hits = GenerateBatch(entries, 500, 1, 0.0, true);
  for (const auto &k : no_hits) EXPECT_FALSE(oracle.Lookup(k).found());

  const auto half = GenerateBatch(entries, 101, 1, 0.5, false);
  EXPECT_EQ(std::count_if(half.begin(), half.end(), [&](const auto &k) { return oracle.Lookup(k).found(); }), 51);
  EXPECT_EQ(half, GenerateBatch(entries, 101, 1, 0.5, false));
}

TEST(GenerateBatch, RejectsBadArguments)
{
  const auto entries = GenerateEntries(10, 1, false);
  EXPECT_THROW(GenerateBatch(entries, 10, 1, 1.5, false), std::invalid_argument);
  EXPECT_THROW(GenerateBatch(entries, 10, 1, -0.1, false), std::invalid_argument);
  EXPECT_THROW(GenerateBatch(entries, 0, 1, 0.5, false), std::invalid_argument);
  EXPECT_THROW(GenerateBatch({}, 10, 1, 0.5, false), std::invalid_argument);
}

class FileIoTest : public ::testing::Test
{
 protected:
  void
  SetUp() override
  {
    dir_ = std::filesystem::temp_directory_path() /
           ("bpt_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }

  void
  TearDown() override
  {
    std::filesystem::remove_all(dir_);
  }

  std::filesystem::path dir_;
};

TEST_F(FileIoTest, KeysFileIsRawConcatenation)
{
  const auto keys = GenerateBatch(GenerateEntries(4000, 2, false), 1000, 8, 0.5, false);
  WriteKeysFile(dir_ / "b.keys", keys);
  EXPECT_EQ(std::filesystem::file_size(dir_ / "b.keys"), 32000U);
  const auto bytes = ReadFileBytes(dir_ / "b.keys");
  EXPECT_TRUE(std::equal(keys[3].bytes.begin(), keys[3].bytes.end(), bytes.begin() + 96));
  EXPECT_EQ(ReadKeysFile(dir_ / "b.keys"), keys);
}

TEST_F(FileIoTest, TreeFileRoundTrip)
{
  const auto tree = GenerateTree({.entry_count = 777, .order_m = 16, .seed = 4});
  WriteTreeFile(dir_ / "t.bpt", tree);
  EXPECT_EQ(std::filesystem::file_size(dir_ / "t.bpt"), kFileHeaderSize + tree.meta().node_count * 640);
  EXPECT_EQ(ReadTreeFile(dir_ / "t.bpt"), tree);
  EXPECT_THROW(ReadTreeFile(dir_ / "missing.bpt"), std::runtime_error);
}

TEST(Codec, RejectsPartialRecords)
{
  EXPECT_THROW(DecodeKeys(std::vector<std::uint8_t>(33)), FileFormatError);
  EXPECT_THROW(DecodeResults(std::vector<std::uint8_t>(12)), FileFormatError);
  EXPECT_TRUE(DecodeKeys({}).empty());
}

TEST(Codec, ResultsAreLittleEndianWithSentinel)
{
  const std::vector<SearchResult> rs{{0x0102030405060708ULL}, {}};
  const auto bytes = EncodeResults(rs);
  ASSERT_EQ(bytes.size(), 16U);
  EXPECT_EQ(bytes[0], 0x08);
  EXPECT_EQ(bytes[7], 0x01);
  EXPECT_TRUE(std::all_of(bytes.begin() + 8, bytes.end(), [](auto b) { return b == 0xFF; }));
  EXPECT_EQ(DecodeResults(bytes), rs);
}

TEST(StatsJson, UsesFieldNames)
{
  const auto tree = GenerateTree({.entry_count = 5000, .order_m = 16, .seed = 1});
  const auto sorted = sort_and_restore(GenerateBatch(tree.entries(), 64, 2, 0.5, false));
  const auto out = batch_search(tree, sorted.batch);
  const auto j = nlohmann::json::parse(StatsToJson(out.stats));
  EXPECT_EQ(j["node_loads_per_level"].size(), tree.height());
  EXPECT_EQ(j["total_node_loads"], out.stats.total_node_loads);
  EXPECT_EQ(j["bytes_fetched"], out.stats.bytes_fetched);
  EXPECT_EQ(j["slot_comparisons"], out.stats.slot_comparisons);
  EXPECT_EQ(j["fifo_high_water"], out.stats.fifo_high_water);
  EXPECT_EQ(j["batch_size"], 64);

  const auto part = partitioned_search(tree, sorted.batch, 4);
  const auto pj = nlohmann::json::parse(PartitionedStatsToJson(part));
  EXPECT_EQ(pj["instances"].size(), 4U);
  EXPECT_EQ(pj["sub_batch_sizes"], (std::vector<std::size_t>{16, 16, 16, 16}));
  EXPECT_EQ(pj["total_node_loads"], part.aggregate.total_node_loads);
}

}  // namespace bpt::test

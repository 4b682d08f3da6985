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

#include "bpt/io.hpp"

#include <fstream>
#include <iterator>

#include <json.hpp>

namespace bpt
{
namespace
{
auto
StatsObject(const SearchStats &stats)  //
    -> nlohmann::ordered_json
{
  return {
      {"node_loads_per_level", stats.node_loads_per_level},
      {"total_node_loads", stats.total_node_loads},
      {"bytes_fetched", stats.bytes_fetched},
      {"slot_comparisons", stats.slot_comparisons},
      {"fifo_high_water", stats.fifo_high_water},
      {"batch_size", stats.batch_size},
  };
}
}  // namespace

auto
ReadFileBytes(const std::filesystem::path &path)  //
    -> std::vector<std::uint8_t>
{
  std::ifstream in{path, std::ios::binary};
  if (!in) throw std::runtime_error{"cannot open '" + path.string() + "' for reading"};
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
  if (in.bad()) throw std::runtime_error{"failed reading '" + path.string() + "'"};
  return bytes;
}

void
WriteFileBytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes)
{
  std::ofstream out{path, std::ios::binary | std::ios::trunc};
  if (!out) throw std::runtime_error{"cannot open '" + path.string() + "' for writing"};
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error{"failed writing '" + path.string() + "'"};
}

auto
ReadTreeFile(const std::filesystem::path &path)  //
    -> FlatTree
{
  const auto bytes = ReadFileBytes(path);
  return deserialize(std::span<const std::uint8_t>{bytes});
}

void
WriteTreeFile(const std::filesystem::path &path, const FlatTree &tree)
{
  WriteFileBytes(path, serialize(tree));
}

auto
DecodeKeys(std::span<const std::uint8_t> bytes)  //
    -> std::vector<Key256>
{
  if (bytes.size() % kKeyBytes != 0) {
    throw FileFormatError{"key file length " + std::to_string(bytes.size()) + " is not a multiple of 32"};
  }
  std::vector<Key256> keys;
  keys.reserve(bytes.size() / kKeyBytes);
  for (std::size_t off = 0; off < bytes.size(); off += kKeyBytes) {
    keys.push_back(Key256::FromBytes(KeyBytes{bytes.subspan(off, kKeyBytes)}));
  }
  return keys;
}

auto
EncodeKeys(std::span<const Key256> keys)  //
    -> std::vector<std::uint8_t>
{
  std::vector<std::uint8_t> out;
  out.reserve(keys.size() * kKeyBytes);
  for (const auto &k : keys) out.insert(out.end(), k.bytes.begin(), k.bytes.end());
  return out;
}

auto
ReadKeysFile(const std::filesystem::path &path)  //
    -> std::vector<Key256>
{
  return DecodeKeys(ReadFileBytes(path));
}

void
WriteKeysFile(const std::filesystem::path &path, std::span<const Key256> keys)
{
  WriteFileBytes(path, EncodeKeys(keys));
}

auto
DecodeResults(std::span<const std::uint8_t> bytes)  //
    -> std::vector<SearchResult>
{
  if (bytes.size() % 8 != 0) {
    throw FileFormatError{"result file length " + std::to_string(bytes.size()) + " is not a multiple of 8"};
  }
  std::vector<SearchResult> out;
  out.reserve(bytes.size() / 8);
  for (std::size_t off = 0; off < bytes.size(); off += 8) out.push_back(SearchResult{LoadU64(bytes, off)});
  return out;
}

auto
EncodeResults(std::span<const SearchResult> results)  //
    -> std::vector<std::uint8_t>
{
  std::vector<std::uint8_t> out(results.size() * 8);
  for (std::size_t i = 0; i < results.size(); ++i) StoreU64(out, 8 * i, results[i].value);
  return out;
}

auto
ReadResultsFile(const std::filesystem::path &path)  //
    -> std::vector<SearchResult>
{
  return DecodeResults(ReadFileBytes(path));
}

void
WriteResultsFile(const std::filesystem::path &path, std::span<const SearchResult> results)
{
  WriteFileBytes(path, EncodeResults(results));
}

auto
StatsToJson(const SearchStats &stats)  //
    -> std::string
{
  return StatsObject(stats).dump(2);
}

auto
PartitionedStatsToJson(const PartitionedOutcome &outcome)  //
    -> std::string
{
  auto j = StatsObject(outcome.aggregate);
  j["sub_batch_sizes"] = outcome.sub_batch_sizes;
  auto &instances = j["instances"];
  instances = nlohmann::ordered_json::array();
  for (const auto &s : outcome.per_instance) instances.push_back(StatsObject(s));
  return j.dump(2);
}

}  // namespace bpt

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

#ifndef BPT_IO_HPP
#define BPT_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpt/batch_engine.hpp"
#include "bpt/flat_tree.hpp"

namespace bpt
{
// File helpers for .bpt trees, .keys batches (raw 32-byte keys) and .res results (raw u64 LE).

/// A batch or result file whose length is not a whole number of records.
class FileFormatError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

auto ReadFileBytes(const std::filesystem::path &path) -> std::vector<std::uint8_t>;
void WriteFileBytes(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

auto ReadTreeFile(const std::filesystem::path &path) -> FlatTree;
void WriteTreeFile(const std::filesystem::path &path, const FlatTree &tree);

auto DecodeKeys(std::span<const std::uint8_t> bytes) -> std::vector<Key256>;
auto EncodeKeys(std::span<const Key256> keys) -> std::vector<std::uint8_t>;
auto ReadKeysFile(const std::filesystem::path &path) -> std::vector<Key256>;
void WriteKeysFile(const std::filesystem::path &path, std::span<const Key256> keys);

auto DecodeResults(std::span<const std::uint8_t> bytes) -> std::vector<SearchResult>;
auto EncodeResults(std::span<const SearchResult> results) -> std::vector<std::uint8_t>;
auto ReadResultsFile(const std::filesystem::path &path) -> std::vector<SearchResult>;
void WriteResultsFile(const std::filesystem::path &path, std::span<const SearchResult> results);

/// SearchStats as a JSON object using the field names verbatim.
auto StatsToJson(const SearchStats &stats) -> std::string;

/// Aggregate stats at the top level plus an "instances" array and the sub-batch sizes.
auto PartitionedStatsToJson(const PartitionedOutcome &outcome) -> std::string;

}  // namespace bpt

#endif  // BPT_IO_HPP

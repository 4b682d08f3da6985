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

#ifndef BPT_BENCH_STATS_HPP
#define BPT_BENCH_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bpt/flat_tree.hpp"
#include "bpt/tree_model.hpp"

namespace bpt
{
/*######################################################################################
 * Robust statistics
 *####################################################################################*/

/// Repeated measurements of one metric; at least four so quartiles exist.
class SampleSet
{
 public:
  inline static constexpr std::size_t kMinSamples = 4;

  /// Throws std::invalid_argument for fewer than four values.
  explicit SampleSet(std::vector<double> values);

  [[nodiscard]] auto values() const -> std::span<const double> { return values_; }
  [[nodiscard]] auto sorted() const -> std::span<const double> { return sorted_; }
  [[nodiscard]] auto size() const -> std::size_t { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

struct RobustSummary {
  std::size_t n{};
  double iqm{};
  double iqr{};
  double q1{};
  double q3{};
};

/// Mean of the values left after dropping floor(n/4) from each end of the sorted samples.
auto iqm(const SampleSet &samples) -> double;

/// Q3 - Q1, where Q1/Q3 are medians of the lower/upper halves, the median itself excluded for odd n.
auto iqr(const SampleSet &samples) -> double;

auto lower_quartile(const SampleSet &samples) -> double;
auto upper_quartile(const SampleSet &samples) -> double;
auto summarize(const SampleSet &samples) -> RobustSummary;

/*######################################################################################
 * Benchmark harness
 *####################################################################################*/

enum class BenchMode : std::uint8_t { kBatched, kBaseline, kPartitioned };

auto ToString(BenchMode mode) -> std::string_view;
auto ParseBenchMode(std::string_view name) -> BenchMode;

struct BenchConfig {
  BenchMode mode{BenchMode::kBatched};
  std::size_t repeats{10};
  std::size_t batch_size{1000};  // leading keys taken from the batch source
  std::size_t instances{1};      // partitioned mode only
  std::size_t max_batch{1000};
};

struct MetricSummary {
  std::string name;
  std::string unit;
  RobustSummary summary;
  std::vector<double> samples;  // one per repetition, in run order
};

struct BenchReport {
  BenchConfig config{};
  TreeMeta tree{};
  std::vector<MetricSummary> metrics{};

  /// Throws std::out_of_range for an unknown metric.
  [[nodiscard]] auto metric(std::string_view name) const -> const MetricSummary &;
};

/**
 * @brief Run one engine `repeats` times on identical input and summarize every metric.
 *
 * Keys from `batch_source` are sorted once outside the timed region. Metrics:
 * wall_time_ns, total_node_loads, bytes_fetched, slot_comparisons,
 * fifo_high_water (zero for the baseline) and loads_per_key.
 */
auto run_benchmark(const BenchConfig &config, const FlatTree &tree, std::span<const Key256> batch_source)
    -> BenchReport;

/// JSON text with per-metric {n, iqm, iqr, q1, q3, unit, samples}.
auto ToJson(const BenchReport &report) -> std::string;

/// Header line for ToCsvRows.
auto CsvHeader() -> std::string;

/// One CSV row per repetition.
auto ToCsvRows(const BenchReport &report) -> std::string;

}  // namespace bpt

#endif  // BPT_BENCH_STATS_HPP

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

#include "bpt/bench_stats.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bpt/baseline.hpp"
#include "bpt/batch_engine.hpp"

namespace bpt
{
namespace
{
auto
Median(std::span<const double> sorted)  //
    -> double
{
  const auto n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

struct RunSample {
  double wall_time_ns{};
  SearchStats stats{};
};

auto
RunOnce(const BenchConfig &config, const FlatTree &tree, const SortedBatch &batch)  //
    -> RunSample
{
  RunSample s;
  const auto start = std::chrono::steady_clock::now();
  switch (config.mode) {
    case BenchMode::kBatched:
      s.stats = batch_search(tree, batch).stats;
      break;
    case BenchMode::kPartitioned:
      s.stats = partitioned_search(tree, batch, config.instances).aggregate;
      break;
    case BenchMode::kBaseline: {
      const auto r = sequential_batch(tree, batch.keys());
      s.stats.total_node_loads = r.total_loads;
      s.stats.bytes_fetched = r.total_loads * tree.meta().node_size;
      s.stats.slot_comparisons = r.total_loads * tree.meta().k_max;
      s.stats.batch_size = batch.size();
      break;
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  s.wall_time_ns = static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  return s;
}
}  // namespace

/*######################################################################################
 * Robust statistics
 *####################################################################################*/

SampleSet::SampleSet(std::vector<double> values) : values_{std::move(values)}, sorted_{values_}
{
  if (values_.size() < kMinSamples) {
    throw std::invalid_argument{"need at least 4 samples, got " + std::to_string(values_.size())};
  }
  std::sort(sorted_.begin(), sorted_.end());
}

auto
iqm(const SampleSet &samples)  //
    -> double
{
  const auto sorted = samples.sorted();
  const auto trim = sorted.size() / 4;
  const auto kept = sorted.subspan(trim, sorted.size() - 2 * trim);
  return std::accumulate(kept.begin(), kept.end(), 0.0) / static_cast<double>(kept.size());
}

auto
lower_quartile(const SampleSet &samples)  //
    -> double
{
  const auto sorted = samples.sorted();
  return Median(sorted.first(sorted.size() / 2));
}

auto
upper_quartile(const SampleSet &samples)  //
    -> double
{
  const auto sorted = samples.sorted();
  return Median(sorted.subspan((sorted.size() + 1) / 2));
}

auto
iqr(const SampleSet &samples)  //
    -> double
{
  return upper_quartile(samples) - lower_quartile(samples);
}

auto
summarize(const SampleSet &samples)  //
    -> RobustSummary
{
  return RobustSummary{
      .n = samples.size(),
      .iqm = iqm(samples),
      .iqr = iqr(samples),
      .q1 = lower_quartile(samples),
      .q3 = upper_quartile(samples),
  };
}

/*######################################################################################
 * Harness
 *####################################################################################*/

auto
ToString(const BenchMode mode)  //
    -> std::string_view
{
  switch (mode) {
    case BenchMode::kBatched:
      return "batched";
    case BenchMode::kBaseline:
      return "baseline";
    case BenchMode::kPartitioned:
      return "partitioned";
  }
  return "unknown";
}

auto
ParseBenchMode(const std::string_view name)  //
    -> BenchMode
{
  for (const auto m : {BenchMode::kBatched, BenchMode::kBaseline, BenchMode::kPartitioned}) {
    if (ToString(m) == name) return m;
  }
  throw std::invalid_argument{"unknown benchmark mode '" + std::string{name} + "'"};
}

auto
BenchReport::metric(const std::string_view name) const  //
    -> const MetricSummary &
{
  for (const auto &m : metrics) {
    if (m.name == name) return m;
  }
  throw std::out_of_range{"no metric named '" + std::string{name} + "'"};
}

auto
run_benchmark(const BenchConfig &config, const FlatTree &tree, std::span<const Key256> batch_source)  //
    -> BenchReport
{
  if (config.repeats < SampleSet::kMinSamples) throw std::invalid_argument{"repeats must be at least 4"};
  if (config.batch_size == 0 || config.batch_size > batch_source.size()) {
    throw std::invalid_argument{"batch size must be in 1..number of available keys"};
  }

  const auto sorted = sort_and_restore(batch_source.first(config.batch_size), config.max_batch);

  std::vector<double> wall, loads, bytes, comparisons, fifo, per_key;
  for (std::size_t r = 0; r < config.repeats; ++r) {
    const auto s = RunOnce(config, tree, sorted.batch);
    wall.push_back(s.wall_time_ns);
    loads.push_back(static_cast<double>(s.stats.total_node_loads));
    bytes.push_back(static_cast<double>(s.stats.bytes_fetched));
    comparisons.push_back(static_cast<double>(s.stats.slot_comparisons));
    fifo.push_back(static_cast<double>(s.stats.fifo_high_water));
    per_key.push_back(static_cast<double>(s.stats.total_node_loads) / static_cast<double>(config.batch_size));
  }

  BenchReport report{config, tree.meta(), {}};
  auto add = [&report](std::string name, std::string unit, std::vector<double> samples) {
    const SampleSet set{samples};
    report.metrics.push_back({std::move(name), std::move(unit), summarize(set), std::move(samples)});
  };
  add("wall_time_ns", "ns", std::move(wall));
  add("total_node_loads", "nodes", std::move(loads));
  add("bytes_fetched", "bytes", std::move(bytes));
  add("slot_comparisons", "comparisons", std::move(comparisons));
  add("fifo_high_water", "entries", std::move(fifo));
  add("loads_per_key", "nodes/key", std::move(per_key));
  return report;
}

auto
ToJson(const BenchReport &report)  //
    -> std::string
{
  nlohmann::ordered_json j;
  j["mode"] = ToString(report.config.mode);
  j["repeats"] = report.config.repeats;
  j["batch_size"] = report.config.batch_size;
  j["instances"] = report.config.instances;
  j["order_m"] = report.tree.order_m;
  j["height_h"] = report.tree.height_h;
  j["entry_count"] = report.tree.entry_count;
  j["node_count"] = report.tree.node_count;
  auto &metrics = j["metrics"];
  metrics = nlohmann::ordered_json::object();
  for (const auto &m : report.metrics) {
    metrics[m.name] = {
        {"n", m.summary.n},   {"iqm", m.summary.iqm}, {"iqr", m.summary.iqr}, {"q1", m.summary.q1},
        {"q3", m.summary.q3}, {"unit", m.unit},       {"samples", m.samples},
    };
  }
  return j.dump(2);
}

auto
CsvHeader()  //
    -> std::string
{
  return "mode,order_m,entry_count,height_h,batch_size,instances,repetition,wall_time_ns,total_node_loads,"
         "bytes_fetched,slot_comparisons,fifo_high_water,loads_per_key";
}

auto
ToCsvRows(const BenchReport &report)  //
    -> std::string
{
  static constexpr std::string_view kColumns[] = {"wall_time_ns",     "total_node_loads", "bytes_fetched",
                                                  "slot_comparisons", "fifo_high_water",  "loads_per_key"};
  std::ostringstream os;
  os.precision(17);
  for (std::size_t r = 0; r < report.config.repeats; ++r) {
    os << ToString(report.config.mode) << ',' << report.tree.order_m << ',' << report.tree.entry_count << ','
       << report.tree.height_h << ',' << report.config.batch_size << ',' << report.config.instances << ',' << r;
    for (const auto col : kColumns) os << ',' << report.metric(col).samples[r];
    os << '\n';
  }
  return os.str();
}

}  // namespace bpt

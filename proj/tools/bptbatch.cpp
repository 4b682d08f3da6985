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

// bptbatch: build flat B+ trees, generate query batches, run and verify batched search, benchmark.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpt/baseline.hpp"
#include "bpt/batch_engine.hpp"
#include "bpt/bench_stats.hpp"
#include "bpt/flat_tree.hpp"
#include "bpt/gen.hpp"
#include "bpt/io.hpp"

namespace
{
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalidInput = 2;

void
PrintMeta(const bpt::TreeMeta &meta, std::ostream &os)
{
  os << "order_m      " << meta.order_m << '\n'
     << "k_max        " << meta.k_max << '\n'
     << "height_h     " << meta.height_h << '\n'
     << "node_count   " << meta.node_count << '\n'
     << "entry_count  " << meta.entry_count << '\n'
     << "node_size    " << meta.node_size << '\n'
     << "file_bytes   " << bpt::kFileHeaderSize + meta.node_count * meta.node_size << '\n';
}

void
WriteText(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out{path, std::ios::trunc};
  if (!out) throw std::runtime_error{"cannot open '" + path.string() + "' for writing"};
  out << text << '\n';
  if (!out) throw std::runtime_error{"failed writing '" + path.string() + "'"};
}

/*######################################################################################
 * build
 *####################################################################################*/

struct BuildArgs {
  std::uint64_t entries{};
  std::uint32_t order{16};
  std::uint64_t seed{0};
  bool wide{false};
  std::string out;
};

auto
RunBuild(const BuildArgs &a)  //
    -> int
{
  const auto tree = bpt::GenerateTree({a.entries, a.order, a.seed, 0.0, a.wide});
  bpt::WriteTreeFile(a.out, tree);
  PrintMeta(tree.meta(), std::cout);
  return 0;
}

/*######################################################################################
 * gen-batch
 *####################################################################################*/

struct GenBatchArgs {
  std::string tree;
  std::size_t size{1000};
  std::uint64_t seed{0};
  double hit_ratio{0.5};
  std::size_t max_batch{bpt::kDefaultMaxBatch};
  bool wide{false};
  std::string out;
};

auto
RunGenBatch(const GenBatchArgs &a)  //
    -> int
{
  if (a.size < 1 || a.size > a.max_batch) {
    throw std::invalid_argument{"batch size must be in 1.." + std::to_string(a.max_batch)};
  }
  const auto tree = bpt::ReadTreeFile(a.tree);
  const auto entries = tree.entries();
  const auto keys = bpt::GenerateBatch(entries, a.size, a.seed, a.hit_ratio, a.wide);
  bpt::WriteKeysFile(a.out, keys);
  std::cout << "wrote " << keys.size() << " keys (" << keys.size() * bpt::kKeyBytes << " bytes) to " << a.out
            << '\n';
  return 0;
}

/*######################################################################################
 * search
 *####################################################################################*/

struct SearchArgs {
  std::string tree;
  std::string batch;
  std::size_t instances{1};
  std::size_t max_batch{bpt::kDefaultMaxBatch};
  bool sequential{false};
  std::string results_out;
  std::string stats_out;
};

auto
RunSearch(const SearchArgs &a)  //
    -> int
{
  const auto tree = bpt::ReadTreeFile(a.tree);
  const auto raw = bpt::ReadKeysFile(a.batch);
  const auto sorted = bpt::sort_and_restore(raw, a.max_batch);

  std::vector<bpt::SearchResult> results;
  std::string stats_json;
  bpt::SearchStats stats;
  if (a.instances == 1) {
    auto o = bpt::batch_search(tree, sorted.batch);
    results = bpt::RestoreOrder(sorted.permutation, o.results);
    stats = o.stats;
    stats_json = bpt::StatsToJson(stats);
  } else {
    auto o = bpt::partitioned_search(tree, sorted.batch, a.instances, !a.sequential);
    results = bpt::RestoreOrder(sorted.permutation, o.results);
    stats = o.aggregate;
    stats_json = bpt::PartitionedStatsToJson(o);
  }

  if (!a.results_out.empty()) bpt::WriteResultsFile(a.results_out, results);
  if (!a.stats_out.empty()) WriteText(a.stats_out, stats_json);

  const auto hits = std::count_if(results.begin(), results.end(), [](const auto &r) { return r.found(); });
  std::cout << "keys         " << results.size() << '\n'
            << "found        " << hits << '\n'
            << "node_loads   " << stats.total_node_loads << '\n'
            << "bytes        " << stats.bytes_fetched << '\n';
  return 0;
}

/*######################################################################################
 * verify
 *####################################################################################*/

struct VerifyArgs {
  std::string tree;
  std::string batch;
  std::size_t max_batch{bpt::kDefaultMaxBatch};
};

auto
RunVerify(const VerifyArgs &a)  //
    -> int
{
  const auto tree = bpt::ReadTreeFile(a.tree);
  const auto raw = bpt::ReadKeysFile(a.batch);
  const auto sorted = bpt::sort_and_restore(raw, a.max_batch);

  const auto batched = bpt::batch_search(tree, sorted.batch);
  const auto results = bpt::RestoreOrder(sorted.permutation, batched.results);
  const auto baseline = bpt::sequential_batch(tree, raw);

  std::vector<std::size_t> mismatches;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (results[i] != baseline.results[i]) mismatches.push_back(i);
  }
  const auto ratio =
      static_cast<double>(baseline.total_loads) / static_cast<double>(batched.stats.total_node_loads);

  std::cout << "keys             " << raw.size() << '\n'
            << "mismatches       " << mismatches.size() << '\n'
            << "baseline_loads   " << baseline.total_loads << '\n'
            << "batched_loads    " << batched.stats.total_node_loads << '\n'
            << "load_ratio       " << std::fixed << std::setprecision(4) << ratio << '\n';
  if (mismatches.empty()) {
    std::cout << "PASS\n";
    return 0;
  }
  std::cout << "FAIL first mismatching indices:";
  for (std::size_t i = 0; i < std::min<std::size_t>(mismatches.size(), 8); ++i) std::cout << ' ' << mismatches[i];
  std::cout << '\n';
  return kExitVerifyFailed;
}

/*######################################################################################
 * bench
 *####################################################################################*/

struct BenchArgs {
  std::string tree;
  std::vector<std::uint64_t> entries{100000};
  std::uint32_t order{16};
  std::uint64_t seed{0};
  std::uint64_t batch_seed{1};
  bool wide{false};
  double hit_ratio{0.5};
  std::vector<std::size_t> batch_sizes{1000};
  std::vector<std::string> modes{"batched", "baseline"};
  std::size_t instances{4};
  std::size_t repeats{10};
  std::size_t max_batch{bpt::kDefaultMaxBatch};
  std::string json_out;
  std::string csv_out;
};

auto
RunBench(const BenchArgs &a)  //
    -> int
{
  if (a.repeats < bpt::SampleSet::kMinSamples) throw std::invalid_argument{"--repeats must be at least 4"};

  std::vector<bpt::FlatTree> trees;
  if (!a.tree.empty()) {
    trees.push_back(bpt::ReadTreeFile(a.tree));
  } else {
    for (const auto n : a.entries) trees.push_back(bpt::GenerateTree({n, a.order, a.seed, 0.0, a.wide}));
  }
  std::vector<bpt::BenchMode> modes;
  for (const auto &m : a.modes) modes.push_back(bpt::ParseBenchMode(m));
  const auto largest = *std::max_element(a.batch_sizes.begin(), a.batch_sizes.end());

  auto rows = nlohmann::ordered_json::array();
  std::string csv = bpt::CsvHeader() + '\n';
  std::cout << std::left << std::setw(12) << "mode" << std::setw(10) << "entries" << std::setw(8) << "height"
            << std::setw(8) << "batch" << std::setw(6) << "P" << std::setw(14) << "loads_iqm" << std::setw(14)
            << "loads/key" << "time_iqm_us\n";

  for (const auto &tree : trees) {
    const auto source = bpt::GenerateBatch(tree.entries(), largest, a.batch_seed, a.hit_ratio, a.wide);
    for (const auto batch : a.batch_sizes) {
      for (const auto mode : modes) {
        if (mode == bpt::BenchMode::kPartitioned && a.instances > batch) continue;
        const bpt::BenchConfig config{mode, a.repeats, batch, mode == bpt::BenchMode::kPartitioned ? a.instances : 1,
                                      a.max_batch};
        const auto report = bpt::run_benchmark(config, tree, source);
        rows.push_back(nlohmann::ordered_json::parse(bpt::ToJson(report)));
        csv += bpt::ToCsvRows(report);
        std::cout << std::setw(12) << bpt::ToString(mode) << std::setw(10) << tree.meta().entry_count
                  << std::setw(8) << tree.meta().height_h << std::setw(8) << batch << std::setw(6)
                  << config.instances << std::setw(14) << report.metric("total_node_loads").summary.iqm
                  << std::setw(14) << std::setprecision(5) << report.metric("loads_per_key").summary.iqm
                  << report.metric("wall_time_ns").summary.iqm / 1000.0 << '\n';
      }
    }
  }

  if (!a.json_out.empty()) WriteText(a.json_out, nlohmann::ordered_json{{"rows", rows}}.dump(2));
  if (!a.csv_out.empty()) {
    std::ofstream out{a.csv_out, std::ios::trunc};
    out << csv;
    if (!out) throw std::runtime_error{"failed writing '" + a.csv_out + "'"};
  }
  return 0;
}
}  // namespace

auto
main(int argc, char **argv)  //
    -> int
{
  CLI::App app{"Level-wise batched search over flat B+ trees"};
  app.require_subcommand(1);

  BuildArgs build;
  auto *cmd_build = app.add_subcommand("build", "Generate random entries and write a .bpt tree file");
  cmd_build->add_option("--entries", build.entries, "Number of distinct entries")->required()->check(CLI::PositiveNumber);
  cmd_build->add_option("--order", build.order, "Tree order m (multiple of 4)")->capture_default_str();
  cmd_build->add_option("--seed", build.seed, "Generator seed")->capture_default_str();
  cmd_build->add_flag("--wide-keys", build.wide, "Use fully random 32-byte keys");
  cmd_build->add_option("--out", build.out, "Output .bpt file")->required();

  GenBatchArgs gen;
  auto *cmd_gen = app.add_subcommand("gen-batch", "Draw a query batch against a tree and write a .keys file");
  cmd_gen->add_option("--tree", gen.tree, "Input .bpt file")->required();
  cmd_gen->add_option("--size", gen.size, "Number of keys")->capture_default_str();
  cmd_gen->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  cmd_gen->add_option("--hit-ratio", gen.hit_ratio, "Fraction of keys present in the tree")->capture_default_str();
  cmd_gen->add_option("--max-batch", gen.max_batch, "Maximum batch length")->capture_default_str();
  cmd_gen->add_flag("--wide-keys", gen.wide, "Draw absent keys from fully random 32 bytes");
  cmd_gen->add_option("--out", gen.out, "Output .keys file")->required();

  SearchArgs search;
  auto *cmd_search = app.add_subcommand("search", "Run the batched search and write results and stats");
  cmd_search->add_option("--tree", search.tree, "Input .bpt file")->required();
  cmd_search->add_option("--batch", search.batch, "Input .keys file")->required();
  cmd_search->add_option("--instances", search.instances, "Number of independent sub-batches")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd_search->add_option("--max-batch", search.max_batch, "Maximum batch length")->capture_default_str();
  cmd_search->add_flag("--sequential", search.sequential, "Run instances one after another");
  cmd_search->add_option("--results-out", search.results_out, "Output .res file");
  cmd_search->add_option("--stats-out", search.stats_out, "Output stats JSON file");

  VerifyArgs verify;
  auto *cmd_verify = app.add_subcommand("verify", "Compare batched search against per-key search");
  cmd_verify->add_option("--tree", verify.tree, "Input .bpt file")->required();
  cmd_verify->add_option("--batch", verify.batch, "Input .keys file")->required();
  cmd_verify->add_option("--max-batch", verify.max_batch, "Maximum batch length")->capture_default_str();

  BenchArgs bench;
  auto *cmd_bench = app.add_subcommand("bench", "Repeat searches and report interquartile statistics");
  cmd_bench->add_option("--tree", bench.tree, "Benchmark one existing .bpt file instead of generating trees");
  cmd_bench->add_option("--entries", bench.entries, "Tree sizes to generate (sweep)")->capture_default_str();
  cmd_bench->add_option("--order", bench.order, "Order of generated trees")->capture_default_str();
  cmd_bench->add_option("--seed", bench.seed, "Tree generator seed")->capture_default_str();
  cmd_bench->add_option("--batch-seed", bench.batch_seed, "Batch generator seed")->capture_default_str();
  cmd_bench->add_flag("--wide-keys", bench.wide, "Use fully random 32-byte keys");
  cmd_bench->add_option("--hit-ratio", bench.hit_ratio, "Fraction of keys present")->capture_default_str();
  cmd_bench->add_option("--batch-sizes", bench.batch_sizes, "Batch sizes (sweep)")->capture_default_str();
  cmd_bench->add_option("--modes", bench.modes, "batched, baseline and/or partitioned")->capture_default_str();
  cmd_bench->add_option("--instances", bench.instances, "Instances for partitioned mode")->capture_default_str();
  cmd_bench->add_option("--repeats", bench.repeats, "Repetitions per configuration")->capture_default_str();
  cmd_bench->add_option("--max-batch", bench.max_batch, "Maximum batch length")->capture_default_str();
  cmd_bench->add_option("--json-out", bench.json_out, "Output JSON report");
  cmd_bench->add_option("--csv-out", bench.csv_out, "Output CSV with one row per repetition");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_build->parsed()) return RunBuild(build);
    if (cmd_gen->parsed()) return RunGenBatch(gen);
    if (cmd_search->parsed()) return RunSearch(search);
    if (cmd_verify->parsed()) return RunVerify(verify);
    if (cmd_bench->parsed()) return RunBench(bench);
  } catch (const bpt::TreeFormatError &e) {
    std::cerr << "error: corrupt tree (" << bpt::ToString(e.kind()) << "): " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

// Copyright 2026 The SoCo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCO_EXPERIMENT_H_
#define SOCO_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "soco/trainer.h"
#include "soco/workloads.h"

namespace soco {

inline constexpr std::string_view kSummarySchema = "soco-summary/1";

// Everything a `run` needs. suite.seed and train.seed always agree.
struct ExperimentConfig {
  SuiteConfig suite;
  TrainConfig train;
  std::vector<Strategy> strategies{Strategy::kSoco};
  std::string out_dir = "out";
  // True while conflict_ratios still holds default_conflict_ratios(n_tasks).
  bool default_ratios = true;

  // Throws ConfigError.
  void validate() const;
};

// Defaults with conflict ratios spread evenly over [0.10, 0.45].
ExperimentConfig default_experiment_config();
std::vector<double> default_conflict_ratios(std::size_t n_tasks);

// Keys accepted by the flat config format, in canonical order.
const std::vector<std::string>& config_keys();

// Sets one key. Throws ConfigError naming the key on an unknown key or an
// unparseable value. Setting n_tasks drops conflict ratios that were not
// given explicitly so the defaults follow the new task count.
void set_config_value(ExperimentConfig& cfg, std::string_view key,
                      std::string_view value);

// Parses `key = value` lines; `#` starts a comment. Errors carry
// "<source>:<line>: ...". A text starting with '{' is read as a summary.json
// and its echoed "config" block is used instead.
ExperimentConfig parse_config(std::string_view text,
                              std::string_view source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical text with every key resolved; parse_config reads it back to an
// identical config.
std::string to_config_text(const ExperimentConfig& cfg);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct ExperimentResult {
  ExperimentConfig config;
  TaskSuite suite;
  std::string manifest;
  std::vector<RunRecord> runs;  // one per entry of config.strategies
};

// Builds the suite once and trains every strategy on it.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

nlohmann::json summary_json(const ExperimentResult& result);

// Writes summary.json, suite.manifest, effective.cfg, metrics.csv and
// mask_updates.csv per strategy, and plot series under plots/. A single
// strategy writes its CSVs at the top level of cfg.out_dir; several
// strategies get one subdirectory each.
void write_outputs(const ExperimentResult& result);

struct CompareRow {
  std::string strategy;
  double mean_success_rate = 0.0;
  double mean_final_loss = 0.0;
  // Per input summary, in input order.
  std::vector<std::uint64_t> seeds;
  std::vector<double> success_rates;
  std::vector<double> final_losses;
};

// Aggregates summaries strategy by strategy. Throws ConfigError when the
// schemas differ or fewer than two summaries are given. Strategy blocks
// without tasks are skipped and reported through `warnings`.
std::vector<CompareRow> compare_summaries(
    const std::vector<nlohmann::json>& summaries,
    std::vector<std::string>* warnings);

void write_compare_table(std::ostream& os, const std::vector<CompareRow>& rows);

}  // namespace soco

#endif  // SOCO_EXPERIMENT_H_

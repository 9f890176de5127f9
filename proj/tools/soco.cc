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

// Experiment runner.
//
//   soco run [--config exp.cfg] [--strategy soco,hard,none] [--seed 7]
//            [--out results/] [key=value ...]
//   soco compare a/summary.json b/summary.json [...]
//
// Exit codes: 0 success, 1 runtime failure, 2 bad configuration or usage.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "soco/errors.h"
#include "soco/experiment.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct RunArgs {
  std::string config;
  std::string strategy;
  std::string seed;
  std::string out;
  std::vector<std::string> overrides;
};

int do_run(const RunArgs& args) {
  soco::ExperimentConfig cfg;
  try {
    cfg = args.config.empty() ? soco::default_experiment_config()
                              : soco::load_config(args.config);
    for (const auto& kv : args.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw soco::ConfigError("override '" + kv + "' is not key=value");
      }
      try {
        soco::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      } catch (const soco::ConfigError& e) {
        throw soco::ConfigError("override '" + kv + "': " + e.what());
      }
    }
    if (!args.strategy.empty()) soco::set_config_value(cfg, "strategy", args.strategy);
    if (!args.seed.empty()) soco::set_config_value(cfg, "seed", args.seed);
    if (!args.out.empty()) soco::set_config_value(cfg, "out_dir", args.out);
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const auto result = soco::run_experiment(cfg);
    soco::write_outputs(result);
    for (const auto& run : result.runs) {
      std::cout << soco::to_string(run.strategy)
                << ": success_rate=" << run.success_rate()
                << " mean_final_loss=" << run.mean_final_loss() << '\n';
    }
    std::cout << "wrote " << cfg.out_dir << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

int do_compare(const std::vector<std::string>& paths) {
  std::vector<nlohmann::json> summaries;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot read " << path << '\n';
      return kExitConfig;
    }
    try {
      summaries.push_back(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: " << path << ": " << e.what() << '\n';
      return kExitConfig;
    }
  }
  try {
    std::vector<std::string> warnings;
    const auto rows = soco::compare_summaries(summaries, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    soco::write_compare_table(std::cout, rows);
  } catch (const std::exception& e) {
    // Schema mismatches and malformed summaries alike.
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-mask multi-task training experiments"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Train one or more strategies");
  run->add_option("--config", run_args.config, "Config file or summary.json");
  run->add_option("--strategy", run_args.strategy, "Comma list of soco, hard, none");
  run->add_option("--seed", run_args.seed, "Seed for suite and training");
  run->add_option("--out", run_args.out, "Output directory");
  run->add_option("overrides", run_args.overrides, "key=value overrides");

  std::vector<std::string> paths;
  auto* compare = app.add_subcommand("compare", "Tabulate summary.json files");
  compare->add_option("summaries", paths, "summary.json files")
      ->required()
      ->expected(2, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return do_run(run_args);
  return do_compare(paths);
}

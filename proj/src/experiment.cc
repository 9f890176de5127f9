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

#include "soco/experiment.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

#include "soco/errors.h"
#include "soco/format.h"

namespace soco {

namespace {

namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw ConfigError("key '" + std::string(key) + "': cannot parse '" +
                    std::string(value) + "' as " + std::string(expected));
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc() || ptr != end) {
    bad_value(key, value, "a number");
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc() || ptr != end) {
    bad_value(key, value, "an integer");
  }
  return out;
}

ModelKind parse_model(std::string_view value) {
  if (value == "quadratic") return ModelKind::kQuadratic;
  if (value == "mlp") return ModelKind::kMlp;
  bad_value("model", value, "quadratic or mlp");
}

std::string_view model_name(ModelKind kind) {
  return kind == ModelKind::kMlp ? "mlp" : "quadratic";
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

std::string join_strategies(const std::vector<Strategy>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += to_string(xs[i]);
  }
  return out;
}

// Renders a value echoed into summary.json back into config text.
std::string json_to_value(std::string_view key, const nlohmann::json& v) {
  switch (v.type()) {
    case nlohmann::json::value_t::string:
      return v.get<std::string>();
    case nlohmann::json::value_t::number_float:
      return format_double(v.get<double>());
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
      return v.dump();
    case nlohmann::json::value_t::array: {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += json_to_value(key, v[i]);
      }
      return out;
    }
    default:
      throw ConfigError("key '" + std::string(key) +
                        "': unsupported value in summary config");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

template <typename Fn>
void write_with(const fs::path& path, Fn fn) {
  std::ofstream out(path, std::ios::binary);
  fn(out);
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::size_t strategy_rank(std::string_view name) {
  if (name == "soco") return 0;
  if (name == "hard") return 1;
  if (name == "none") return 2;
  return 3;
}

}  // namespace

std::vector<double> default_conflict_ratios(std::size_t n_tasks) {
  std::vector<double> out(n_tasks, 0.10);
  for (std::size_t i = 1; i < n_tasks; ++i) {
    out[i] = 0.10 + 0.35 * static_cast<double>(i) /
                        static_cast<double>(n_tasks - 1);
  }
  return out;
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.suite.conflict_ratios = default_conflict_ratios(cfg.suite.n_tasks);
  return cfg;
}

void ExperimentConfig::validate() const {
  suite.validate();
  train.validate();
  if (suite.seed != train.seed) {
    throw ConfigError("suite and training seeds differ");
  }
  if (strategies.empty()) throw ConfigError("strategy list is empty");
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (strategies[i] == strategies[j]) {
        throw ConfigError("strategy '" + std::string(to_string(strategies[i])) +
                          "' listed twice");
      }
    }
  }
  if (out_dir.empty()) throw ConfigError("out_dir is empty");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "n_tasks",        "dim",           "conflict_ratios", "model",
      "epochs",         "lr",            "strategy",        "seed",
      "lambda",         "alpha",         "q1",              "q3",
      "beta_left_max",  "beta_right_max", "beta_min",       "init_sparsity",
      "mask_interval",  "hard_sparsity", "hard_swap_frac",  "success_frac",
      "out_dir"};
  return keys;
}

void set_config_value(ExperimentConfig& cfg, std::string_view key,
                      std::string_view raw) {
  const std::string_view value = trim(raw);
  auto& tamu = cfg.train.tamu;
  if (key == "n_tasks") {
    cfg.suite.n_tasks = parse_int<std::size_t>(key, value);
    if (cfg.default_ratios) {
      cfg.suite.conflict_ratios = default_conflict_ratios(cfg.suite.n_tasks);
    }
  } else if (key == "dim") {
    cfg.suite.dim = parse_int<std::size_t>(key, value);
  } else if (key == "conflict_ratios") {
    std::vector<double> ratios;
    for (auto item : split_list(value)) ratios.push_back(parse_double(key, item));
    cfg.suite.conflict_ratios = std::move(ratios);
    cfg.default_ratios = false;
  } else if (key == "model") {
    cfg.suite.model = parse_model(value);
  } else if (key == "epochs") {
    cfg.train.epochs = parse_int<std::int64_t>(key, value);
  } else if (key == "lr") {
    cfg.train.lr = parse_double(key, value);
  } else if (key == "strategy") {
    std::vector<Strategy> strategies;
    for (auto item : split_list(value)) strategies.push_back(parse_strategy(item));
    cfg.strategies = std::move(strategies);
  } else if (key == "seed") {
    cfg.suite.seed = cfg.train.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "lambda") {
    tamu.lambda = parse_double(key, value);
  } else if (key == "alpha") {
    tamu.alpha = parse_double(key, value);
  } else if (key == "q1") {
    tamu.q1 = parse_double(key, value);
  } else if (key == "q3") {
    tamu.q3 = parse_double(key, value);
  } else if (key == "beta_left_max") {
    tamu.beta_left_max = parse_double(key, value);
  } else if (key == "beta_right_max") {
    tamu.beta_right_max = parse_double(key, value);
  } else if (key == "beta_min") {
    tamu.beta_min = parse_double(key, value);
  } else if (key == "init_sparsity") {
    cfg.train.init_sparsity = parse_double(key, value);
  } else if (key == "mask_interval") {
    cfg.train.mask_interval = parse_int<std::int64_t>(key, value);
  } else if (key == "hard_sparsity") {
    cfg.train.hard_sparsity = parse_double(key, value);
  } else if (key == "hard_swap_frac") {
    cfg.train.hard_swap_frac = parse_double(key, value);
  } else if (key == "success_frac") {
    cfg.train.success_frac = parse_double(key, value);
  } else if (key == "out_dir") {
    if (value.empty()) throw ConfigError("key 'out_dir': empty value");
    cfg.out_dir = std::string(value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  ExperimentConfig cfg = default_experiment_config();
  const std::string src(source);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(src + ": " + e.what());
    }
    if (!doc.contains("config") || !doc["config"].is_object()) {
      throw ConfigError(src + ": no \"config\" object");
    }
    // n_tasks first so explicit ratios are not replaced afterwards.
    const auto& c = doc["config"];
    try {
      if (c.contains("n_tasks")) {
        set_config_value(cfg, "n_tasks", json_to_value("n_tasks", c["n_tasks"]));
      }
      for (auto it = c.begin(); it != c.end(); ++it) {
        if (it.key() == "n_tasks") continue;
        set_config_value(cfg, it.key(), json_to_value(it.key(), it.value()));
      }
    } catch (const ConfigError& e) {
      throw ConfigError(src + ": " + e.what());
    }
    return cfg;
  }

  std::size_t line_no = 0;
  std::map<std::string, std::size_t> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const std::string where = src + ":" + std::to_string(line_no) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected 'key = value', got '" +
                        std::string(body) + "'");
    }
    const std::string key(trim(body.substr(0, eq)));
    if (auto [it, fresh] = seen.emplace(key, line_no); !fresh) {
      throw ConfigError(where + "key '" + key + "' already set on line " +
                        std::to_string(it->second));
    }
    try {
      set_config_value(cfg, key, body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  return parse_config(read_file(path), path.string());
}

std::string to_config_text(const ExperimentConfig& cfg) {
  const auto& t = cfg.train;
  const auto& m = cfg.train.tamu;
  std::ostringstream os;
  os << "# effective configuration\n"
     << "n_tasks = " << cfg.suite.n_tasks << '\n'
     << "dim = " << cfg.suite.dim << '\n'
     << "conflict_ratios = " << join_doubles(cfg.suite.conflict_ratios) << '\n'
     << "model = " << model_name(cfg.suite.model) << '\n'
     << "epochs = " << t.epochs << '\n'
     << "lr = " << format_double(t.lr) << '\n'
     << "strategy = " << join_strategies(cfg.strategies) << '\n'
     << "seed = " << t.seed << '\n'
     << "lambda = " << format_double(m.lambda) << '\n'
     << "alpha = " << format_double(m.alpha) << '\n'
     << "q1 = " << format_double(m.q1) << '\n'
     << "q3 = " << format_double(m.q3) << '\n'
     << "beta_left_max = " << format_double(m.beta_left_max) << '\n'
     << "beta_right_max = " << format_double(m.beta_right_max) << '\n'
     << "beta_min = " << format_double(m.beta_min) << '\n'
     << "init_sparsity = " << format_double(t.init_sparsity) << '\n'
     << "mask_interval = " << t.mask_interval << '\n'
     << "hard_sparsity = " << format_double(t.hard_sparsity) << '\n'
     << "hard_swap_frac = " << format_double(t.hard_swap_frac) << '\n'
     << "success_frac = " << format_double(t.success_frac) << '\n'
     << "out_dir = " << cfg.out_dir << '\n';
  return os.str();
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  const auto& t = cfg.train;
  const auto& m = cfg.train.tamu;
  nlohmann::json strategies = nlohmann::json::array();
  for (auto s : cfg.strategies) strategies.push_back(std::string(to_string(s)));
  return {
      {"n_tasks", cfg.suite.n_tasks},
      {"dim", cfg.suite.dim},
      {"conflict_ratios", cfg.suite.conflict_ratios},
      {"model", std::string(model_name(cfg.suite.model))},
      {"epochs", t.epochs},
      {"lr", t.lr},
      {"strategy", strategies},
      {"seed", t.seed},
      {"lambda", m.lambda},
      {"alpha", m.alpha},
      {"q1", m.q1},
      {"q3", m.q3},
      {"beta_left_max", m.beta_left_max},
      {"beta_right_max", m.beta_right_max},
      {"beta_min", m.beta_min},
      {"init_sparsity", t.init_sparsity},
      {"mask_interval", t.mask_interval},
      {"hard_sparsity", t.hard_sparsity},
      {"hard_swap_frac", t.hard_swap_frac},
      {"success_frac", t.success_frac},
      {"out_dir", cfg.out_dir},
  };
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result{cfg, generate_suite(cfg.suite), {}, {}};
  result.manifest = suite_manifest(result.suite);
  for (auto strategy : cfg.strategies) {
    TrainConfig tc = cfg.train;
    tc.strategy = strategy;
    result.runs.push_back(train(result.suite, tc));
  }
  return result;
}

nlohmann::json summary_json(const ExperimentResult& result) {
  nlohmann::json blocks = nlohmann::json::object();
  for (const auto& run : result.runs) {
    nlohmann::json tasks = nlohmann::json::array();
    for (std::size_t i = 0; i < run.outcomes.size(); ++i) {
      const auto& o = run.outcomes[i];
      tasks.push_back({{"task_id", i},
                       {"conflict_ratio", result.suite.config.conflict_ratios[i]},
                       {"initial_loss", o.initial_loss},
                       {"final_loss", o.final_loss},
                       {"success", o.success}});
    }
    blocks[std::string(to_string(run.strategy))] = {
        {"tasks", tasks},
        {"success_rate", run.success_rate()},
        {"mean_final_loss", run.mean_final_loss()},
        {"mask_updates", run.mask_updates}};
  }
  return {{"schema", std::string(kSummarySchema)},
          {"seed", result.config.train.seed},
          {"config", config_to_json(result.config)},
          {"suite_manifest_fnv1a64", hex64(fnv1a64(result.manifest))},
          {"strategies", blocks}};
}

void write_outputs(const ExperimentResult& result) {
  const fs::path out(result.config.out_dir);
  fs::create_directories(out / "plots");

  write_with(out / "summary.json", [&](std::ostream& os) {
    write_json(os, summary_json(result));
    os << '\n';
  });
  write_file(out / "suite.manifest", result.manifest);
  write_file(out / "effective.cfg", to_config_text(result.config));

  const bool several = result.runs.size() > 1;
  for (const auto& run : result.runs) {
    fs::path dir = out;
    if (several) {
      dir /= std::string(to_string(run.strategy));
      fs::create_directories(dir);
    }
    write_with(dir / "metrics.csv",
               [&](std::ostream& os) { write_metrics_csv(os, run); });
    write_with(dir / "mask_updates.csv",
               [&](std::ostream& os) { write_update_log_csv(os, run); });
  }

  // Plot-ready series; nothing is rendered.
  write_with(out / "plots" / "strategy_comparison.csv", [&](std::ostream& os) {
    os << "strategy,success_rate,mean_final_loss\n";
    for (const auto& run : result.runs) {
      os << to_string(run.strategy) << ',' << format_double(run.success_rate())
         << ',' << format_double(run.mean_final_loss()) << '\n';
    }
  });
  write_with(out / "plots" / "loss_curves.csv", [&](std::ostream& os) {
    os << "strategy,step,mean_loss\n";
    for (const auto& run : result.runs) {
      const std::size_t n = result.suite.n_tasks();
      for (std::size_t r = 0; r + n <= run.rows.size(); r += n) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += run.rows[r + i].loss;
        os << to_string(run.strategy) << ',' << run.rows[r].step << ','
           << format_double(sum / static_cast<double>(n)) << '\n';
      }
    }
  });
  write_with(out / "plots" / "mask_diagnostics.csv", [&](std::ostream& os) {
    os << "strategy,step,task_id,conflict_ratio,wrongly_masked_top30,"
          "sparsity,beta_t\n";
    for (const auto& run : result.runs) {
      for (const auto& row : run.rows) {
        if (!row.conflict_ratio) continue;
        os << to_string(run.strategy) << ',' << row.step << ',' << row.task
           << ',' << format_double(*row.conflict_ratio) << ','
           << *row.wrongly_masked << ',' << format_double(row.sparsity) << ',';
        if (row.beta) os << format_double(*row.beta);
        os << '\n';
      }
    }
  });
}

std::vector<CompareRow> compare_summaries(
    const std::vector<nlohmann::json>& summaries,
    std::vector<std::string>* warnings) {
  if (summaries.size() < 2) {
    throw ConfigError("compare needs at least two summaries");
  }
  auto schema_of = [](const nlohmann::json& s) -> std::string {
    if (!s.is_object() || !s.contains("schema") || !s["schema"].is_string()) {
      return "<missing>";
    }
    return s["schema"].get<std::string>();
  };
  const std::string schema = schema_of(summaries.front());
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    if (schema_of(summaries[k]) != schema) {
      throw ConfigError("schema mismatch: summary " + std::to_string(k) +
                        " has '" + schema_of(summaries[k]) + "', summary 0 has '" +
                        schema + "'");
    }
    if (!summaries[k].contains("strategies") ||
        !summaries[k]["strategies"].is_object()) {
      throw ConfigError("summary " + std::to_string(k) +
                        " has no strategies object");
    }
  }

  std::map<std::string, CompareRow> by_name;
  for (std::size_t k = 0; k < summaries.size(); ++k) {
    const auto& s = summaries[k];
    const std::uint64_t seed = s.value("seed", std::uint64_t{0});
    for (auto it = s["strategies"].begin(); it != s["strategies"].end(); ++it) {
      const auto& block = it.value();
      if (!block.contains("tasks") || block["tasks"].empty()) {
        if (warnings) {
          warnings->push_back("summary " + std::to_string(k) + ": strategy '" +
                              it.key() + "' has no tasks, skipped");
        }
        continue;
      }
      auto& row = by_name[it.key()];
      row.strategy = it.key();
      row.seeds.push_back(seed);
      row.success_rates.push_back(block.at("success_rate").get<double>());
      row.final_losses.push_back(block.at("mean_final_loss").get<double>());
    }
  }

  std::vector<CompareRow> rows;
  for (auto& [name, row] : by_name) {
    double s = 0.0, l = 0.0;
    for (std::size_t i = 0; i < row.seeds.size(); ++i) {
      s += row.success_rates[i];
      l += row.final_losses[i];
    }
    const double n = static_cast<double>(row.seeds.size());
    row.mean_success_rate = s / n;
    row.mean_final_loss = l / n;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const CompareRow& a, const CompareRow& b) {
                     return strategy_rank(a.strategy) < strategy_rank(b.strategy);
                   });
  return rows;
}

void write_compare_table(std::ostream& os, const std::vector<CompareRow>& rows) {
  os << "strategy,mean_success_rate,mean_final_loss,runs\n";
  for (const auto& r : rows) {
    os << r.strategy << ',' << format_double(r.mean_success_rate) << ','
       << format_double(r.mean_final_loss) << ',' << r.seeds.size() << '\n';
  }
  os << "\nstrategy,seed,success_rate,mean_final_loss\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.seeds.size(); ++i) {
      os << r.strategy << ',' << r.seeds[i] << ','
         << format_double(r.success_rates[i]) << ','
         << format_double(r.final_losses[i]) << '\n';
    }
  }
}

}  // namespace soco

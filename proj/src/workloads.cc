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

#include "soco/workloads.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "soco/errors.h"
#include "soco/format.h"

namespace soco {

namespace {

// Conflicting targets are drawn as this fraction of the coordinate's shared
// magnitude.
constexpr double kConflictMagnitudeLo = 0.05;
constexpr double kConflictMagnitudeHi = 0.25;
// The consensus direction must keep at least this share of the harmonious
// pull after the conflicting tasks are subtracted.
constexpr double kConsensusMargin = 0.5;
constexpr std::size_t kMlpSamples = 32;

std::size_t planted_count(double ratio, std::size_t d) {
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(d)));
}

std::vector<std::uint64_t> derive_task_seeds(const Rng& root, std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t i = 0; i < n; ++i) seeds[i] = root.child(i + 1).seed();
  return seeds;
}

TaskSuite quadratic_suite(const SuiteConfig& cfg) {
  const std::size_t n = cfg.n_tasks;
  const std::size_t d = cfg.dim;
  Rng rng(cfg.seed);
  TaskSuite suite;
  suite.config = cfg;
  suite.task_seeds = derive_task_seeds(rng, n);

  std::vector<std::size_t> wanted(n);
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    wanted[i] = planted_count(cfg.conflict_ratios[i], d);
    total += wanted[i];
  }
  // Each coordinate needs at least one task on the consensus side.
  if (total > (n - 1) * d) {
    throw ConfigError("conflict ratios need " + std::to_string(total) +
                      " conflicting slots but only " +
                      std::to_string((n - 1) * d) + " exist");
  }

  std::vector<double> sign(d);
  std::vector<double> magnitude(d);
  for (std::size_t j = 0; j < d; ++j) {
    sign[j] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const bool active = rng.uniform() < cfg.active_fraction;
    magnitude[j] = rng.uniform(1.0, 2.0) * (active ? 1.0 : cfg.bulk_scale);
  }

  // Spread conflicts over the least-loaded coordinates first, random order
  // among equals.
  std::vector<std::size_t> load(d, 0);
  std::vector<std::vector<char>> conflicting(n, std::vector<char>(d, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return load[a] < load[b]; });
    std::size_t taken = 0;
    for (std::size_t j : order) {
      if (taken == wanted[i]) break;
      if (load[j] + 1 >= n) continue;
      conflicting[i][j] = 1;
      ++load[j];
      ++taken;
    }
    if (taken < wanted[i]) {
      throw ConfigError("could not place conflicts for task " +
                        std::to_string(i));
    }
  }

  std::vector<DenseVector> curvature(n, DenseVector(d));
  std::vector<DenseVector> conflict_size(n, DenseVector(d));
  for (std::size_t i = 0; i < n; ++i) {
    Rng task_rng(suite.task_seeds[i]);
    for (std::size_t j = 0; j < d; ++j) {
      curvature[i][j] = task_rng.uniform(0.5, 1.5);
      conflict_size[i][j] =
          magnitude[j] * task_rng.uniform(kConflictMagnitudeLo, kConflictMagnitudeHi);
    }
  }

  // Raise the shared magnitude until the consensus sign dominates both the
  // plain and the curvature-weighted task average.
  for (std::size_t j = 0; j < d; ++j) {
    double harm_weight = 0.0, harm_count = 0.0;
    double conf_weighted = 0.0, conf_plain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (conflicting[i][j]) {
        conf_weighted += curvature[i][j] * conflict_size[i][j];
        conf_plain += conflict_size[i][j];
      } else {
        harm_weight += curvature[i][j];
        harm_count += 1.0;
      }
    }
    const double need = std::max(conf_weighted / (kConsensusMargin * harm_weight),
                                 conf_plain / (kConsensusMargin * harm_count));
    magnitude[j] = std::max(magnitude[j], need);
  }

  suite.planted_conflicts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    DenseVector target(d);
    for (std::size_t j = 0; j < d; ++j) {
      if (conflicting[i][j]) {
        target[j] = -sign[j] * conflict_size[i][j];
        suite.planted_conflicts[i].push_back(j);
      } else {
        target[j] = sign[j] * magnitude[j];
      }
    }
    suite.tasks.emplace_back(QuadraticTask(std::move(target), curvature[i]));
  }
  return suite;
}

TaskSuite mirrored_suite(const SuiteConfig& cfg) {
  const std::size_t d = cfg.dim;
  Rng rng(cfg.seed);
  TaskSuite suite;
  suite.config = cfg;
  suite.task_seeds = derive_task_seeds(rng, 2);

  const std::size_t first = planted_count(cfg.conflict_ratios[0], d);
  const std::size_t second = planted_count(cfg.conflict_ratios[1], d);
  if (first + second > d) {
    throw ConfigError(
        "mirrored suite: conflict ratios must sum to at most 1 (a coordinate "
        "conflicts for at most one of two tasks)");
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  // 0: exact mirror, 1: task 0 is the weaker side, 2: task 1 is.
  std::vector<int> role(d, 0);
  for (std::size_t k = 0; k < first; ++k) role[order[k]] = 1;
  for (std::size_t k = first; k < first + second; ++k) role[order[k]] = 2;

  Rng shared(suite.task_seeds[0]);
  Rng weak(suite.task_seeds[1]);
  DenseVector curvature(d), t0(d), t1(d);
  for (std::size_t j = 0; j < d; ++j) {
    curvature[j] = shared.uniform(0.5, 1.5);
    const double sign = shared.uniform() < 0.5 ? -1.0 : 1.0;
    const double strong = shared.uniform(1.0, 2.0);
    const double weaker = strong * weak.uniform(0.2, 0.6);
    t0[j] = sign * (role[j] == 1 ? weaker : strong);
    t1[j] = -sign * (role[j] == 2 ? weaker : strong);
  }
  suite.planted_conflicts.resize(2);
  for (std::size_t j = 0; j < d; ++j) {
    if (role[j] == 1) suite.planted_conflicts[0].push_back(j);
    if (role[j] == 2) suite.planted_conflicts[1].push_back(j);
  }
  suite.tasks.emplace_back(QuadraticTask(std::move(t0), curvature));
  suite.tasks.emplace_back(QuadraticTask(std::move(t1), curvature));
  return suite;
}

DenseVector random_teacher(const MlpArchitecture& arch, Rng& rng) {
  DenseVector p(arch.param_count());
  for (auto& x : p) x = rng.uniform(-1.0, 1.0);
  return p;
}

TaskSuite mlp_suite(const SuiteConfig& cfg) {
  const MlpArchitecture arch = mlp_architecture_for(cfg.dim);
  Rng rng(cfg.seed);
  TaskSuite suite;
  suite.config = cfg;
  suite.config.dim = arch.param_count();
  suite.task_seeds = derive_task_seeds(rng, cfg.n_tasks);
  suite.planted_conflicts.resize(cfg.n_tasks);

  const DenseVector shared = random_teacher(arch, rng);
  const std::size_t in = arch.input_width();
  const std::size_t out = arch.output_width();
  for (std::size_t i = 0; i < cfg.n_tasks; ++i) {
    Rng task_rng(suite.task_seeds[i]);
    const DenseVector own = random_teacher(arch, task_rng);
    // Higher ratios flip more of the shared signal against the other tasks.
    const double shared_weight = 1.0 - 2.0 * cfg.conflict_ratios[i];
    std::vector<double> xs(kMlpSamples * in);
    for (auto& x : xs) x = task_rng.uniform(-1.0, 1.0);
    std::vector<double> ys(kMlpSamples * out);
    for (std::size_t s = 0; s < kMlpSamples; ++s) {
      const std::span<const double> x(xs.data() + s * in, in);
      const auto a = mlp_predict(arch, shared, x);
      const auto b = mlp_predict(arch, own, x);
      for (std::size_t k = 0; k < out; ++k) {
        ys[s * out + k] = shared_weight * a[k] + 0.5 * b[k];
      }
    }
    suite.tasks.emplace_back(MlpTask(arch, std::move(xs), std::move(ys)));
  }
  return suite;
}

}  // namespace

void SuiteConfig::validate() const {
  if (n_tasks < 1) throw ConfigError("n_tasks must be >= 1");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (conflict_ratios.size() != n_tasks) {
    throw ConfigError("conflict_ratios has " +
                      std::to_string(conflict_ratios.size()) +
                      " entries, expected n_tasks = " + std::to_string(n_tasks));
  }
  for (double r : conflict_ratios) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw ConfigError("conflict ratio " + format_double(r) +
                        " outside [0,1]");
    }
  }
  if (mirrored && (n_tasks != 2 || model != ModelKind::kQuadratic)) {
    throw ConfigError("mirrored suites are two-task quadratic suites");
  }
}

std::size_t TaskSuite::dim() const {
  return tasks.empty() ? config.dim : soco::dim(tasks.front());
}

MlpArchitecture mlp_architecture_for(std::size_t dim) {
  auto count = [](std::size_t h) {
    return MlpArchitecture{{4, h, h, 2}}.param_count();
  };
  if (dim < count(1)) {
    throw ConfigError("dim " + std::to_string(dim) +
                      " is too small for an MLP suite (minimum " +
                      std::to_string(count(1)) + ")");
  }
  std::size_t h = 1;
  while (count(h + 1) <= dim) ++h;
  return MlpArchitecture{{4, h, h, 2}};
}

TaskSuite generate_suite(const SuiteConfig& cfg) {
  cfg.validate();
  if (cfg.model == ModelKind::kMlp) return mlp_suite(cfg);
  if (cfg.mirrored) return mirrored_suite(cfg);
  return quadratic_suite(cfg);
}

DenseVector initial_parameters(const TaskSuite& suite, std::uint64_t seed) {
  const std::size_t d = suite.dim();
  DenseVector theta(d);
  if (suite.tasks.empty() || !std::holds_alternative<MlpTask>(suite.tasks[0])) {
    return theta;
  }
  const auto& w = std::get<MlpTask>(suite.tasks[0]).architecture.widths;
  Rng rng = Rng(seed).child(0x1717);
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w[l]));
    for (std::size_t k = 0; k < w[l] * w[l + 1]; ++k) {
      theta[offset + k] = rng.uniform(-bound, bound);
    }
    offset += w[l] * w[l + 1] + w[l + 1];
  }
  return theta;
}

std::vector<DenseVector> task_gradients(const TaskSuite& suite,
                                        const DenseVector& theta,
                                        std::span<const TaskMask> masks) {
  if (masks.size() != suite.n_tasks()) {
    throw DimensionError("task_gradients: one mask per task required");
  }
  std::vector<DenseVector> grads;
  grads.reserve(suite.n_tasks());
  for (std::size_t i = 0; i < suite.n_tasks(); ++i) {
    grads.push_back(gradient(suite.tasks[i], masked_forward(theta, masks[i])));
  }
  return grads;
}

std::vector<double> conflict_fractions(std::span<const DenseVector> grads) {
  if (grads.empty()) return {};
  const DenseVector avg = mean(grads);
  const double d = static_cast<double>(avg.size());
  std::vector<double> out;
  out.reserve(grads.size());
  for (const auto& g : grads) {
    std::size_t negative = 0;
    for (std::size_t j = 0; j < avg.size(); ++j) {
      if (g[j] * avg[j] < 0.0) ++negative;
    }
    out.push_back(avg.empty() ? 0.0 : static_cast<double>(negative) / d);
  }
  return out;
}

std::vector<double> measure_conflict_ratio(const TaskSuite& suite,
                                           const DenseVector& theta,
                                           std::span<const TaskMask> masks) {
  const auto grads = task_gradients(suite, theta, masks);
  return conflict_fractions(grads);
}

std::string suite_manifest(const TaskSuite& suite) {
  const auto& cfg = suite.config;
  std::ostringstream os;
  os << "# suite model=" << (cfg.model == ModelKind::kMlp ? "mlp" : "quadratic")
     << " n_tasks=" << suite.n_tasks() << " dim=" << suite.dim()
     << " seed=" << cfg.seed << (cfg.mirrored ? " mirrored=1" : "") << '\n';
  for (std::size_t i = 0; i < suite.n_tasks(); ++i) {
    os << i << ' ' << format_double(cfg.conflict_ratios[i]) << ' '
       << suite.task_seeds[i] << '\n';
  }
  return os.str();
}

}  // namespace soco

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

#ifndef SOCO_WORKLOADS_H_
#define SOCO_WORKLOADS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "soco/model.h"
#include "soco/softmask.h"
#include "soco/vecmath.h"

namespace soco {

struct SuiteConfig {
  std::size_t n_tasks = 8;
  std::size_t dim = 256;
  // Target fraction of conflicting coordinates, one entry per task.
  std::vector<double> conflict_ratios;
  std::uint64_t seed = 0;
  ModelKind model = ModelKind::kQuadratic;
  // Quadratic suites concentrate the loss on a small active set of
  // coordinates; the remaining bulk has targets scaled by bulk_scale.
  double active_fraction = 0.04;
  double bulk_scale = 0.02;
  // Two-task suite whose targets have opposite signs on every coordinate.
  bool mirrored = false;

  // Throws ConfigError.
  void validate() const;
};

struct TaskSuite {
  SuiteConfig config;
  std::vector<Task> tasks;
  // Ground-truth conflicting coordinates per task (ascending). Empty for MLP
  // suites, which have no closed-form conflict structure.
  std::vector<std::vector<std::size_t>> planted_conflicts;
  // Seed each task's random draws came from.
  std::vector<std::uint64_t> task_seeds;

  std::size_t n_tasks() const { return tasks.size(); }
  std::size_t dim() const;
};

// Deterministic in the config. For quadratic suites a coordinate j planted as
// conflicting for task i satisfies, at theta = 0, (g_i * g_bar)_j < 0, and no
// other coordinate does.
TaskSuite generate_suite(const SuiteConfig& cfg);

// {4, h, h, 2} with the largest h whose parameter count fits in `dim`.
MlpArchitecture mlp_architecture_for(std::size_t dim);

// Starting point for training: zeros for quadratics, a scaled uniform draw
// for MLP weights (biases zero).
DenseVector initial_parameters(const TaskSuite& suite, std::uint64_t seed);

// g_i evaluated at theta masked by each task's forward mask.
std::vector<DenseVector> task_gradients(const TaskSuite& suite,
                                        const DenseVector& theta,
                                        std::span<const TaskMask> masks);

// Per task, the fraction of coordinates with (g_i * g_bar)_j < 0.
std::vector<double> conflict_fractions(std::span<const DenseVector> grads);

std::vector<double> measure_conflict_ratio(const TaskSuite& suite,
                                           const DenseVector& theta,
                                           std::span<const TaskMask> masks);

// One header line followed by "task_id conflict_ratio_target seed" per task.
std::string suite_manifest(const TaskSuite& suite);

}  // namespace soco

#endif  // SOCO_WORKLOADS_H_

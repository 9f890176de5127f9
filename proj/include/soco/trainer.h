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

#ifndef SOCO_TRAINER_H_
#define SOCO_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "soco/softmask.h"
#include "soco/tamu.h"
#include "soco/vecmath.h"
#include "soco/workloads.h"

namespace soco {

enum class Strategy { kSoco, kHard, kNone };

std::string_view to_string(Strategy strategy);
// Throws ConfigError for anything but "soco", "hard" or "none".
Strategy parse_strategy(std::string_view name);

// State handed to TrainConfig::on_update at every mask-update step, before
// the parameter step of that iteration.
struct UpdateSnapshot {
  std::int64_t step = 0;
  const DenseVector* theta = nullptr;
  std::span<const TaskMask> masks_before;
  std::span<const TaskMask> masks_after;
  // Gradients at theta under masks_before; the ones scores are built from.
  std::span<const DenseVector> grads;
  std::span<const double> conflict_ratio;
  std::span<const std::size_t> wrongly_masked;
  std::optional<double> beta;
  std::span<const SelectionResult> selections;  // soco only
};

// State handed to TrainConfig::on_step after every parameter step.
struct StepSnapshot {
  std::int64_t step = 0;
  const DenseVector* theta_before = nullptr;
  const DenseVector* theta_after = nullptr;
  // The gradients and masks the step was taken with.
  std::span<const DenseVector> grads;
  std::span<const TaskMask> masks;
};

struct TrainConfig {
  Strategy strategy = Strategy::kSoco;
  std::int64_t epochs = 600;
  double lr = 0.2;
  std::int64_t mask_interval = 20;
  double init_sparsity = 0.2;
  double hard_sparsity = 0.2;
  double hard_swap_frac = 0.01;
  std::uint64_t seed = 0;
  // total_steps and mask_interval inside are overridden by epochs and
  // mask_interval above.
  TamuConfig tamu;
  double success_frac = 0.05;
  double top_fraction = 0.3;
  std::function<void(const UpdateSnapshot&)> on_update;
  std::function<void(const StepSnapshot&)> on_step;

  // Throws ConfigError.
  void validate() const;
};

// One row per (step, task). Update-only columns are empty on other steps.
struct MetricRow {
  std::int64_t step = 0;
  std::size_t task = 0;
  double loss = 0.0;
  double sparsity = 0.0;
  std::optional<double> beta;
  std::optional<std::size_t> n_conflict;
  std::optional<std::size_t> n_recover;
  std::optional<double> conflict_ratio;
  std::optional<std::size_t> wrongly_masked;
  std::optional<double> conflict_threshold;  // soco only
  std::optional<double> harmony_threshold;   // soco only
};

struct TaskOutcome {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool success = false;
};

struct RunRecord {
  Strategy strategy = Strategy::kSoco;
  std::vector<MetricRow> rows;
  DenseVector theta;
  std::vector<TaskMask> masks;
  std::vector<TaskOutcome> outcomes;
  std::int64_t mask_updates = 0;

  double success_rate() const;
  double mean_final_loss() const;
};

// Per task, a uniformly random floor(sparsity * d)-subset is zeroed.
// Throws ConfigError unless 0 <= sparsity < 1.
std::vector<TaskMask> init_masks(std::size_t d, std::size_t n_tasks,
                                 double sparsity, Rng& rng);

// Per task, how many of the top `top_fraction` indices by importance carry a
// soft mask below 1. Ranking ties go to the lower index.
std::vector<std::size_t> wrongly_masked_important(
    std::span<const DenseVector> importance, std::span<const TaskMask> masks,
    double top_fraction);

// Runs the masked multi-task training loop. Throws NonFiniteError when a
// loss or gradient stops being finite.
RunRecord train(const TaskSuite& suite, const TrainConfig& cfg);

// metrics.csv: step,task_id,loss,sparsity,beta_t,n_conflict,n_recover,
// conflict_ratio,wrongly_masked_top30
void write_metrics_csv(std::ostream& os, const RunRecord& record);

// One line per (update step, task): step,task_id,beta_t,conflict_threshold,
// harmony_threshold,n_conflict,n_recover. Thresholds and beta stay empty for
// the hard baseline, whose counts are its swaps in each direction.
void write_update_log_csv(std::ostream& os, const RunRecord& record);

}  // namespace soco

#endif  // SOCO_TRAINER_H_

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

#ifndef SOCO_TAMU_H_
#define SOCO_TAMU_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "soco/softmask.h"
#include "soco/vecmath.h"

namespace soco {

// Task-aware mask update hyperparameters. Defaults for alpha, the quantiles
// and the beta bounds are the published defaults; lambda has no published
// value and defaults to 1.
struct TamuConfig {
  double lambda = 1.0;
  double alpha = 20.0;
  double q1 = 0.05;
  double q3 = 0.95;
  double beta_left_max = 20.0;
  double beta_right_max = 30.0;
  double beta_min = 5.0;
  std::int64_t total_steps = 1000;
  std::int64_t mask_interval = 10;

  // Throws ConfigError on any violated bound.
  void validate() const;
};

struct ScoreReport {
  DenseVector conflict;
  DenseVector harmony;
  DenseVector gate;
};

enum class ThresholdSide { kConflict, kHarmony };

struct SelectionResult {
  std::vector<std::size_t> conflict_set;  // ascending
  std::vector<std::size_t> recover_set;   // ascending, disjoint from conflict
  double conflict_threshold = 0.0;
  double harmony_threshold = 0.0;
  double beta = 0.0;
};

// (g_i * g_bar)_j + lambda * F_j. Lower means stronger conflict.
DenseVector conflict_score(const DenseVector& grad, const DenseVector& mean_grad,
                           const DenseVector& fisher_raw, double lambda);

// ReLU((alpha |g_bar_j| - |g_j|) / (alpha |g_bar_j|)). Coordinates with
// g_bar_j == 0 get 0; the harmony score never reads them.
DenseVector harmony_gate(const DenseVector& grad, const DenseVector& mean_grad,
                         double alpha);

// Gated agreement where the product is positive, raw agreement otherwise.
DenseVector harmony_score(const DenseVector& grad, const DenseVector& mean_grad,
                          const DenseVector& gate);

ScoreReport score_task(const DenseVector& grad, const DenseVector& mean_grad,
                       const DenseVector& fisher_raw, const TamuConfig& cfg);

// Interpolated quantile of an ascending sample with 1-based rank k = q * n.
// Integer k returns X_(k); otherwise X_(floor k) and X_(ceil k) are blended
// by the fractional part. Ranks are clamped to [1, n].
// Throws EmptyInputError / InvalidValueError.
double quantile(std::span<const double> sorted, double q);

// Conflict side: Q_q1 - beta * IQR. Harmony side: Q_q3 + beta * IQR.
double iqr_threshold(const DenseVector& scores, const TamuConfig& cfg,
                     double beta, ThresholdSide side);

// eta_min + (eta_max - eta_min) / 2 * (1 + cos(2 pi t / T)).
double cosine_anneal(double eta_max, double eta_min, double t, double total);

// Piecewise asymmetric schedule: the left amplitude up to T/2, the right
// amplitude after it. Both halves meet at beta_min at the midpoint.
double beta_schedule(const TamuConfig& cfg, double t);

SelectionResult select(const ScoreReport& scores, const TamuConfig& cfg,
                       double beta);

// Conflicting indices take their normalised Fisher value, recovered indices
// become 1, the rest is left untouched. Throws ContractViolation when the
// two sets overlap.
TaskMask apply_mask_update(const TaskMask& mask, const SelectionResult& sel,
                           const FisherInfo& fisher);

}  // namespace soco

#endif  // SOCO_TAMU_H_

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

#ifndef SOCO_BASELINES_H_
#define SOCO_BASELINES_H_

#include <cstddef>
#include <span>

#include "soco/softmask.h"
#include "soco/vecmath.h"

namespace soco {

// One task's binary mask under fixed-sparsity score-and-swap masking.
struct HardMaskState {
  TaskMask mask;
  double sparsity = 0.2;
  std::size_t swap_count = 0;
  // Indices swapped out (and back in) by the most recent update.
  std::size_t last_swapped = 0;
};

// A_j = g_j * g_bar_j.
DenseVector agreement_score(const DenseVector& grad, const DenseVector& mean_grad);

// Scores every index with H = agreement + lambda * fisher_raw, masks the k
// lowest-H active indices and restores the k highest-H masked ones, where k
// is swap_count clamped to both pools. The zero count never changes. Ties go
// to the lowest index.
HardMaskState harmodt_update(const HardMaskState& state,
                             const DenseVector& agreement,
                             const DenseVector& fisher_raw, double lambda);

// Plain averaged multi-task SGD: theta - lr * mean_i g_i.
DenseVector nomask_step(const DenseVector& theta,
                        std::span<const DenseVector> grads, double lr);

}  // namespace soco

#endif  // SOCO_BASELINES_H_

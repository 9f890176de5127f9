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

#include "soco/baselines.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "soco/errors.h"

namespace soco {

DenseVector agreement_score(const DenseVector& grad,
                            const DenseVector& mean_grad) {
  return elementwise_mul(grad, mean_grad);
}

HardMaskState harmodt_update(const HardMaskState& state,
                             const DenseVector& agreement,
                             const DenseVector& fisher_raw, double lambda) {
  const std::size_t d = state.mask.size();
  if (agreement.size() != d || fisher_raw.size() != d) {
    throw DimensionError("harmodt_update: score length mismatch");
  }
  std::vector<double> harmony(d);
  for (std::size_t j = 0; j < d; ++j) {
    harmony[j] = agreement[j] + lambda * fisher_raw[j];
  }

  std::vector<std::size_t> active, masked;
  for (std::size_t j = 0; j < d; ++j) {
    (state.mask.passes_forward(j) ? active : masked).push_back(j);
  }
  const std::size_t k =
      std::min({state.swap_count, active.size(), masked.size()});

  // Stable sorts over ascending indices give lowest-index tie-breaking.
  std::stable_sort(active.begin(), active.end(), [&](auto a, auto b) {
    return harmony[a] < harmony[b];
  });
  std::stable_sort(masked.begin(), masked.end(), [&](auto a, auto b) {
    return harmony[a] > harmony[b];
  });

  HardMaskState next = state;
  for (std::size_t r = 0; r < k; ++r) {
    next.mask.set(active[r], 0.0);
    next.mask.set(masked[r], 1.0);
  }
  next.last_swapped = k;
  return next;
}

DenseVector nomask_step(const DenseVector& theta,
                        std::span<const DenseVector> grads, double lr) {
  if (grads.empty()) throw EmptyInputError("nomask_step: no tasks");
  if (!(lr > 0.0)) throw InvalidValueError("nomask_step: lr must be > 0");
  const DenseVector avg = mean(grads);
  if (avg.size() != theta.size()) {
    throw DimensionError("nomask_step: gradient length mismatch");
  }
  DenseVector next(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    next[j] = theta[j] - lr * avg[j];
  }
  return next;
}

}  // namespace soco

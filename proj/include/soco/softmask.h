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

#ifndef SOCO_SOFTMASK_H_
#define SOCO_SOFTMASK_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "soco/vecmath.h"

namespace soco {

// Per-task soft mask with entries in [0, 1]. The forward (binary) mask is
// derived, never stored: an entry passes the forward pass only when its soft
// value is exactly 1.
class TaskMask {
 public:
  TaskMask() = default;
  // All ones.
  explicit TaskMask(std::size_t d);
  // Throws InvalidValueError if any entry lies outside [0, 1].
  explicit TaskMask(DenseVector soft);

  std::size_t size() const { return soft_.size(); }
  double operator[](std::size_t j) const { return soft_[j]; }
  const DenseVector& soft() const { return soft_; }

  // Throws InvalidValueError outside [0, 1].
  void set(std::size_t j, double value);

  DenseVector binary() const;
  bool passes_forward(std::size_t j) const { return soft_[j] == 1.0; }

  // Fraction of entries below 1.
  double sparsity() const;
  std::size_t zero_count() const;

  friend bool operator==(const TaskMask&, const TaskMask&) = default;

 private:
  DenseVector soft_;
};

struct FisherInfo {
  DenseVector raw;
  DenseVector normalized;
};

// Min-max normalisation onto [0, 1]. When every entry is equal the result is
// 0.5 everywhere.
DenseVector normalize_minmax(const DenseVector& raw);

// Empirical Fisher of one task: raw_j = (g_j * soft_j)^2.
FisherInfo fisher_information(const DenseVector& grad, const TaskMask& mask);

// Mask holding the normalised Fisher value at every index of `conflict_set`
// and 1 everywhere else.
TaskMask soft_mask_values(const FisherInfo& fisher,
                          std::span<const std::size_t> conflict_set);

DenseVector masked_forward(const DenseVector& theta, const TaskMask& mask);

// theta - lr * (1/N) sum_i (grad_i * soft_i). Each task's gradient is
// discounted by its own soft mask before averaging. Throws EmptyInputError
// when there are no tasks.
DenseVector masked_sgd_step(const DenseVector& theta,
                            std::span<const DenseVector> grads,
                            std::span<const TaskMask> masks, double lr);

// CSV with header "param_index,soft_value".
void write_mask_csv(std::ostream& os, const TaskMask& mask);

}  // namespace soco

#endif  // SOCO_SOFTMASK_H_

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

#include "soco/softmask.h"

#include <cmath>
#include <ostream>
#include <string>

#include "soco/errors.h"
#include "soco/format.h"

namespace soco {

namespace {

void check_unit(double value, std::size_t j) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidValueError("mask value " + format_double(value) +
                            " outside [0,1] at index " + std::to_string(j));
  }
}

}  // namespace

TaskMask::TaskMask(std::size_t d) : soft_(d, 1.0) {}

TaskMask::TaskMask(DenseVector soft) : soft_(std::move(soft)) {
  for (std::size_t j = 0; j < soft_.size(); ++j) check_unit(soft_[j], j);
}

void TaskMask::set(std::size_t j, double value) {
  check_unit(value, j);
  soft_[j] = value;
}

DenseVector TaskMask::binary() const {
  DenseVector out(soft_.size());
  for (std::size_t j = 0; j < soft_.size(); ++j) {
    out[j] = soft_[j] == 1.0 ? 1.0 : 0.0;
  }
  return out;
}

double TaskMask::sparsity() const {
  if (soft_.empty()) return 0.0;
  std::size_t below = 0;
  for (double v : soft_) below += v < 1.0 ? 1 : 0;
  return static_cast<double>(below) / static_cast<double>(soft_.size());
}

std::size_t TaskMask::zero_count() const {
  std::size_t zeros = 0;
  for (double v : soft_) zeros += v == 0.0 ? 1 : 0;
  return zeros;
}

DenseVector normalize_minmax(const DenseVector& raw) {
  if (raw.empty()) return raw;
  const auto [lo, hi] = minmax(raw);
  DenseVector out(raw.size(), 0.5);
  if (hi > lo) {
    const double range = hi - lo;
    for (std::size_t j = 0; j < raw.size(); ++j) {
      out[j] = (raw[j] - lo) / range;
    }
  }
  return out;
}

FisherInfo fisher_information(const DenseVector& grad, const TaskMask& mask) {
  DenseVector raw = square(elementwise_mul(grad, mask.soft()));
  DenseVector normalized = normalize_minmax(raw);
  return {std::move(raw), std::move(normalized)};
}

TaskMask soft_mask_values(const FisherInfo& fisher,
                          std::span<const std::size_t> conflict_set) {
  TaskMask mask(fisher.normalized.size());
  for (std::size_t j : conflict_set) {
    if (j >= mask.size()) {
      throw DimensionError("soft_mask_values: index " + std::to_string(j) +
                           " out of range");
    }
    mask.set(j, fisher.normalized[j]);
  }
  return mask;
}

DenseVector masked_forward(const DenseVector& theta, const TaskMask& mask) {
  return elementwise_mul(theta, mask.binary());
}

DenseVector masked_sgd_step(const DenseVector& theta,
                            std::span<const DenseVector> grads,
                            std::span<const TaskMask> masks, double lr) {
  if (grads.empty()) throw EmptyInputError("masked_sgd_step: no tasks");
  if (grads.size() != masks.size()) {
    throw DimensionError("masked_sgd_step: gradient and mask counts differ");
  }
  if (!(lr > 0.0)) throw InvalidValueError("masked_sgd_step: lr must be > 0");
  const std::size_t d = theta.size();
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (grads[i].size() != d || masks[i].size() != d) {
      throw DimensionError("masked_sgd_step: task " + std::to_string(i) +
                           " length mismatch");
    }
  }
  const double n = static_cast<double>(grads.size());
  DenseVector next(d);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < grads.size(); ++i) {
      sum += grads[i][j] * masks[i][j];
    }
    next[j] = theta[j] - lr * (sum / n);
  }
  return next;
}

void write_mask_csv(std::ostream& os, const TaskMask& mask) {
  os << "param_index,soft_value\n";
  for (std::size_t j = 0; j < mask.size(); ++j) {
    os << j << ',' << format_double(mask[j]) << '\n';
  }
}

}  // namespace soco

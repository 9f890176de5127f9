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

#ifndef SOCO_MODEL_H_
#define SOCO_MODEL_H_

#include <cstddef>
#include <variant>
#include <vector>

#include "soco/vecmath.h"

namespace soco {

enum class ModelKind { kQuadratic, kMlp };

// Layer widths from input to output, e.g. {4, 16, 16, 2}. Hidden layers use
// tanh, the output layer is linear. Parameters are flattened layer by layer,
// each layer as its row-major weight matrix (out x in) followed by its bias.
struct MlpArchitecture {
  std::vector<std::size_t> widths;

  std::size_t param_count() const;
  std::size_t input_width() const { return widths.front(); }
  std::size_t output_width() const { return widths.back(); }
};

struct ModelSpec {
  ModelKind kind = ModelKind::kQuadratic;
  std::size_t dim = 0;
  MlpArchitecture architecture;  // only meaningful for kMlp
};

// L(theta) = 1/2 sum_j curvature_j (theta_j - target_j)^2.
struct QuadraticTask {
  DenseVector target;
  DenseVector curvature;  // strictly positive

  QuadraticTask(DenseVector target, DenseVector curvature);
};

// Mean squared error of an MLP over a fixed sample set. Inputs and outputs
// are row-major, one row per sample.
struct MlpTask {
  MlpArchitecture architecture;
  std::size_t n_samples = 0;
  std::vector<double> inputs;
  std::vector<double> outputs;

  MlpTask(MlpArchitecture architecture, std::vector<double> inputs,
          std::vector<double> outputs);
};

using Task = std::variant<QuadraticTask, MlpTask>;

std::size_t dim(const Task& task);

// Both evaluate at an already masked parameter point; callers apply the
// forward mask first. Throw DimensionError when the length is not dim(task).
double loss(const Task& task, const DenseVector& theta_masked);
DenseVector gradient(const Task& task, const DenseVector& theta_masked);

// Network outputs for a single input row (row-major, output_width values).
std::vector<double> mlp_predict(const MlpArchitecture& architecture,
                                const DenseVector& params,
                                std::span<const double> input);

}  // namespace soco

#endif  // SOCO_MODEL_H_

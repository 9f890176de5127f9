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

#include "soco/model.h"

#include <cmath>
#include <string>

#include "soco/errors.h"

namespace soco {

namespace {

void check_dim(std::size_t expected, const DenseVector& theta) {
  if (theta.size() != expected) {
    throw DimensionError("parameter length " + std::to_string(theta.size()) +
                         ", model expects " + std::to_string(expected));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Activations of every layer for one sample. activations[0] is the input,
// activations.back() the linear output.
std::vector<std::vector<double>> forward_all(const MlpArchitecture& arch,
                                             const DenseVector& params,
                                             std::span<const double> input) {
  const auto& w = arch.widths;
  std::vector<std::vector<double>> acts;
  acts.reserve(w.size());
  acts.emplace_back(input.begin(), input.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    const std::size_t in = w[l];
    const std::size_t out = w[l + 1];
    const double* weights = params.span().data() + offset;
    const double* bias = weights + out * in;
    const auto& prev = acts.back();
    std::vector<double> next(out);
    const bool hidden = l + 2 < w.size();
    for (std::size_t r = 0; r < out; ++r) {
      double z = bias[r];
      for (std::size_t c = 0; c < in; ++c) z += weights[r * in + c] * prev[c];
      next[r] = hidden ? std::tanh(z) : z;
    }
    acts.push_back(std::move(next));
    offset += out * in + out;
  }
  return acts;
}

double mlp_loss(const MlpTask& task, const DenseVector& params) {
  const auto& arch = task.architecture;
  const std::size_t in = arch.input_width();
  const std::size_t out = arch.output_width();
  double sum = 0.0;
  for (std::size_t s = 0; s < task.n_samples; ++s) {
    const auto pred = mlp_predict(
        arch, params, std::span<const double>(task.inputs).subspan(s * in, in));
    for (std::size_t k = 0; k < out; ++k) {
      const double e = pred[k] - task.outputs[s * out + k];
      sum += e * e;
    }
  }
  return sum / static_cast<double>(task.n_samples * out);
}

DenseVector mlp_gradient(const MlpTask& task, const DenseVector& params) {
  const auto& arch = task.architecture;
  const auto& w = arch.widths;
  const std::size_t in_width = arch.input_width();
  const std::size_t out_width = arch.output_width();
  const double norm = 2.0 / static_cast<double>(task.n_samples * out_width);
  const std::size_t n_layers = w.size() - 1;

  std::vector<std::size_t> offsets(n_layers);
  for (std::size_t l = 0, off = 0; l < n_layers; ++l) {
    offsets[l] = off;
    off += w[l + 1] * w[l] + w[l + 1];
  }

  DenseVector grad(params.size());
  for (std::size_t s = 0; s < task.n_samples; ++s) {
    const auto acts = forward_all(
        arch, params,
        std::span<const double>(task.inputs).subspan(s * in_width, in_width));
    // dL/dz for the current layer, starting at the linear output.
    std::vector<double> delta(out_width);
    for (std::size_t k = 0; k < out_width; ++k) {
      delta[k] = norm * (acts.back()[k] - task.outputs[s * out_width + k]);
    }
    for (std::size_t l = n_layers; l-- > 0;) {
      const std::size_t in = w[l];
      const std::size_t out = w[l + 1];
      const auto& prev = acts[l];
      double* gw = grad.span().data() + offsets[l];
      double* gb = gw + out * in;
      for (std::size_t r = 0; r < out; ++r) {
        for (std::size_t c = 0; c < in; ++c) gw[r * in + c] += delta[r] * prev[c];
        gb[r] += delta[r];
      }
      if (l == 0) break;
      const double* weights = params.span().data() + offsets[l];
      std::vector<double> next(in, 0.0);
      for (std::size_t r = 0; r < out; ++r) {
        for (std::size_t c = 0; c < in; ++c) next[c] += weights[r * in + c] * delta[r];
      }
      for (std::size_t c = 0; c < in; ++c) next[c] *= 1.0 - prev[c] * prev[c];
      delta = std::move(next);
    }
  }
  return grad;
}

}  // namespace

std::size_t MlpArchitecture::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    n += widths[l + 1] * widths[l] + widths[l + 1];
  }
  return n;
}

QuadraticTask::QuadraticTask(DenseVector target_in, DenseVector curvature_in)
    : target(std::move(target_in)), curvature(std::move(curvature_in)) {
  if (target.size() != curvature.size()) {
    throw DimensionError("QuadraticTask: target and curvature lengths differ");
  }
  for (double a : curvature) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw InvalidValueError("QuadraticTask: curvature must be positive");
    }
  }
}

MlpTask::MlpTask(MlpArchitecture arch, std::vector<double> in,
                 std::vector<double> out)
    : architecture(std::move(arch)),
      inputs(std::move(in)),
      outputs(std::move(out)) {
  if (architecture.widths.size() < 2) {
    throw InvalidValueError("MlpTask: need at least input and output widths");
  }
  for (auto width : architecture.widths) {
    if (width == 0) throw InvalidValueError("MlpTask: zero layer width");
  }
  const std::size_t iw = architecture.input_width();
  if (inputs.empty() || inputs.size() % iw != 0) {
    throw DimensionError("MlpTask: input matrix does not match input width");
  }
  n_samples = inputs.size() / iw;
  if (outputs.size() != n_samples * architecture.output_width()) {
    throw DimensionError("MlpTask: output matrix does not match sample count");
  }
}

std::size_t dim(const Task& task) {
  return std::visit(
      Overloaded{[](const QuadraticTask& q) { return q.target.size(); },
                 [](const MlpTask& m) { return m.architecture.param_count(); }},
      task);
}

double loss(const Task& task, const DenseVector& theta_masked) {
  check_dim(dim(task), theta_masked);
  return std::visit(
      Overloaded{[&](const QuadraticTask& q) {
                   double sum = 0.0;
                   for (std::size_t j = 0; j < q.target.size(); ++j) {
                     const double e = theta_masked[j] - q.target[j];
                     sum += q.curvature[j] * e * e;
                   }
                   return 0.5 * sum;
                 },
                 [&](const MlpTask& m) { return mlp_loss(m, theta_masked); }},
      task);
}

DenseVector gradient(const Task& task, const DenseVector& theta_masked) {
  check_dim(dim(task), theta_masked);
  return std::visit(
      Overloaded{[&](const QuadraticTask& q) {
                   DenseVector g(q.target.size());
                   for (std::size_t j = 0; j < g.size(); ++j) {
                     g[j] = q.curvature[j] * (theta_masked[j] - q.target[j]);
                   }
                   return g;
                 },
                 [&](const MlpTask& m) { return mlp_gradient(m, theta_masked); }},
      task);
}

std::vector<double> mlp_predict(const MlpArchitecture& architecture,
                                const DenseVector& params,
                                std::span<const double> input) {
  check_dim(architecture.param_count(), params);
  return forward_all(architecture, params, input).back();
}

}  // namespace soco

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

// Independent reference implementations the tests compare the library
// against. Nothing here calls into the code under test beyond plain data
// types, and each routine takes the slow obvious route on purpose.

#ifndef SOCO_TESTS_ORACLES_H_
#define SOCO_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "soco/model.h"
#include "soco/softmask.h"
#include "soco/vecmath.h"

namespace oracle {

// Interpolated quantile with 1-based rank k = q n, ranks clamped to [1, n].
inline double quantile_of_sorted(const std::vector<double>& sorted, double q) {
  const long n = static_cast<long>(sorted.size());
  const double k = q * static_cast<double>(n);
  long lo = static_cast<long>(k);  // floor, k > 0
  const double frac = k - static_cast<double>(lo);
  long hi = frac > 0.0 ? lo + 1 : lo;
  lo = std::min(std::max(lo, 1L), n);
  hi = std::min(std::max(hi, 1L), n);
  if (frac == 0.0) return sorted[lo - 1];
  return (1.0 - frac) * sorted[lo - 1] + frac * sorted[hi - 1];
}

// Sorts by repeated minimum extraction rather than std::sort.
inline double quantile(std::vector<double> xs, double q) {
  std::vector<double> sorted;
  while (!xs.empty()) {
    auto it = std::min_element(xs.begin(), xs.end());
    sorted.push_back(*it);
    xs.erase(it);
  }
  return quantile_of_sorted(sorted, q);
}

// One layer at a time with explicit index arithmetic: weights of layer l are
// an (out x in) row-major block followed by out biases.
inline std::vector<double> mlp_forward(const std::vector<std::size_t>& widths,
                                       const std::vector<double>& params,
                                       const std::vector<double>& input) {
  std::vector<double> act = input;
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t in = widths[l];
    const std::size_t out = widths[l + 1];
    const std::size_t bias_at = offset + in * out;
    std::vector<double> next(out);
    for (std::size_t r = 0; r < out; ++r) {
      double z = params[bias_at + r];
      for (std::size_t c = 0; c < in; ++c) z += params[offset + r * in + c] * act[c];
      const bool last = l + 2 == widths.size();
      next[r] = last ? z : std::tanh(z);
    }
    act = next;
    offset = bias_at + out;
  }
  return act;
}

inline double mlp_mse(const std::vector<std::size_t>& widths,
                      const std::vector<double>& params,
                      const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& outputs) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const auto pred = mlp_forward(widths, params, inputs[s]);
    for (std::size_t k = 0; k < pred.size(); ++k) {
      total += (pred[k] - outputs[s][k]) * (pred[k] - outputs[s][k]);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

inline std::vector<double> central_difference(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double keep = x[j];
    x[j] = keep + h;
    const double up = f(x);
    x[j] = keep - h;
    const double down = f(x);
    x[j] = keep;
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

// Fraction of coordinates where g_i and the task mean point opposite ways.
inline std::vector<double> conflict_ratios(
    const std::vector<soco::DenseVector>& grads) {
  const std::size_t n = grads.size();
  const std::size_t d = grads.front().size();
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < d; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += grads[k][j];
      if (grads[i][j] * (sum / static_cast<double>(n)) < 0.0) ++count;
    }
    out.push_back(static_cast<double>(count) / static_cast<double>(d));
  }
  return out;
}

// Index j is in the top `keep` when fewer than `keep` indices outrank it;
// an index is outranked by larger scores and by equal scores at lower
// indices. Quadratic in d, no sorting.
inline std::size_t wrongly_masked(const soco::DenseVector& importance,
                                  const soco::TaskMask& mask,
                                  double top_fraction) {
  const std::size_t d = importance.size();
  const auto keep = static_cast<std::size_t>(
      std::floor(top_fraction * static_cast<double>(d) + 1e-9));
  std::size_t wrong = 0;
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t above = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (importance[k] > importance[j] ||
          (importance[k] == importance[j] && k < j)) {
        ++above;
      }
    }
    if (above < keep && mask.soft()[j] < 1.0) ++wrong;
  }
  return wrong;
}

}  // namespace oracle

#endif  // SOCO_TESTS_ORACLES_H_

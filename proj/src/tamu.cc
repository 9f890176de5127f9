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

#include "soco/tamu.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "soco/errors.h"

namespace soco {

void TamuConfig::validate() const {
  const double values[] = {lambda, alpha, q1, q3,
                           beta_left_max, beta_right_max, beta_min};
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("tamu: non-finite hyperparameter");
  }
  if (lambda < 0.0) throw ConfigError("tamu: lambda must be >= 0");
  if (!(alpha > 0.0)) throw ConfigError("tamu: alpha must be > 0");
  if (!(q1 > 0.0 && q1 < q3 && q3 < 1.0)) {
    throw ConfigError("tamu: need 0 < q1 < q3 < 1");
  }
  if (beta_min > std::min(beta_left_max, beta_right_max)) {
    throw ConfigError("tamu: beta_min exceeds a beta maximum");
  }
  if (total_steps < 1) throw ConfigError("tamu: total steps must be >= 1");
  if (mask_interval < 1) throw ConfigError("tamu: mask interval must be >= 1");
}

DenseVector conflict_score(const DenseVector& grad, const DenseVector& mean_grad,
                           const DenseVector& fisher_raw, double lambda) {
  DenseVector score = elementwise_mul(grad, mean_grad);
  if (fisher_raw.size() != score.size()) {
    throw DimensionError("conflict_score: fisher length mismatch");
  }
  for (std::size_t j = 0; j < score.size(); ++j) {
    score[j] += lambda * fisher_raw[j];
  }
  return score;
}

DenseVector harmony_gate(const DenseVector& grad, const DenseVector& mean_grad,
                         double alpha) {
  if (grad.size() != mean_grad.size()) {
    throw DimensionError("harmony_gate: length mismatch");
  }
  DenseVector gate(grad.size());
  for (std::size_t j = 0; j < grad.size(); ++j) {
    const double tolerance = alpha * std::abs(mean_grad[j]);
    if (tolerance == 0.0) continue;
    gate[j] = std::max(0.0, (tolerance - std::abs(grad[j])) / tolerance);
  }
  return gate;
}

DenseVector harmony_score(const DenseVector& grad, const DenseVector& mean_grad,
                          const DenseVector& gate) {
  DenseVector score = elementwise_mul(grad, mean_grad);
  if (gate.size() != score.size()) {
    throw DimensionError("harmony_score: gate length mismatch");
  }
  // Positive-product guard first: the gate is only read where g_bar != 0.
  for (std::size_t j = 0; j < score.size(); ++j) {
    if (score[j] > 0.0) score[j] *= gate[j];
  }
  return score;
}

ScoreReport score_task(const DenseVector& grad, const DenseVector& mean_grad,
                       const DenseVector& fisher_raw, const TamuConfig& cfg) {
  ScoreReport report;
  report.conflict = conflict_score(grad, mean_grad, fisher_raw, cfg.lambda);
  report.gate = harmony_gate(grad, mean_grad, cfg.alpha);
  report.harmony = harmony_score(grad, mean_grad, report.gate);
  return report;
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EmptyInputError("quantile: empty input");
  if (!(q > 0.0 && q < 1.0)) {
    throw InvalidValueError("quantile: q must lie in (0, 1)");
  }
  const auto n = static_cast<double>(sorted.size());
  const double k = q * n;
  const double lower = std::floor(k);
  // 1-based rank, clamped to [1, n].
  auto at = [&](double rank) {
    const double clamped = std::clamp(rank, 1.0, n);
    return sorted[static_cast<std::size_t>(clamped) - 1];
  };
  if (k == lower) return at(k);
  const double gamma = k - lower;
  // Same value as (1 - gamma) a + gamma b, but monotone in q under rounding.
  const double a = at(lower);
  const double b = at(std::ceil(k));
  return std::clamp(a + gamma * (b - a), a, b);
}

double iqr_threshold(const DenseVector& scores, const TamuConfig& cfg,
                     double beta, ThresholdSide side) {
  const DenseVector sorted = sort_ascending(scores);
  const double lo = quantile(sorted.span(), cfg.q1);
  const double hi = quantile(sorted.span(), cfg.q3);
  const double iqr = hi - lo;
  return side == ThresholdSide::kConflict ? lo - beta * iqr : hi + beta * iqr;
}

double cosine_anneal(double eta_max, double eta_min, double t, double total) {
  if (total == 0.0) throw InvalidValueError("cosine_anneal: T must be nonzero");
  return eta_min + 0.5 * (eta_max - eta_min) *
                       (1.0 + std::cos(2.0 * std::numbers::pi * t / total));
}

double beta_schedule(const TamuConfig& cfg, double t) {
  const auto total = static_cast<double>(cfg.total_steps);
  if (t < 0.0 || t > total) {
    throw InvalidValueError("beta_schedule: t outside [0, T]");
  }
  const double peak = 2.0 * t <= total ? cfg.beta_left_max : cfg.beta_right_max;
  return cosine_anneal(peak, cfg.beta_min, t, total);
}

SelectionResult select(const ScoreReport& scores, const TamuConfig& cfg,
                       double beta) {
  if (scores.conflict.size() != scores.harmony.size()) {
    throw DimensionError("select: score lengths differ");
  }
  SelectionResult sel;
  sel.beta = beta;
  sel.conflict_threshold =
      iqr_threshold(scores.conflict, cfg, beta, ThresholdSide::kConflict);
  sel.harmony_threshold =
      iqr_threshold(scores.harmony, cfg, beta, ThresholdSide::kHarmony);
  // Conflict classification wins: an index below the conflict threshold is
  // never also recovered in the same round.
  for (std::size_t j = 0; j < scores.conflict.size(); ++j) {
    if (scores.conflict[j] < sel.conflict_threshold) {
      sel.conflict_set.push_back(j);
    } else if (scores.harmony[j] > sel.harmony_threshold) {
      sel.recover_set.push_back(j);
    }
  }
  return sel;
}

TaskMask apply_mask_update(const TaskMask& mask, const SelectionResult& sel,
                           const FisherInfo& fisher) {
  const std::size_t d = mask.size();
  if (fisher.normalized.size() != d) {
    throw DimensionError("apply_mask_update: fisher length mismatch");
  }
  std::vector<char> in_conflict(d, 0);
  for (std::size_t j : sel.conflict_set) {
    if (j >= d) throw DimensionError("apply_mask_update: index out of range");
    in_conflict[j] = 1;
  }
  for (std::size_t j : sel.recover_set) {
    if (j >= d) throw DimensionError("apply_mask_update: index out of range");
    if (in_conflict[j]) {
      throw ContractViolation("apply_mask_update: index " + std::to_string(j) +
                              " is both conflicting and recovered");
    }
  }
  // M - (M_C - M_mask) + M_recover reduces to plain assignment on the two
  // sets; assigning keeps the targets bit-exact.
  TaskMask next = mask;
  for (std::size_t j : sel.conflict_set) next.set(j, fisher.normalized[j]);
  for (std::size_t j : sel.recover_set) next.set(j, 1.0);
  return next;
}

}  // namespace soco

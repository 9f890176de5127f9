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

#include "soco/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <type_traits>

#include "soco/baselines.h"
#include "soco/errors.h"
#include "soco/format.h"
#include "soco/model.h"

namespace soco {

namespace {

std::size_t fraction_count(double fraction, std::size_t d) {
  // The epsilon absorbs representation error such as 0.29 * 100.
  return static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(d) + 1e-9));
}

struct Evaluation {
  std::vector<DenseVector> grads;
  std::vector<double> losses;
};

Evaluation evaluate(const TaskSuite& suite, const DenseVector& theta,
                    std::span<const TaskMask> masks, std::int64_t step) {
  Evaluation ev;
  ev.grads.reserve(suite.n_tasks());
  ev.losses.reserve(suite.n_tasks());
  for (std::size_t i = 0; i < suite.n_tasks(); ++i) {
    const DenseVector point = masked_forward(theta, masks[i]);
    const double value = loss(suite.tasks[i], point);
    DenseVector grad = gradient(suite.tasks[i], point);
    const std::size_t bad = first_non_finite(grad);
    if (!std::isfinite(value) || bad != grad.size()) {
      std::size_t where = bad != grad.size() ? bad : first_non_finite(point);
      if (where == point.size()) {
        // Everything finite but the loss overflowed; blame the largest entry.
        where = static_cast<std::size_t>(
            std::max_element(point.begin(), point.end(),
                             [](double a, double b) {
                               return std::abs(a) < std::abs(b);
                             }) -
            point.begin());
      }
      throw NonFiniteError("non-finite loss or gradient at step " +
                               std::to_string(step) + ", task " +
                               std::to_string(i) + ", coordinate " +
                               std::to_string(where),
                           step, i, where);
    }
    ev.losses.push_back(value);
    ev.grads.push_back(std::move(grad));
  }
  return ev;
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kSoco:
      return "soco";
    case Strategy::kHard:
      return "hard";
    case Strategy::kNone:
      return "none";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "soco") return Strategy::kSoco;
  if (name == "hard") return Strategy::kHard;
  if (name == "none") return Strategy::kNone;
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be > 0");
  if (mask_interval < 1) throw ConfigError("mask_interval must be >= 1");
  if (!(init_sparsity >= 0.0 && init_sparsity < 1.0)) {
    throw ConfigError("init_sparsity must lie in [0, 1)");
  }
  if (!(hard_sparsity >= 0.0 && hard_sparsity < 1.0)) {
    throw ConfigError("hard_sparsity must lie in [0, 1)");
  }
  if (!(hard_swap_frac >= 0.0 && hard_swap_frac <= 1.0)) {
    throw ConfigError("hard_swap_frac must lie in [0, 1]");
  }
  if (!(success_frac > 0.0)) throw ConfigError("success_frac must be > 0");
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw ConfigError("top fraction must lie in (0, 1]");
  }
  TamuConfig t = tamu;
  t.total_steps = epochs;
  t.mask_interval = mask_interval;
  t.validate();
}

double RunRecord::success_rate() const {
  if (outcomes.empty()) return 0.0;
  const auto hits = std::count_if(outcomes.begin(), outcomes.end(),
                                  [](const auto& o) { return o.success; });
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

double RunRecord::mean_final_loss() const {
  if (outcomes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& o : outcomes) sum += o.final_loss;
  return sum / static_cast<double>(outcomes.size());
}

std::vector<TaskMask> init_masks(std::size_t d, std::size_t n_tasks,
                                 double sparsity, Rng& rng) {
  if (!(sparsity >= 0.0 && sparsity < 1.0)) {
    throw ConfigError("initial sparsity must lie in [0, 1)");
  }
  const std::size_t zeros = fraction_count(sparsity, d);
  std::vector<TaskMask> masks;
  masks.reserve(n_tasks);
  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < n_tasks; ++i) {
    TaskMask mask(d);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t k = 0; k < zeros; ++k) mask.set(order[k], 0.0);
    masks.push_back(std::move(mask));
  }
  return masks;
}

std::vector<std::size_t> wrongly_masked_important(
    std::span<const DenseVector> importance, std::span<const TaskMask> masks,
    double top_fraction) {
  if (importance.size() != masks.size()) {
    throw DimensionError("wrongly_masked_important: task counts differ");
  }
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw InvalidValueError("wrongly_masked_important: fraction outside (0,1]");
  }
  std::vector<std::size_t> counts;
  counts.reserve(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto& score = importance[i];
    if (score.size() != masks[i].size()) {
      throw DimensionError("wrongly_masked_important: length mismatch");
    }
    std::vector<std::size_t> order(score.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return score[a] > score[b];
    });
    const std::size_t top = fraction_count(top_fraction, score.size());
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < top; ++r) {
      if (masks[i][order[r]] < 1.0) ++wrong;
    }
    counts.push_back(wrong);
  }
  return counts;
}

RunRecord train(const TaskSuite& suite, const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t n = suite.n_tasks();
  const std::size_t d = suite.dim();
  if (n == 0) throw EmptyInputError("train: suite has no tasks");

  TamuConfig tamu = cfg.tamu;
  tamu.total_steps = cfg.epochs;
  tamu.mask_interval = cfg.mask_interval;

  Rng root(cfg.seed);
  Rng mask_rng = root.child(1);

  RunRecord record;
  record.strategy = cfg.strategy;
  DenseVector theta = initial_parameters(suite, cfg.seed);

  std::vector<TaskMask> masks;
  std::vector<HardMaskState> hard;
  switch (cfg.strategy) {
    case Strategy::kSoco:
      masks = init_masks(d, n, cfg.init_sparsity, mask_rng);
      break;
    case Strategy::kHard: {
      masks = init_masks(d, n, cfg.hard_sparsity, mask_rng);
      const auto swaps = static_cast<std::size_t>(
          std::llround(cfg.hard_swap_frac * static_cast<double>(d)));
      for (const auto& m : masks) hard.push_back({m, cfg.hard_sparsity, swaps, 0});
      break;
    }
    case Strategy::kNone:
      masks.assign(n, TaskMask(d));
      break;
  }

  record.outcomes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    record.outcomes[i].initial_loss = loss(suite.tasks[i], theta);
  }
  record.rows.reserve(static_cast<std::size_t>(cfg.epochs) * n);

  for (std::int64_t t = 1; t <= cfg.epochs; ++t) {
    Evaluation ev = evaluate(suite, theta, masks, t);
    const bool update_step = t % cfg.mask_interval == 0;

    std::vector<double> ratios;
    std::vector<std::size_t> wrongly;
    std::vector<SelectionResult> selections;
    std::vector<std::size_t> swapped;
    std::optional<double> beta;

    if (update_step) {
      ratios = conflict_fractions(ev.grads);
      std::vector<DenseVector> importance;
      importance.reserve(n);
      for (const auto& g : ev.grads) importance.push_back(square(g));
      wrongly = wrongly_masked_important(importance, masks, cfg.top_fraction);

      const std::vector<TaskMask> before = masks;
      const DenseVector mean_grad = mean(std::span<const DenseVector>(ev.grads));
      if (cfg.strategy == Strategy::kSoco) {
        beta = beta_schedule(tamu, static_cast<double>(t));
        for (std::size_t i = 0; i < n; ++i) {
          const FisherInfo fisher = fisher_information(ev.grads[i], masks[i]);
          const ScoreReport scores =
              score_task(ev.grads[i], mean_grad, fisher.raw, tamu);
          selections.push_back(select(scores, tamu, *beta));
          masks[i] = apply_mask_update(masks[i], selections.back(), fisher);
        }
      } else if (cfg.strategy == Strategy::kHard) {
        for (std::size_t i = 0; i < n; ++i) {
          const FisherInfo fisher = fisher_information(ev.grads[i], masks[i]);
          hard[i] = harmodt_update(hard[i], agreement_score(ev.grads[i], mean_grad),
                                   fisher.raw, tamu.lambda);
          masks[i] = hard[i].mask;
          swapped.push_back(hard[i].last_swapped);
        }
      }
      ++record.mask_updates;

      if (cfg.on_update) {
        UpdateSnapshot snap;
        snap.step = t;
        snap.theta = &theta;
        snap.masks_before = before;
        snap.masks_after = masks;
        snap.grads = ev.grads;
        snap.conflict_ratio = ratios;
        snap.wrongly_masked = wrongly;
        snap.beta = beta;
        snap.selections = selections;
        cfg.on_update(snap);
      }
      // The parameter step sees the updated forward masks.
      if (cfg.strategy != Strategy::kNone) ev = evaluate(suite, theta, masks, t);
    }

    for (std::size_t i = 0; i < n; ++i) {
      MetricRow row;
      row.step = t;
      row.task = i;
      row.loss = ev.losses[i];
      row.sparsity = masks[i].sparsity();
      if (update_step) {
        row.conflict_ratio = ratios[i];
        row.wrongly_masked = wrongly[i];
        if (cfg.strategy == Strategy::kSoco) {
          row.beta = beta;
          row.n_conflict = selections[i].conflict_set.size();
          row.n_recover = selections[i].recover_set.size();
          row.conflict_threshold = selections[i].conflict_threshold;
          row.harmony_threshold = selections[i].harmony_threshold;
        } else if (cfg.strategy == Strategy::kHard) {
          row.n_conflict = swapped[i];
          row.n_recover = swapped[i];
        }
      }
      record.rows.push_back(row);
    }

    DenseVector next = cfg.strategy == Strategy::kNone
                           ? nomask_step(theta, ev.grads, cfg.lr)
                           : masked_sgd_step(theta, ev.grads, masks, cfg.lr);
    if (cfg.on_step) {
      StepSnapshot snap;
      snap.step = t;
      snap.theta_before = &theta;
      snap.theta_after = &next;
      snap.grads = ev.grads;
      snap.masks = masks;
      cfg.on_step(snap);
    }
    theta = std::move(next);
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto& out = record.outcomes[i];
    out.final_loss = loss(suite.tasks[i], masked_forward(theta, masks[i]));
    if (!std::isfinite(out.final_loss)) {
      throw NonFiniteError("non-finite final loss for task " + std::to_string(i),
                           cfg.epochs, i, first_non_finite(theta));
    }
    out.success = out.final_loss <= cfg.success_frac * out.initial_loss;
  }
  record.theta = std::move(theta);
  record.masks = std::move(masks);
  return record;
}

void write_metrics_csv(std::ostream& os, const RunRecord& record) {
  os << "step,task_id,loss,sparsity,beta_t,n_conflict,n_recover,"
        "conflict_ratio,wrongly_masked_top30\n";
  auto opt_double = [&](const std::optional<double>& v) {
    if (v) os << format_double(*v);
  };
  auto opt_count = [&](const std::optional<std::size_t>& v) {
    if (v) os << *v;
  };
  for (const auto& row : record.rows) {
    os << row.step << ',' << row.task << ',' << format_double(row.loss) << ','
       << format_double(row.sparsity) << ',';
    opt_double(row.beta);
    os << ',';
    opt_count(row.n_conflict);
    os << ',';
    opt_count(row.n_recover);
    os << ',';
    opt_double(row.conflict_ratio);
    os << ',';
    opt_count(row.wrongly_masked);
    os << '\n';
  }
}

void write_update_log_csv(std::ostream& os, const RunRecord& record) {
  os << "step,task_id,beta_t,conflict_threshold,harmony_threshold,n_conflict,"
        "n_recover\n";
  auto opt = [&](const auto& v) {
    if (!v) return;
    if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>) {
      os << format_double(*v);
    } else {
      os << *v;
    }
  };
  for (const auto& row : record.rows) {
    // conflict_ratio is filled on every update step, whatever the strategy.
    if (!row.conflict_ratio) continue;
    os << row.step << ',' << row.task << ',';
    opt(row.beta);
    os << ',';
    opt(row.conflict_threshold);
    os << ',';
    opt(row.harmony_threshold);
    os << ',';
    opt(row.n_conflict);
    os << ',';
    opt(row.n_recover);
    os << '\n';
  }
}

}  // namespace soco

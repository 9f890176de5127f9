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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "soco/baselines.h"
#include "soco/errors.h"
#include "soco/model.h"

using soco::DenseVector;
using soco::HardMaskState;
using soco::TaskMask;

namespace {

HardMaskState state_of(DenseVector soft, std::size_t k) {
  HardMaskState s;
  s.mask = TaskMask(std::move(soft));
  s.swap_count = k;
  return s;
}

}  // namespace

TEST_CASE("agreement score") {
  CHECK(soco::agreement_score({1, -1}, {1, -1}) == DenseVector{1, 1});
  CHECK(soco::agreement_score({1}, {-1}) == DenseVector{-1});
  soco::Rng rng(3);
  DenseVector a(30), b(30);
  for (std::size_t j = 0; j < 30; ++j) {
    a[j] = rng.uniform(-4, 4);
    b[j] = rng.uniform(-4, 4);
  }
  CHECK(soco::agreement_score(a, b) == soco::elementwise_mul(a, b));
}

TEST_CASE("harmodt update") {
  SUBCASE("k = 0 leaves the state alone") {
    const auto s = state_of({1, 1, 0, 0}, 0);
    const auto next = soco::harmodt_update(s, {4, 3, 2, 1}, DenseVector(4), 1);
    CHECK(next.mask == s.mask);
    CHECK(next.last_swapped == 0);
  }
  SUBCASE("hand-traced single swap") {
    // Masked {3,4} in one-based terms; the weakest active index (H=3) goes
    // out and the strongest masked index (H=2) comes back.
    const auto s = state_of({1, 1, 0, 0}, 1);
    const auto next = soco::harmodt_update(s, {4, 3, 2, 1}, DenseVector(4), 0);
    CHECK(next.mask.soft() == DenseVector{1, 0, 1, 0});
    CHECK(next.last_swapped == 1);
  }
  SUBCASE("fisher shifts the combined score") {
    const auto s = state_of({1, 1, 0, 0}, 1);
    const auto next = soco::harmodt_update(s, {4, 3, 2, 1}, {0, 5, 0, 3}, 1);
    // H = [4, 8, 2, 4]: index 0 leaves, index 3 returns.
    CHECK(next.mask.soft() == DenseVector{0, 1, 0, 1});
  }
  SUBCASE("ties go to the lowest index") {
    const auto s = state_of({1, 1, 1, 0, 0, 0}, 2);
    const auto next = soco::harmodt_update(s, DenseVector(6, 0.5), DenseVector(6), 1);
    CHECK(next.mask.soft() == DenseVector{0, 0, 1, 1, 1, 0});
  }
  SUBCASE("k is clamped to the smaller pool") {
    const auto s = state_of({1, 0, 0, 0}, 3);
    const auto next = soco::harmodt_update(s, {1, 2, 3, 4}, DenseVector(4), 0);
    CHECK(next.last_swapped == 1);
    CHECK(next.mask.soft() == DenseVector{0, 0, 0, 1});
    const auto none_masked = state_of({1, 1}, 5);
    CHECK(soco::harmodt_update(none_masked, {1, 2}, DenseVector(2), 0).mask ==
          none_masked.mask);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(soco::harmodt_update(state_of({1, 0}, 1), {1}, {1, 1}, 0),
                    soco::DimensionError);
  }
}

TEST_CASE("harmodt update conserves zeros and only swaps across pools") {
  soco::Rng rng(77);
  DenseVector soft(100, 1.0);
  for (std::size_t j = 0; j < 20; ++j) soft[j * 5] = 0.0;
  auto s = state_of(soft, 3);
  for (int step = 0; step < 100; ++step) {
    DenseVector a(100), f(100);
    for (std::size_t j = 0; j < 100; ++j) {
      a[j] = rng.uniform(-1, 1);
      f[j] = rng.uniform(0, 1);
    }
    const auto next = soco::harmodt_update(s, a, f, 1);
    CHECK(next.mask.zero_count() == 20);
    std::size_t out = 0, in = 0;
    for (std::size_t j = 0; j < 100; ++j) {
      CHECK((next.mask[j] == 0.0 || next.mask[j] == 1.0));
      if (s.mask[j] == 1.0 && next.mask[j] == 0.0) ++out;
      if (s.mask[j] == 0.0 && next.mask[j] == 1.0) ++in;
    }
    CHECK(out == 3);
    CHECK(in == 3);
    s = next;
  }
}

TEST_CASE("no-mask step") {
  const std::vector<DenseVector> one{{2, -4}};
  CHECK(soco::nomask_step({1, 1}, one, 0.25) == DenseVector{0.5, 2});
  const std::vector<DenseVector> opposed{{3, 1}, {-3, -1}};
  CHECK(soco::nomask_step({1, 1}, opposed, 0.5) == DenseVector{1, 1});
  CHECK_THROWS_AS(soco::nomask_step({1}, std::vector<DenseVector>{}, 0.1),
                  soco::EmptyInputError);
  CHECK_THROWS(soco::nomask_step({1}, one, 0.1));
}

TEST_CASE("averaged quadratics converge to the mean optimum") {
  const DenseVector curv{1.5, 1.5, 1.5};
  const std::vector<soco::Task> tasks{soco::QuadraticTask({1, -2, 0.5}, curv),
                                      soco::QuadraticTask({3, 2, -0.5}, curv),
                                      soco::QuadraticTask({-1, 0.5, 3}, curv)};
  DenseVector theta(3);
  for (int step = 0; step < 500; ++step) {
    std::vector<DenseVector> g;
    for (const auto& t : tasks) g.push_back(soco::gradient(t, theta));
    theta = soco::nomask_step(theta, g, 0.3);
  }
  const DenseVector expect{1, 1.0 / 6.0, 1};
  for (std::size_t j = 0; j < 3; ++j) CHECK(theta[j] == doctest::Approx(expect[j]).epsilon(1e-12));
}

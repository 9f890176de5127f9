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

#include "soco/vecmath.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "soco/errors.h"

namespace soco {

namespace {

void check_same_length(const DenseVector& a, const DenseVector& b,
                       const char* op) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": length " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

template <typename Fn>
DenseVector zip(const DenseVector& a, const DenseVector& b, const char* op,
                Fn fn) {
  check_same_length(a, b, op);
  DenseVector out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = fn(a[j], b[j]);
  return out;
}

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

DenseVector elementwise_mul(const DenseVector& a, const DenseVector& b) {
  return zip(a, b, "elementwise_mul", [](double x, double y) { return x * y; });
}

DenseVector add(const DenseVector& a, const DenseVector& b) {
  return zip(a, b, "add", [](double x, double y) { return x + y; });
}

DenseVector subtract(const DenseVector& a, const DenseVector& b) {
  return zip(a, b, "subtract", [](double x, double y) { return x - y; });
}

DenseVector scale(const DenseVector& a, double factor) {
  DenseVector out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * factor;
  return out;
}

DenseVector square(const DenseVector& a) { return elementwise_mul(a, a); }

DenseVector mean(std::span<const DenseVector> vectors) {
  if (vectors.empty()) throw EmptyInputError("mean: no vectors");
  const std::size_t d = vectors.front().size();
  DenseVector sum(d);
  for (const auto& v : vectors) {
    check_same_length(sum, v, "mean");
    for (std::size_t j = 0; j < d; ++j) sum[j] += v[j];
  }
  const double n = static_cast<double>(vectors.size());
  for (auto& x : sum) x /= n;
  return sum;
}

DenseVector sort_ascending(const DenseVector& a) {
  if (std::any_of(a.begin(), a.end(), [](double x) { return std::isnan(x); })) {
    throw InvalidValueError("sort_ascending: NaN in input");
  }
  std::vector<double> v = a.values();
  std::sort(v.begin(), v.end());
  return DenseVector(std::move(v));
}

std::pair<double, double> minmax(const DenseVector& a) {
  if (a.empty()) throw EmptyInputError("minmax: empty vector");
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  return {*lo, *hi};
}

bool all_finite(const DenseVector& a) {
  return first_non_finite(a) == a.size();
}

std::size_t first_non_finite(const DenseVector& a) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!std::isfinite(a[j])) return j;
  }
  return a.size();
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw InvalidValueError("uniform_index: n must be positive");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = -n % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= limit) return r % n;
  }
}

Rng Rng::child(std::uint64_t stream) const {
  std::uint64_t x = seed_ ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  return Rng(splitmix64(x));
}

}  // namespace soco

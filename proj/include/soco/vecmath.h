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

#ifndef SOCO_VECMATH_H_
#define SOCO_VECMATH_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace soco {

// Fixed-length vector of doubles. Holds parameters, gradients, masks and
// Fisher scores alike; the length never changes after construction.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t size, double fill = 0.0)
      : values_(size, fill) {}
  DenseVector(std::initializer_list<double> values) : values_(values) {}
  explicit DenseVector(std::vector<double> values)
      : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  std::span<double> span() { return values_; }
  std::span<const double> span() const { return values_; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
};

// All of these throw DimensionError on length mismatch.
DenseVector elementwise_mul(const DenseVector& a, const DenseVector& b);
DenseVector add(const DenseVector& a, const DenseVector& b);
DenseVector subtract(const DenseVector& a, const DenseVector& b);
DenseVector scale(const DenseVector& a, double factor);
DenseVector square(const DenseVector& a);

// Coordinatewise mean of equal-length vectors, summed in input order.
// Throws EmptyInputError when `vectors` is empty.
DenseVector mean(std::span<const DenseVector> vectors);

// Throws InvalidValueError if any entry is NaN.
DenseVector sort_ascending(const DenseVector& a);

// Throws EmptyInputError on an empty vector.
std::pair<double, double> minmax(const DenseVector& a);

bool all_finite(const DenseVector& a);

// Index of the first non-finite entry, or a.size() if there is none.
std::size_t first_non_finite(const DenseVector& a);

// xoshiro256** seeded through splitmix64. The output stream depends only on
// the seed, so runs reproduce bit-for-bit across platforms. Only the integer
// and uniform draws are used by the library for that reason.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  // Fisher-Yates with uniform_index; std::shuffle is implementation defined.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Independent generator for a numbered sub-stream. Lets concurrent
  // workers own their generator without sharing this one.
  Rng child(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4];
};

}  // namespace soco

#endif  // SOCO_VECMATH_H_

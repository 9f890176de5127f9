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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "soco/errors.h"
#include "soco/vecmath.h"

using soco::DenseVector;

TEST_CASE("elementwise_mul") {
  CHECK(soco::elementwise_mul({1, 2}, {3, 4}) == DenseVector{3, 8});
  CHECK(soco::elementwise_mul({5, -5}, {0, 0}) == DenseVector{0, 0});
  CHECK(soco::elementwise_mul({2, -3}, {2, -3}) == DenseVector{4, 9});
  CHECK_THROWS_AS(soco::elementwise_mul({1, 2}, {1}), soco::DimensionError);
}

TEST_CASE("add subtract scale square") {
  CHECK(soco::add({1, 2}, {0.5, -2}) == DenseVector{1.5, 0});
  CHECK(soco::subtract({1, 2}, {0.5, -2}) == DenseVector{0.5, 4});
  CHECK(soco::scale({1, -2}, 3) == DenseVector{3, -6});
  CHECK(soco::square({-3, 0.5}) == DenseVector{9, 0.25});
  CHECK_THROWS_AS(soco::add({1}, {}), soco::DimensionError);
  CHECK_THROWS_AS(soco::subtract({1}, {1, 2}), soco::DimensionError);
}

TEST_CASE("mean sums in order then divides") {
  const std::vector<DenseVector> vs{{1, 2}, {3, -2}, {2, 3}};
  CHECK(soco::mean(vs) == DenseVector{2, 1});
  CHECK_THROWS_AS(soco::mean(std::vector<DenseVector>{}), soco::EmptyInputError);
  CHECK_THROWS_AS(soco::mean(std::vector<DenseVector>{{1}, {1, 2}}),
                  soco::DimensionError);
}

TEST_CASE("sort_ascending") {
  CHECK(soco::sort_ascending({3, 1, 2}) == DenseVector{1, 2, 3});
  CHECK(soco::sort_ascending(DenseVector{}) == DenseVector{});
  CHECK(soco::sort_ascending({2, 2, 1}) == DenseVector{1, 2, 2});
  CHECK_THROWS_AS(soco::sort_ascending({1, std::nan(""), 0}),
                  soco::InvalidValueError);
}

TEST_CASE("sort_ascending yields a nondecreasing permutation") {
  soco::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    DenseVector v(1 + rng.uniform_index(300));
    for (auto& x : v) x = std::round(rng.uniform(-50, 50));  // plenty of ties
    const DenseVector s = soco::sort_ascending(v);
    REQUIRE(s.size() == v.size());
    CHECK(std::is_sorted(s.begin(), s.end()));
    std::vector<double> a(v.begin(), v.end()), b(s.begin(), s.end());
    std::sort(a.begin(), a.end());
    CHECK(a == b);
  }
}

TEST_CASE("minmax") {
  CHECK(soco::minmax({4, 9, 0}) == std::pair<double, double>{0, 9});
  CHECK(soco::minmax({7}) == std::pair<double, double>{7, 7});
  CHECK(soco::minmax({-1, -5}) == std::pair<double, double>{-5, -1});
  CHECK_THROWS_AS(soco::minmax(DenseVector{}), soco::EmptyInputError);
}

TEST_CASE("finite checks") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(soco::all_finite({1, 2}));
  CHECK_FALSE(soco::all_finite({1, inf}));
  CHECK(soco::first_non_finite({0, 1, std::nan(""), inf}) == 2);
  CHECK(soco::first_non_finite({0, 1}) == 2);
}

TEST_CASE("algebraic laws on dyadic inputs") {
  soco::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    DenseVector a(16), b(16), c(16);
    for (std::size_t j = 0; j < 16; ++j) {
      // Multiples of 1/8 in a small range multiply and add exactly.
      a[j] = std::floor(rng.uniform(-64, 64)) / 8;
      b[j] = std::floor(rng.uniform(-64, 64)) / 8;
      c[j] = std::floor(rng.uniform(-64, 64)) / 8;
    }
    CHECK(soco::elementwise_mul(a, b) == soco::elementwise_mul(b, a));
    CHECK(soco::add(a, b) == soco::add(b, a));
    CHECK(soco::add(soco::add(a, b), c) == soco::add(a, soco::add(b, c)));
    CHECK(soco::elementwise_mul(soco::elementwise_mul(a, b), c) ==
          soco::elementwise_mul(a, soco::elementwise_mul(b, c)));
    CHECK(soco::subtract(soco::add(a, b), b) == a);
  }
}

TEST_CASE("Rng streams") {
  SUBCASE("equal seeds give identical streams") {
    soco::Rng a(42), b(42);
    bool same = true;
    for (int i = 0; i < 1'000'000; ++i) same = same && a.next_u64() == b.next_u64();
    CHECK(same);
  }
  SUBCASE("different seeds diverge") {
    soco::Rng a(1), b(2);
    CHECK(a.next_u64() != b.next_u64());
  }
  SUBCASE("matches a reference xoshiro256** seeded by splitmix64") {
    std::uint64_t sm = 0;
    auto splitmix = [&sm] {
      std::uint64_t z = (sm += 0x9e3779b97f4a7c15ULL);
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return z ^ (z >> 31);
    };
    std::uint64_t s[4];
    for (auto& w : s) w = splitmix();
    // Published first splitmix64 output for seed 0.
    CHECK(s[0] == 0xe220a8397b1dcdafULL);
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    soco::Rng rng(0);
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t expect = rotl(s[1] * 5, 7) * 9;
      const std::uint64_t t = s[1] << 17;
      s[2] ^= s[0];
      s[3] ^= s[1];
      s[1] ^= s[2];
      s[0] ^= s[3];
      s[2] ^= t;
      s[3] = rotl(s[3], 45);
      REQUIRE(rng.next_u64() == expect);
    }
  }
  SUBCASE("uniform ranges") {
    soco::Rng r(3);
    for (int i = 0; i < 10000; ++i) {
      const double u = r.uniform();
      CHECK((u >= 0.0 && u < 1.0));
      const double v = r.uniform(-2.0, 5.0);
      CHECK((v >= -2.0 && v < 5.0));
      CHECK(r.uniform_index(7) < 7);
    }
    CHECK_THROWS_AS(r.uniform_index(0), soco::InvalidValueError);
  }
  SUBCASE("children are deterministic and distinct") {
    const soco::Rng root(9);
    auto c1 = root.child(1), c1b = root.child(1), c2 = root.child(2);
    const auto x = c1.next_u64();
    CHECK(x == c1b.next_u64());
    CHECK(x != c2.next_u64());
  }
  SUBCASE("shuffle is a deterministic permutation") {
    std::vector<int> a(50), b(50);
    for (int i = 0; i < 50; ++i) a[i] = b[i] = i;
    soco::Rng r1(4), r2(4);
    r1.shuffle(a);
    r2.shuffle(b);
    CHECK(a == b);
    std::sort(a.begin(), a.end());
    for (int i = 0; i < 50; ++i) CHECK(a[i] == i);
  }
}

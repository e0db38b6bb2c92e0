/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairbot/errors.hpp"
#include "fairbot/matstat.hpp"
#include "fairbot/uniformity.hpp"

using namespace fairbot;

TEST_CASE("ks_statistic") {
  CHECK(ks_statistic(std::vector<double>{0.5}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ks_statistic(std::vector<double>{0.9, 0.1}) == doctest::Approx(0.4).epsilon(1e-15));
  constexpr std::size_t n = 1000;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = (i + 0.5) / n;
  CHECK(ks_statistic(grid) == doctest::Approx(0.5 / n).epsilon(1e-12));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}), EmptySample);
}

TEST_CASE("ks_test") {
  std::vector<double> grid(1000);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = (i + 0.5) / grid.size();
  CHECK(ks_test(grid).p_value > 0.999);

  const KsResult zeros = ks_test(std::vector<double>(1000, 0.0));
  CHECK(zeros.d_stat == 1.0);
  CHECK(zeros.p_value < 1e-12);
}

TEST_CASE("ks_test holds its nominal level on uniform samples") {
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    NormalGenerator gen(RngStream{kRngAlgorithm, 500 + seed, 0});
    std::vector<double> u(1000);
    for (auto & v : u) v = gen.uniform();
    if (ks_test(u).p_value < 0.05) ++rejected;
  }
  INFO("rejected " << rejected << " of 200");
  CHECK(rejected >= 4);
  CHECK(rejected <= 20);
}

TEST_CASE("histogram") {
  CHECK(histogram(std::vector<double>{0.0, 0.5, 1.0}, 2) == std::vector<std::size_t>{1, 2});
  CHECK(histogram(std::vector<double>{}, 4) == std::vector<std::size_t>(4, 0));
  CHECK_THROWS_AS(histogram(std::vector<double>{1.5}, 4), DomainError);
  CHECK_THROWS_AS(histogram(std::vector<double>{-0.1}, 4), DomainError);
  CHECK_THROWS_AS(histogram(std::vector<double>{0.5}, 0), DomainError);

  SUBCASE("bin counts of a uniform sample stay within binomial bounds") {
    constexpr std::size_t n = 100000;
    NormalGenerator gen(RngStream{kRngAlgorithm, 77, 0});
    std::vector<double> u(n);
    for (auto & v : u) v = gen.uniform();
    const auto counts = histogram(u, kDefaultBins);
    CHECK(std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == n);
    const double mean = static_cast<double>(n) / kDefaultBins;
    const double sd = std::sqrt(mean * (1.0 - 1.0 / kDefaultBins));
    for (auto c : counts) CHECK(std::abs(static_cast<double>(c) - mean) < 5.0 * sd);
  }
}

TEST_CASE("ks_statistic is permutation and reflection invariant") {
  NormalGenerator gen(RngStream{kRngAlgorithm, 78, 0});
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> u(50 + gen.index(200));
    for (auto & v : u) v = std::pow(gen.uniform(), 1.3);
    const double d = ks_statistic(u);
    std::vector<double> shuffled = u;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[gen.index(i + 1)]);
    CHECK(ks_statistic(shuffled) == d);
    std::vector<double> reflected(u.size());
    std::transform(u.begin(), u.end(), reflected.begin(), [](double x) { return 1.0 - x; });
    CHECK(std::abs(ks_statistic(reflected) - d) < 1e-12);
  }
}

TEST_CASE("make_series") {
  const BotSeries s = make_series(Variant::fair, {0.1, 0.9}, 4);
  CHECK(s.variant == Variant::fair);
  CHECK(s.d_stat == doctest::Approx(0.4));
  CHECK(s.counts == std::vector<std::size_t>{1, 0, 0, 1});
  CHECK(s.values.size() == 2);
}

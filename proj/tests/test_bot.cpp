/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fairbot/bot.hpp"
#include "fairbot/errors.hpp"
#include "fairbot/scenarios.hpp"
#include "fairbot/uniformity.hpp"
#include "oracles.hpp"

using namespace fairbot;

namespace {

EnsembleCase scalar_case() { return {Vector{2.0}, Matrix{{-1}, {0}, {1}}}; }

EnsembleCase draw_case(const GaussianLaw & law, std::size_t n, NormalGenerator & gen) {
  EnsembleCase c;
  c.obs = law.sample(gen);
  c.members = law.sample_rows(n, gen);
  return c;
}

}  // namespace

TEST_CASE("bot_theoretical") {
  const GaussianLaw std2(Vector{0, 0}, SymMatrix::identity(2));
  CHECK(bot_theoretical(std2, Vector{0, 0}).u == 1.0);
  CHECK(bot_theoretical(std2, Vector{std::sqrt(2.0 * std::log(2.0)), 0}).u ==
        doctest::Approx(0.5).epsilon(1e-13));
  CHECK(bot_theoretical(std2, Vector{0, 0}).variant == Variant::theoretical);
  CHECK_THROWS_AS(bot_theoretical(std2, Vector{0}), DimensionMismatch);

  SUBCASE("explicit inverse oracle") {
    const SymMatrix s = ar1_covariance(3, 1.0, 0.6);
    const GaussianLaw law(Vector(3, 0.0), s);
    NormalGenerator gen(RngStream{kRngAlgorithm, 8, 0});
    for (int i = 0; i < 50; ++i) {
      Vector x(3);
      for (auto & v : x) v = 2.0 * gen.normal();
      const double d2 = oracle::quadratic_form_inverse(s.matrix(), x, Vector(3, 0.0));
      const double expected = 1.0 - oracle::chi2_cdf_quadrature(3, d2);
      CHECK(std::abs(bot_theoretical(law, x).u - expected) < 1e-10);
    }
  }
}

TEST_CASE("bot_naive") {
  const EnsembleCase c = scalar_case();
  // D² = 4, u = 1 - (2Φ(2) - 1)
  const double expected = 2.0 * (1.0 - oracle::normal_cdf(2.0));
  CHECK(bot_naive(c).u == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(bot_naive(c).u - 0.045500) < 1e-6);
  CHECK(bot_naive(EnsembleCase{Vector{0.0}, Matrix{{-1}, {0}, {1}}}).u == 1.0);
  CHECK_THROWS_AS(bot_naive(EnsembleCase{Vector{0, 0}, Matrix{{1, 2}, {3, 5}}}), NotPositiveDefinite);
  CHECK_THROWS_AS(bot_naive(EnsembleCase{Vector{0, 0}, Matrix{{1, 2}}}), TooFewMembers);
}

TEST_CASE("bot_adjusted") {
  const EnsembleCase c = scalar_case();
  // D² = 1.5² / (5/3) = 1.35, u = 2(1 - Φ(√1.35))
  const double expected = 2.0 * (1.0 - oracle::normal_cdf(std::sqrt(1.35)));
  CHECK(bot_adjusted(c).u == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(bot_adjusted(c).u - 0.245) < 1e-3);
  CHECK_THROWS_AS(bot_adjusted(EnsembleCase{Vector{1, 1}, Matrix{{1, 1}, {1, 1}, {1, 1}}}), NotPositiveDefinite);
  // x0 = m leaves the augmented mean at x0, so the distance is zero
  CHECK(bot_adjusted(EnsembleCase{Vector{0.0}, Matrix{{-1}, {0}, {1}}}).u == 1.0);
  CHECK(bot_adjusted(EnsembleCase{Vector{0.0}, Matrix{{-1}, {1}, {3}}}).u < 1.0);
}

TEST_CASE("bot_fair") {
  const EnsembleCase c = scalar_case();
  CHECK(fair_scale(1, 3) == doctest::Approx(0.75));
  // argument 0.75 * 4 = 3, u = 1 - P(F_{1,2} <= 3)
  const double expected = 1.0 - oracle::student_t_abs_cdf(std::sqrt(3.0), 2);
  CHECK(bot_fair(c).u == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(bot_fair(c).u - 0.225403) < 1e-6);
  CHECK(bot_fair(EnsembleCase{Vector{0.0}, Matrix{{-1}, {0}, {1}}}).u == 1.0);
  CHECK_THROWS_AS(bot_fair(EnsembleCase{Vector{0, 0}, Matrix{{1, 2}, {3, 5}}}), TooFewMembers);
  // n = p + 1 is allowed
  CHECK_NOTHROW(bot_fair(EnsembleCase{Vector{0, 0}, Matrix{{1, 2}, {3, 5}, {0, 1}}}));
}

TEST_CASE("evaluate_sample_bots matches the individual transforms") {
  const GaussianLaw law(Vector(4, 0.0), ar1_covariance(4, 1.0, 0.6));
  NormalGenerator gen(RngStream{kRngAlgorithm, 21, 0});
  for (int i = 0; i < 200; ++i) {
    const EnsembleCase c = draw_case(law, 5 + gen.index(30), gen);
    const SampleBots s = evaluate_sample_bots(c);
    CHECK(s.naive == doctest::Approx(bot_naive(c).u).epsilon(1e-12));
    CHECK(std::abs(s.adjusted - bot_adjusted(c).u) < 1e-11);
    CHECK(s.fair == doctest::Approx(bot_fair(c).u).epsilon(1e-12));
  }
}

TEST_CASE("p = 1 fair transform equals the Student-t route") {
  const GaussianLaw law(Vector{0.3}, SymMatrix{{2.0}});
  NormalGenerator gen(RngStream{kRngAlgorithm, 22, 0});
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 2 + gen.index(40);
    const EnsembleCase c = draw_case(law, n, gen);
    const Moments m = ensemble_moments(c.members);
    // |t| = sqrt(n/(n+1)) |x0 - m| / s with n - 1 dof
    const double t = std::sqrt(n / (n + 1.0)) * std::abs(c.obs[0] - m.mean[0]) /
                     std::sqrt(m.covariance(0, 0));
    const double expected = 1.0 - oracle::student_t_abs_cdf(t, static_cast<int>(n - 1));
    CHECK(std::abs(bot_fair(c).u - expected) < 1e-10);
  }
}

TEST_CASE("sample transforms are affine equivariant and permutation invariant") {
  NormalGenerator gen(RngStream{kRngAlgorithm, 23, 0});
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t p = 1 + gen.index(5);
    const std::size_t n = p + 2 + gen.index(15);
    const GaussianLaw law(Vector(p, 0.0), ar1_covariance(p, 1.0, 0.5));
    const EnsembleCase c = draw_case(law, n, gen);
    const SampleBots base = evaluate_sample_bots(c);

    Matrix a(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) a(i, j) = 0.5 * gen.normal() + (i == j ? 2.0 : 0.0);
    Vector shift(p);
    gen.fill_normal(shift);
    auto map = [&](std::span<const double> x) {
      Vector y = multiply(a, x);
      for (std::size_t i = 0; i < p; ++i) y[i] += shift[i];
      return y;
    };
    EnsembleCase t;
    t.obs = map(c.obs);
    t.members = Matrix(n, p);
    for (std::size_t r = 0; r < n; ++r) {
      const Vector y = map(c.members.row(r));
      std::copy(y.begin(), y.end(), t.members.row(r).begin());
    }
    const SampleBots mapped = evaluate_sample_bots(t);
    CHECK(std::abs(mapped.naive - base.naive) < 1e-8);
    CHECK(std::abs(mapped.adjusted - base.adjusted) < 1e-8);
    CHECK(std::abs(mapped.fair - base.fair) < 1e-8);

    EnsembleCase perm = c;
    for (std::size_t r = n - 1; r > 0; --r) {
      const std::size_t j = gen.index(r + 1);
      for (std::size_t k = 0; k < p; ++k) std::swap(perm.members(r, k), perm.members(j, k));
    }
    const SampleBots permuted = evaluate_sample_bots(perm);
    CHECK(std::abs(permuted.naive - base.naive) < 1e-12);
    CHECK(std::abs(permuted.adjusted - base.adjusted) < 1e-12);
    CHECK(std::abs(permuted.fair - base.fair) < 1e-12);
  }
}

TEST_CASE("fair transform is exactly uniform for calibrated ensembles") {
  constexpr std::size_t kCases = 100000;
  for (auto [p, n] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 3}, {3, 10}, {10, 16}, {30, 32}}) {
    const GaussianLaw law(Vector(p, 0.0), ar1_covariance(p, 1.0, 0.6));
    const LawPair pair{law, law};
    const VariantValues v = simulate_replication(pair, n, kCases, 1000 + p, 0, 0);
    const KsResult ks = ks_test(v[static_cast<std::size_t>(Variant::fair)]);
    INFO("p = " << p << ", n = " << n << ", D = " << ks.d_stat);
    CHECK(ks.p_value > 0.001);
  }
}

TEST_CASE("naive and fair transforms converge as n grows") {
  constexpr std::size_t p = 3;
  const GaussianLaw law(Vector(p, 0.0), ar1_covariance(p, 1.0, 0.6));
  double prev = 1.0;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      NormalGenerator gen(RngStream{kRngAlgorithm, 31, derive_stream_index(n, i)});
      const EnsembleCase c = draw_case(law, n, gen);
      const SampleBots s = evaluate_sample_bots(c);
      worst = std::max(worst, std::abs(s.naive - s.fair));
    }
    INFO("n = " << n << ", max |naive - fair| = " << worst);
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 0.01);
}

/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fairbot/bot.hpp"

namespace fairbot {

inline constexpr std::size_t kDefaultBins = 20;

/// One-sample Kolmogorov-Smirnov distance to the standard uniform CDF.
double ks_statistic(std::span<const double> values);

struct KsResult {
  double d_stat;
  ProbabilityValue p_value;
};

KsResult ks_test(std::span<const double> values);

/// Equal-width counts on [0, 1]; u = 1 falls in the last bin.
std::vector<std::size_t> histogram(std::span<const double> values, std::size_t bins);

/// Transform values of one variant with their uniformity summary.
struct BotSeries {
  Variant variant;
  std::vector<double> values;
  double d_stat = 0.0;
  ProbabilityValue p_value = 1.0;
  std::vector<std::size_t> counts;
};

BotSeries make_series(Variant variant, std::vector<double> values, std::size_t bins);

}  // namespace fairbot

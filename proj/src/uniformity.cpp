/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "fairbot/uniformity.hpp"

#include <algorithm>
#include <sstream>

#include "fairbot/errors.hpp"

namespace fairbot {

double ks_statistic(std::span<const double> values) {
  if (values.empty()) throw EmptySample("KS statistic of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double u = sorted[i];
    d = std::max({d, (i + 1) / n - u, u - i / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> values) {
  const double d = ks_statistic(values);
  return {d, kolmogorov_pvalue(d, static_cast<long long>(values.size()))};
}

std::vector<std::size_t> histogram(std::span<const double> values, std::size_t bins) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  std::vector<std::size_t> counts(bins, 0);
  for (double u : values) {
    if (!(u >= 0.0 && u <= 1.0)) {
      std::ostringstream os;
      os << "histogram value " << u << " outside [0, 1]";
      throw DomainError(os.str());
    }
    const auto j = std::min(static_cast<std::size_t>(u * static_cast<double>(bins)), bins - 1);
    ++counts[j];
  }
  return counts;
}

BotSeries make_series(Variant variant, std::vector<double> values, std::size_t bins) {
  BotSeries s{variant, std::move(values), 0.0, 1.0, {}};
  const KsResult ks = ks_test(s.values);
  s.d_stat = ks.d_stat;
  s.p_value = ks.p_value;
  s.counts = histogram(s.values, bins);
  return s;
}

}  // namespace fairbot

/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "fairbot/bot.hpp"

#include <sstream>

#include "fairbot/errors.hpp"

namespace fairbot {

namespace {

void check_case(const EnsembleCase & c) {
  if (c.dim() < 1) throw DimensionMismatch("observation is empty");
  if (c.members.cols() != c.dim()) {
    std::ostringstream os;
    os << "members have dimension " << c.members.cols() << ", observation " << c.dim();
    throw DimensionMismatch(os.str());
  }
}

void require_fair_size(std::size_t p, std::size_t n) {
  if (n <= p) {
    std::ostringstream os;
    os << "fair transform needs n > p (n = " << n << ", p = " << p << ")";
    throw TooFewMembers(os.str());
  }
}

// D² = 0 maps to u = 1 exactly through the survival functions.
double chi2_transform(std::size_t p, double d2) { return chi2_sf(static_cast<int>(p), d2); }

double fair_transform(std::size_t p, std::size_t n, double d2) {
  return f_sf(static_cast<int>(p), static_cast<int>(n - p), fair_scale(p, n) * d2);
}

}  // namespace

GaussianLaw::GaussianLaw(Vector mean, SymMatrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)), chol_(cholesky(covariance_)) {
  if (mean_.size() != covariance_.dim()) throw DimensionMismatch("mean and covariance");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::theoretical: return "theoretical";
    case Variant::naive: return "naive";
    case Variant::adjusted: return "adjusted";
    case Variant::fair: return "fair";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : kAllVariants)
    if (to_string(v) == name) return v;
  return std::nullopt;
}

double fair_scale(std::size_t p, std::size_t n) {
  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  return nd * (nd - pd) / (pd * (nd * nd - 1.0));
}

BotValue bot_theoretical(const GaussianLaw & law, std::span<const double> obs) {
  const double d2 = mahalanobis_sq(obs, law.mean(), law.chol());
  return {Variant::theoretical, chi2_transform(law.dim(), d2)};
}

BotValue bot_naive(const EnsembleCase & c) {
  check_case(c);
  const Moments m = ensemble_moments(c.members);
  const double d2 = mahalanobis_sq(c.obs, m.mean, cholesky(m.covariance));
  return {Variant::naive, chi2_transform(c.dim(), d2)};
}

BotValue bot_adjusted(const EnsembleCase & c) {
  check_case(c);
  const Moments m = augmented_moments(c.members, c.obs);
  const double d2 = mahalanobis_sq(c.obs, m.mean, cholesky(m.covariance));
  return {Variant::adjusted, chi2_transform(c.dim(), d2)};
}

BotValue bot_fair(const EnsembleCase & c) {
  check_case(c);
  require_fair_size(c.dim(), c.size());
  const Moments m = ensemble_moments(c.members);
  const double d2 = mahalanobis_sq(c.obs, m.mean, cholesky(m.covariance));
  return {Variant::fair, fair_transform(c.dim(), c.size(), d2)};
}

SampleBots evaluate_sample_bots(const EnsembleCase & c) {
  check_case(c);
  const std::size_t p = c.dim();
  const std::size_t n = c.size();
  require_fair_size(p, n);
  const Moments ens = ensemble_moments(c.members);
  const double d2 = mahalanobis_sq(c.obs, ens.mean, cholesky(ens.covariance));
  const Moments aug = augment_moments(ens, n, c.obs);
  const double d2_aug = mahalanobis_sq(c.obs, aug.mean, cholesky(aug.covariance));
  return {chi2_transform(p, d2), chi2_transform(p, d2_aug), fair_transform(p, n, d2)};
}

}  // namespace fairbot

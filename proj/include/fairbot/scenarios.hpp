/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fairbot/bot.hpp"
#include "fairbot/uniformity.hpp"

namespace fairbot {

enum class ScenarioKind { calibrated, type1, type2, mixed, alt_variance, alt_correlation, bias };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

/// A truth/forecast recipe. Only the fields relevant to `kind` are consulted:
///   type1           AR(1) forecast with (sigma_f_sq, rho0)
///   type2           AR(1) forecast with (sigma0_sq, rho_f)
///   mixed           AR(1) forecast with (sigma_f_sq, rho_f)
///   alt_variance    alternating errors with (sigma_delta_sq, 0)
///   alt_correlation alternating errors with (0, rho_delta)
///   bias            truth covariance, mean on the bias_alpha ellipsoid
struct ScenarioConfig {
  std::size_t p = 3;
  std::size_t n = 50;
  double sigma0_sq = 1.0;
  double rho0 = 0.6;
  ScenarioKind kind = ScenarioKind::calibrated;
  double sigma_f_sq = 1.0;
  double rho_f = 0.6;
  double sigma_delta_sq = 0.0;
  double rho_delta = 0.0;
  int bias_axis = 1;
  int bias_sign = 1;
  double bias_alpha = 0.15;

  bool operator==(const ScenarioConfig &) const = default;
};

/// Throws DomainError (or TooFewMembers for n <= p) on an invalid config.
void validate(const ScenarioConfig & config);

/// Fixed scenario names: calibrated, type1-under, type1-over, type2-under,
/// type2-over, mixed-under, mixed-over, alt-variance, alt-correlation,
/// bias-a1p, bias-a1m, bias-a2p, bias-a2m.
const std::vector<std::string_view> & scenario_names();
/// Named scenario with the given dimension and ensemble size. DomainError if unknown.
ScenarioConfig named_scenario(std::string_view name, std::size_t p, std::size_t n);

/// Entries sigma_sq * rho^|k-l|.
SymMatrix ar1_covariance(std::size_t p, double sigma_sq, double rho);

/// Entries sqrt(s0 + (-1)^k sd) sqrt(s0 + (-1)^l sd) (r0 + (-1)^|k-l| rd)^|k-l|
/// with 1-based k, l. Throws NotPositiveDefinite when the result is not PD.
SymMatrix alternating_covariance(std::size_t p, double sigma0_sq, double rho0,
                                 double sigma_delta_sq, double rho_delta);

/// sign * sqrt(Q_p(alpha)) * sqrt(lambda_axis) * e_axis from the descending
/// spectrum of truth_cov; lies on the alpha-probability ellipsoid of N(0, truth_cov).
Vector bias_vector(const SymMatrix & truth_cov, int axis, int sign, double alpha);

struct LawPair {
  GaussianLaw truth;
  GaussianLaw forecast;
};

LawPair build_pair(const ScenarioConfig & config);

struct ExperimentReport {
  ScenarioConfig config;
  std::size_t n_cases = 0;
  std::uint64_t seed = 0;
  std::vector<BotSeries> series;  // theoretical, naive, adjusted, fair

  const BotSeries & get(Variant v) const;
};

/// Per-variant transform values of one replication, indexed by Variant.
using VariantValues = std::array<std::vector<double>, 4>;

/// Case c of replication r draws from stream derive_stream_index(r, c): the
/// observation from the truth law, then n members from the forecast law.
VariantValues simulate_replication(const LawPair & pair, std::size_t n, std::size_t n_cases,
                                   std::uint64_t seed, std::uint64_t replication,
                                   unsigned jobs = 1);

ExperimentReport run_experiment(const ScenarioConfig & config, std::size_t n_cases,
                                std::uint64_t seed, std::size_t bins = kDefaultBins,
                                unsigned jobs = 1);

/// Fraction of replications whose KS p-value falls below `level`, by Variant.
struct RejectionRates {
  std::array<double, 4> rate{};
  double operator[](Variant v) const { return rate[static_cast<std::size_t>(v)]; }
};

RejectionRates rejection_rate(const ScenarioConfig & config, std::size_t n_cases,
                              std::size_t n_reps, double level, std::uint64_t seed,
                              unsigned jobs = 1);

enum class SweepParameter { sigma_f_sq, rho_f };

std::string_view to_string(SweepParameter s);
std::optional<SweepParameter> parse_sweep(std::string_view name);

/// Eight evenly spaced points over [0.85, 1.2] or [0.4, 0.75].
std::vector<double> default_grid(SweepParameter s);

/// Copy of base with the swept parameter set; the kind becomes type1/type2
/// (or mixed when the base already misspecifies the other parameter).
ScenarioConfig apply_sweep(const ScenarioConfig & base, SweepParameter s, double value);

struct PowerRow {
  double value;
  RejectionRates rates;
};

/// Every grid point reuses the same seed, so the points share random numbers.
std::vector<PowerRow> power_curve(const ScenarioConfig & base, SweepParameter s,
                                  const std::vector<double> & grid, std::size_t n_cases,
                                  std::size_t n_reps, double level, std::uint64_t seed,
                                  unsigned jobs = 1);

}  // namespace fairbot

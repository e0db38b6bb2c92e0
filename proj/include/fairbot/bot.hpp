/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "fairbot/matstat.hpp"
#include "fairbot/specialfn.hpp"

namespace fairbot {

/// Multivariate normal law with its Cholesky factor cached at construction.
class GaussianLaw {
 public:
  GaussianLaw(Vector mean, SymMatrix covariance);

  std::size_t dim() const { return mean_.size(); }
  const Vector & mean() const { return mean_; }
  const SymMatrix & covariance() const { return covariance_; }
  const CholeskyFactor & chol() const { return chol_; }

  Vector sample(NormalGenerator & gen) const { return mvn_sample(mean_, chol_, gen); }
  Matrix sample_rows(std::size_t n, NormalGenerator & gen) const {
    return mvn_sample_rows(mean_, chol_, n, gen);
  }

 private:
  Vector mean_;
  SymMatrix covariance_;
  CholeskyFactor chol_;
};

/// One verification instance: an observation and n ensemble members (rows).
struct EnsembleCase {
  Vector obs;
  Matrix members;

  std::size_t dim() const { return obs.size(); }
  std::size_t size() const { return members.rows(); }
};

enum class Variant { theoretical, naive, adjusted, fair };

inline constexpr std::array<Variant, 4> kAllVariants = {Variant::theoretical, Variant::naive,
                                                        Variant::adjusted, Variant::fair};
inline constexpr std::array<Variant, 3> kSampleVariants = {Variant::naive, Variant::adjusted,
                                                           Variant::fair};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct BotValue {
  Variant variant;
  ProbabilityValue u;
};

/// u = 1 - X²_p[(obs - μ)ᵀ Σ⁻¹ (obs - μ)].
BotValue bot_theoretical(const GaussianLaw & law, std::span<const double> obs);

/// Plug-in transform with the ensemble mean and covariance.
BotValue bot_naive(const EnsembleCase & c);

/// Plug-in transform with moments that include the observation.
BotValue bot_adjusted(const EnsembleCase & c);

/// Finite-ensemble exact transform: u = 1 - F_{p,n-p}[n(n-p)/(p(n²-1)) D²].
/// Requires n > p.
BotValue bot_fair(const EnsembleCase & c);

/// Scale factor that maps D² onto an F_{p,n-p} variate.
double fair_scale(std::size_t p, std::size_t n);

/// The three sample transforms of one case, sharing one set of moments.
struct SampleBots {
  double naive;
  double adjusted;
  double fair;
};

/// Equivalent to calling bot_naive, bot_adjusted and bot_fair; requires n > p.
SampleBots evaluate_sample_bots(const EnsembleCase & c);

}  // namespace fairbot

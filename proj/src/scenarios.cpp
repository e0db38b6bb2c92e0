/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "fairbot/scenarios.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "fairbot/errors.hpp"
#include "fairbot/parallel.hpp"

namespace fairbot {

namespace {

constexpr std::size_t idx(Variant v) { return static_cast<std::size_t>(v); }

void require(bool ok, const std::string & msg) {
  if (!ok) throw DomainError(msg);
}

bool is_correlation(double r) { return r > -1.0 && r < 1.0; }

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::calibrated: return "calibrated";
    case ScenarioKind::type1: return "type1";
    case ScenarioKind::type2: return "type2";
    case ScenarioKind::mixed: return "mixed";
    case ScenarioKind::alt_variance: return "alt_variance";
    case ScenarioKind::alt_correlation: return "alt_correlation";
    case ScenarioKind::bias: return "bias";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  for (auto k : {ScenarioKind::calibrated, ScenarioKind::type1, ScenarioKind::type2,
                 ScenarioKind::mixed, ScenarioKind::alt_variance, ScenarioKind::alt_correlation,
                 ScenarioKind::bias})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

void validate(const ScenarioConfig & c) {
  require(c.p >= 1, "dimension p must be at least 1");
  if (c.n <= c.p) {
    std::ostringstream os;
    os << "fair transform requires n > p (n = " << c.n << ", p = " << c.p << ")";
    throw TooFewMembers(os.str());
  }
  require(c.sigma0_sq > 0.0, "sigma0_sq must be positive");
  require(is_correlation(c.rho0), "rho0 must lie in (-1, 1)");
  switch (c.kind) {
    case ScenarioKind::calibrated: break;
    case ScenarioKind::type1:
      require(c.sigma_f_sq > 0.0, "sigma_f_sq must be positive");
      break;
    case ScenarioKind::type2:
      require(is_correlation(c.rho_f), "rho_f must lie in (-1, 1)");
      break;
    case ScenarioKind::mixed:
      require(c.sigma_f_sq > 0.0, "sigma_f_sq must be positive");
      require(is_correlation(c.rho_f), "rho_f must lie in (-1, 1)");
      break;
    case ScenarioKind::alt_variance:
      require(c.sigma_delta_sq >= 0.0, "sigma_delta_sq must be nonnegative");
      require(c.sigma_delta_sq < c.sigma0_sq, "sigma_delta_sq must be below sigma0_sq");
      break;
    case ScenarioKind::alt_correlation:
      require(is_correlation(c.rho0 + c.rho_delta) && is_correlation(c.rho0 - c.rho_delta),
              "rho0 +/- rho_delta must lie in (-1, 1)");
      break;
    case ScenarioKind::bias:
      require(c.bias_axis == 1 || c.bias_axis == 2, "bias_axis must be 1 or 2");
      require(static_cast<std::size_t>(c.bias_axis) <= c.p, "bias_axis exceeds dimension");
      require(c.bias_sign == 1 || c.bias_sign == -1, "bias_sign must be +1 or -1");
      require(c.bias_alpha > 0.0 && c.bias_alpha < 1.0, "bias_alpha must lie in (0, 1)");
      break;
  }
}

const std::vector<std::string_view> & scenario_names() {
  static const std::vector<std::string_view> names = {
      "calibrated",  "type1-under", "type1-over",   "type2-under",     "type2-over",
      "mixed-under", "mixed-over",  "alt-variance", "alt-correlation", "bias-a1p",
      "bias-a1m",    "bias-a2p",    "bias-a2m"};
  return names;
}

ScenarioConfig named_scenario(std::string_view name, std::size_t p, std::size_t n) {
  ScenarioConfig c;
  c.p = p;
  c.n = n;
  if (name == "calibrated") {
  } else if (name == "type1-under") {
    c.kind = ScenarioKind::type1;
    c.sigma_f_sq = 0.65;
  } else if (name == "type1-over") {
    c.kind = ScenarioKind::type1;
    c.sigma_f_sq = 1.35;
  } else if (name == "type2-under") {
    c.kind = ScenarioKind::type2;
    c.rho_f = 0.45;
  } else if (name == "type2-over") {
    c.kind = ScenarioKind::type2;
    c.rho_f = 0.75;
  } else if (name == "mixed-under") {
    c.kind = ScenarioKind::mixed;
    c.sigma_f_sq = 0.65;
    c.rho_f = 0.45;
  } else if (name == "mixed-over") {
    c.kind = ScenarioKind::mixed;
    c.sigma_f_sq = 1.35;
    c.rho_f = 0.75;
  } else if (name == "alt-variance") {
    c.kind = ScenarioKind::alt_variance;
    c.sigma_delta_sq = 0.35;
  } else if (name == "alt-correlation") {
    c.kind = ScenarioKind::alt_correlation;
    c.rho_delta = 0.15;
  } else if (name.size() == 8 && name.substr(0, 6) == "bias-a" &&
             (name[6] == '1' || name[6] == '2') && (name[7] == 'p' || name[7] == 'm')) {
    c.kind = ScenarioKind::bias;
    c.bias_axis = name[6] - '0';
    c.bias_sign = name[7] == 'p' ? 1 : -1;
  } else {
    throw DomainError("unknown scenario '" + std::string(name) + "'");
  }
  return c;
}

// ---------------------------------------------------------------------------

SymMatrix ar1_covariance(std::size_t p, double sigma_sq, double rho) {
  require(p >= 1, "dimension must be at least 1");
  require(sigma_sq > 0.0, "variance must be positive");
  require(is_correlation(rho), "correlation must lie in (-1, 1)");
  SymMatrix s(p);
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t l = 0; l <= k; ++l) s.set(k, l, sigma_sq * std::pow(rho, k - l));
  return s;
}

SymMatrix alternating_covariance(std::size_t p, double sigma0_sq, double rho0,
                                 double sigma_delta_sq, double rho_delta) {
  require(p >= 1, "dimension must be at least 1");
  require(sigma0_sq - sigma_delta_sq > 0.0, "sigma0_sq - sigma_delta_sq must be positive");
  require(sigma0_sq + sigma_delta_sq > 0.0, "sigma0_sq + sigma_delta_sq must be positive");
  auto alt = [](std::size_t k) { return k % 2 == 0 ? 1.0 : -1.0; };
  SymMatrix s(p);
  // k, l below are 0-based; the 1-based sign (-1)^k becomes -alt(k).
  for (std::size_t k = 0; k < p; ++k) {
    const double sk = std::sqrt(sigma0_sq - alt(k) * sigma_delta_sq);
    for (std::size_t l = 0; l <= k; ++l) {
      const double sl = std::sqrt(sigma0_sq - alt(l) * sigma_delta_sq);
      const std::size_t lag = k - l;
      s.set(k, l, sk * sl * std::pow(rho0 + alt(lag) * rho_delta, static_cast<double>(lag)));
    }
  }
  cholesky(s);
  return s;
}

Vector bias_vector(const SymMatrix & truth_cov, int axis, int sign, double alpha) {
  require(axis >= 1 && static_cast<std::size_t>(axis) <= truth_cov.dim(),
          "bias axis out of range");
  require(sign == 1 || sign == -1, "bias sign must be +1 or -1");
  require(alpha > 0.0 && alpha < 1.0, "bias alpha must lie in (0, 1)");
  const SpectralDecomposition eig = sym_eigen(truth_cov);
  const std::size_t col = static_cast<std::size_t>(axis - 1);
  const double lambda = eig.eigenvalues[col];
  require(lambda > 0.0, "truth covariance has a nonpositive eigenvalue");
  const double radius = sign * std::sqrt(chi2_quantile(static_cast<int>(truth_cov.dim()), alpha)) *
                        std::sqrt(lambda);
  Vector mu(truth_cov.dim());
  for (std::size_t k = 0; k < mu.size(); ++k) mu[k] = radius * eig.eigenvectors(k, col);
  return mu;
}

LawPair build_pair(const ScenarioConfig & c) {
  validate(c);
  const SymMatrix truth_cov = ar1_covariance(c.p, c.sigma0_sq, c.rho0);
  const Vector zero(c.p, 0.0);
  GaussianLaw truth(zero, truth_cov);
  switch (c.kind) {
    case ScenarioKind::calibrated:
      return {truth, truth};
    case ScenarioKind::type1:
      return {truth, GaussianLaw(zero, ar1_covariance(c.p, c.sigma_f_sq, c.rho0))};
    case ScenarioKind::type2:
      return {truth, GaussianLaw(zero, ar1_covariance(c.p, c.sigma0_sq, c.rho_f))};
    case ScenarioKind::mixed:
      return {truth, GaussianLaw(zero, ar1_covariance(c.p, c.sigma_f_sq, c.rho_f))};
    case ScenarioKind::alt_variance:
      return {truth, GaussianLaw(zero, alternating_covariance(c.p, c.sigma0_sq, c.rho0,
                                                              c.sigma_delta_sq, 0.0))};
    case ScenarioKind::alt_correlation:
      return {truth, GaussianLaw(zero, alternating_covariance(c.p, c.sigma0_sq, c.rho0, 0.0,
                                                              c.rho_delta))};
    case ScenarioKind::bias:
      return {truth, GaussianLaw(bias_vector(truth_cov, c.bias_axis, c.bias_sign, c.bias_alpha),
                                 truth_cov)};
  }
  throw DomainError("unhandled scenario kind");
}

// ---------------------------------------------------------------------------

const BotSeries & ExperimentReport::get(Variant v) const {
  for (const auto & s : series)
    if (s.variant == v) return s;
  throw DomainError("report has no series '" + std::string(to_string(v)) + "'");
}

VariantValues simulate_replication(const LawPair & pair, std::size_t n, std::size_t n_cases,
                                   std::uint64_t seed, std::uint64_t replication,
                                   unsigned jobs) {
  if (n_cases >= kStreamStride) throw DomainError("too many cases for one replication");
  VariantValues out;
  for (auto & v : out) v.resize(n_cases);

  parallel_for(n_cases, jobs, [&](std::size_t c) {
    NormalGenerator gen(RngStream{kRngAlgorithm, seed, derive_stream_index(replication, c)});
    EnsembleCase ec;
    ec.obs = pair.truth.sample(gen);
    ec.members = pair.forecast.sample_rows(n, gen);
    try {
      out[idx(Variant::theoretical)][c] = bot_theoretical(pair.forecast, ec.obs).u;
      const SampleBots s = evaluate_sample_bots(ec);
      out[idx(Variant::naive)][c] = s.naive;
      out[idx(Variant::adjusted)][c] = s.adjusted;
      out[idx(Variant::fair)][c] = s.fair;
    } catch (const NotPositiveDefinite & e) {
      std::ostringstream os;
      os << "replication " << replication << ", case " << c << " (seed " << seed
         << "): " << e.what();
      throw NotPositiveDefinite(os.str());
    }
  });
  return out;
}

ExperimentReport run_experiment(const ScenarioConfig & config, std::size_t n_cases,
                                std::uint64_t seed, std::size_t bins, unsigned jobs) {
  if (n_cases < 1) throw DomainError("n_cases must be at least 1");
  if (bins < 1) throw DomainError("bins must be at least 1");
  const LawPair pair = build_pair(config);
  VariantValues values = simulate_replication(pair, config.n, n_cases, seed, 0, jobs);

  ExperimentReport report{config, n_cases, seed, {}};
  for (Variant v : kAllVariants)
    report.series.push_back(make_series(v, std::move(values[idx(v)]), bins));
  return report;
}

RejectionRates rejection_rate(const ScenarioConfig & config, std::size_t n_cases,
                              std::size_t n_reps, double level, std::uint64_t seed,
                              unsigned jobs) {
  if (n_reps < 1) throw DomainError("n_reps must be at least 1");
  if (n_cases < 1) throw DomainError("n_cases must be at least 1");
  require(level > 0.0 && level < 1.0, "level must lie in (0, 1)");
  const LawPair pair = build_pair(config);

  std::vector<std::array<bool, 4>> rejected(n_reps);
  parallel_for(n_reps, jobs, [&](std::size_t r) {
    const VariantValues values = simulate_replication(pair, config.n, n_cases, seed, r, 1);
    for (Variant v : kAllVariants) rejected[r][idx(v)] = ks_test(values[idx(v)]).p_value < level;
  });

  RejectionRates rates;
  for (Variant v : kAllVariants) {
    std::size_t count = 0;
    for (const auto & r : rejected) count += r[idx(v)] ? 1 : 0;
    rates.rate[idx(v)] = static_cast<double>(count) / static_cast<double>(n_reps);
  }
  return rates;
}

std::string_view to_string(SweepParameter s) {
  return s == SweepParameter::sigma_f_sq ? "sigma_f_sq" : "rho_f";
}

std::optional<SweepParameter> parse_sweep(std::string_view name) {
  if (name == "sigma_f_sq") return SweepParameter::sigma_f_sq;
  if (name == "rho_f") return SweepParameter::rho_f;
  return std::nullopt;
}

std::vector<double> default_grid(SweepParameter s) {
  const double lo = s == SweepParameter::sigma_f_sq ? 0.85 : 0.4;
  const double hi = s == SweepParameter::sigma_f_sq ? 1.2 : 0.75;
  constexpr int points = 8;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    // round to 1e-12 so grid points print as the decimals they stand for
    const double v = lo + (hi - lo) * i / (points - 1);
    grid[i] = std::round(v * 1e12) / 1e12;
  }
  return grid;
}

ScenarioConfig apply_sweep(const ScenarioConfig & base, SweepParameter s, double value) {
  ScenarioConfig c = base;
  if (s == SweepParameter::sigma_f_sq) {
    c.sigma_f_sq = value;
    const bool keeps_rho = base.kind == ScenarioKind::type2 || base.kind == ScenarioKind::mixed;
    c.kind = keeps_rho ? ScenarioKind::mixed : ScenarioKind::type1;
  } else {
    c.rho_f = value;
    const bool keeps_sigma = base.kind == ScenarioKind::type1 || base.kind == ScenarioKind::mixed;
    c.kind = keeps_sigma ? ScenarioKind::mixed : ScenarioKind::type2;
  }
  return c;
}

std::vector<PowerRow> power_curve(const ScenarioConfig & base, SweepParameter s,
                                  const std::vector<double> & grid, std::size_t n_cases,
                                  std::size_t n_reps, double level, std::uint64_t seed,
                                  unsigned jobs) {
  if (grid.empty()) throw DomainError("power curve grid is empty");
  std::vector<PowerRow> rows;
  rows.reserve(grid.size());
  for (double value : grid) {
    const ScenarioConfig c = apply_sweep(base, s, value);
    rows.push_back({value, rejection_rate(c, n_cases, n_reps, level, seed, jobs)});
  }
  return rows;
}

}  // namespace fairbot

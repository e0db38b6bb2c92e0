/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairbot/bot.hpp"
#include "fairbot/uniformity.hpp"

namespace fairbot {

struct VerificationRecord {
  std::string id;
  std::optional<Vector> obs;
  Matrix members;  // M x p

  bool operator==(const VerificationRecord &) const = default;
};

/// Homogeneous collection of cases; every record shares p and M.
struct VerificationDataset {
  std::size_t p = 0;
  std::size_t m = 0;
  std::vector<VerificationRecord> cases;

  bool has_all_obs() const;
  bool operator==(const VerificationDataset &) const = default;
};

enum class DatasetFormat { jsonl, csv };
std::optional<DatasetFormat> parse_format(std::string_view name);

/// JSON lines, one case per line:
///   {"case": "id", "obs": [..] | null, "members": [[..], ..]}
/// Lines whose object carries a "manifest" key are skipped.
///
/// CSV long format, rows grouped by case:
///   case,role,x1,...,xp    with role obs or m1..mM
/// A leading header row is optional.
///
/// Errors: ParseError (with line number), SchemaError, NonFiniteValue.
VerificationDataset read_dataset(std::istream & in, DatasetFormat format);
VerificationDataset load_dataset(const std::string & path, DatasetFormat format);

/// JSONL with shortest round-trip formatting of every double.
void write_dataset_jsonl(std::ostream & out, const VerificationDataset & data);
void write_dataset_csv(std::ostream & out, const VerificationDataset & data);

/// Case c draws M members from member_law, then the observation from obs_law,
/// on stream derive_stream_index(0, c).
VerificationDataset synth_dataset(const GaussianLaw & member_law, const GaussianLaw & obs_law,
                                  std::size_t n_cases, std::size_t m, std::uint64_t seed);
VerificationDataset synth_dataset(const GaussianLaw & law, std::size_t n_cases, std::size_t m,
                                  std::uint64_t seed);

enum class VerifyMode { perfect_reliability, against_observation };
enum class MemberSelection { first_n, random };

std::string_view to_string(VerifyMode m);
std::optional<VerifyMode> parse_mode(std::string_view name);
std::string_view to_string(MemberSelection s);
std::optional<MemberSelection> parse_selection(std::string_view name);

struct VerifyPlan {
  VerifyMode mode = VerifyMode::perfect_reliability;
  std::size_t n_sub = 16;
  MemberSelection member_selection = MemberSelection::first_n;
  /// Pseudo-observation member in perfect-reliability mode; nullopt draws one per case.
  std::optional<std::size_t> holdout_index = 0;
  std::uint64_t seed = 0;
};

/// Throws SubsampleTooLarge, TooFewMembers, MissingObservation or DomainError.
void validate(const VerifyPlan & plan, const VerificationDataset & data);

/// The ensemble evaluated for one record: pseudo-observation plus subsample.
EnsembleCase select_case(const VerificationRecord & record, const VerifyPlan & plan,
                         std::size_t case_index);

struct VerificationReport {
  VerifyPlan plan;
  std::size_t p = 0;
  std::size_t m = 0;
  std::size_t n_cases = 0;
  std::vector<BotSeries> series;  // naive, adjusted, fair

  const BotSeries & get(Variant v) const;
};

VerificationReport run_verification(const VerificationDataset & data, const VerifyPlan & plan,
                                    std::size_t bins = kDefaultBins, unsigned jobs = 1);

/// Per coordinate: mean over cases of (ensemble mean - obs), divided by the
/// mean over cases of the ensemble standard deviation (divisor M - 1).
std::vector<double> bias_diagnostics(const VerificationDataset & data);

}  // namespace fairbot

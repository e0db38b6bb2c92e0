/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairbot/scenarios.hpp"
#include "fairbot/verifydata.hpp"

namespace fairbot {

inline constexpr const char * kToolVersion = "1.0.0";

/// Provenance block embedded in every output file.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string subcommand;
  std::vector<std::string> argv;  // arguments after the program name
  nlohmann::json config;
  std::uint64_t root_seed = 0;
  std::string timestamp;  // UTC, ISO 8601
};

std::string utc_timestamp();

nlohmann::json to_json(const RunManifest & m);
RunManifest manifest_from_json(const nlohmann::json & j);

nlohmann::json to_json(const ScenarioConfig & c);
/// Missing keys keep their defaults; unknown keys raise SchemaError. A
/// "scenario" key selects a named scenario before the other keys apply.
ScenarioConfig scenario_from_json(const nlohmann::json & j);

nlohmann::json to_json(const VerifyPlan & plan);

/// {variant: {d, p_value, histogram, values?}}
nlohmann::json to_json(const std::vector<BotSeries> & series, bool emit_values);

nlohmann::json to_json(const ExperimentReport & r, const RunManifest & m, bool emit_values);
nlohmann::json to_json(const VerificationReport & r, const RunManifest & m, bool emit_values,
                       const std::vector<double> * bias);

/// bin_lower,bin_upper,count rows for one series.
void write_histogram_csv(std::ostream & out, const BotSeries & s);

/// Static SVG with one histogram panel per series.
void write_histogram_svg(std::ostream & out, const std::vector<BotSeries> & series,
                         const std::string & title);

/// p-value text with the display floor "< 5e-05" below 5e-5.
std::string format_p_value(double p);

}  // namespace fairbot

/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "fairbot/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fairbot/errors.hpp"

namespace fairbot {

using nlohmann::json;

namespace {

std::string xml_escape(const std::string & text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json to_json(const RunManifest & m) {
  return {{"tool_version", m.tool_version}, {"subcommand", m.subcommand}, {"argv", m.argv},
          {"config", m.config},             {"root_seed", m.root_seed},   {"timestamp", m.timestamp}};
}

RunManifest manifest_from_json(const json & j) {
  try {
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.config = j.value("config", json::object());
    m.root_seed = j.at("root_seed").get<std::uint64_t>();
    m.timestamp = j.value("timestamp", std::string());
    return m;
  } catch (const json::exception & e) {
    throw SchemaError(std::string("manifest: ") + e.what());
  }
}

json to_json(const ScenarioConfig & c) {
  return {{"p", c.p},
          {"n", c.n},
          {"kind", to_string(c.kind)},
          {"sigma0_sq", c.sigma0_sq},
          {"rho0", c.rho0},
          {"sigma_f_sq", c.sigma_f_sq},
          {"rho_f", c.rho_f},
          {"sigma_delta_sq", c.sigma_delta_sq},
          {"rho_delta", c.rho_delta},
          {"bias_axis", c.bias_axis},
          {"bias_sign", c.bias_sign},
          {"bias_alpha", c.bias_alpha}};
}

ScenarioConfig scenario_from_json(const json & j) {
  if (!j.is_object()) throw SchemaError("scenario config must be a JSON object");
  try {
    ScenarioConfig c;
    if (j.contains("scenario"))
      c = named_scenario(j["scenario"].get<std::string>(), j.value("p", c.p), j.value("n", c.n));
    for (const auto & [key, value] : j.items()) {
      if (key == "scenario") continue;
      else if (key == "p") c.p = value.get<std::size_t>();
      else if (key == "n") c.n = value.get<std::size_t>();
      else if (key == "kind") {
        const auto k = parse_scenario_kind(value.get<std::string>());
        if (!k) throw SchemaError("unknown kind '" + value.get<std::string>() + "'");
        c.kind = *k;
      }
      else if (key == "sigma0_sq") c.sigma0_sq = value.get<double>();
      else if (key == "rho0") c.rho0 = value.get<double>();
      else if (key == "sigma_f_sq") c.sigma_f_sq = value.get<double>();
      else if (key == "rho_f") c.rho_f = value.get<double>();
      else if (key == "sigma_delta_sq") c.sigma_delta_sq = value.get<double>();
      else if (key == "rho_delta") c.rho_delta = value.get<double>();
      else if (key == "bias_axis") c.bias_axis = value.get<int>();
      else if (key == "bias_sign") c.bias_sign = value.get<int>();
      else if (key == "bias_alpha") c.bias_alpha = value.get<double>();
      else throw SchemaError("unknown scenario key '" + key + "'");
    }
    return c;
  } catch (const json::exception & e) {
    throw SchemaError(std::string("scenario config: ") + e.what());
  }
}

json to_json(const VerifyPlan & plan) {
  return {{"mode", to_string(plan.mode)},
          {"n_sub", plan.n_sub},
          {"member_selection", to_string(plan.member_selection)},
          {"holdout", plan.holdout_index ? json(*plan.holdout_index) : json("random")},
          {"seed", plan.seed}};
}

json to_json(const std::vector<BotSeries> & series, bool emit_values) {
  json out = json::object();
  for (const auto & s : series) {
    json js = {{"d", s.d_stat}, {"p_value", s.p_value}, {"histogram", s.counts}};
    if (emit_values) js["values"] = s.values;
    out[std::string(to_string(s.variant))] = std::move(js);
  }
  return out;
}

json to_json(const ExperimentReport & r, const RunManifest & m, bool emit_values) {
  return {{"manifest", to_json(m)},
          {"config", to_json(r.config)},
          {"n_cases", r.n_cases},
          {"seed", r.seed},
          {"rng", kRngAlgorithm},
          {"series", to_json(r.series, emit_values)}};
}

json to_json(const VerificationReport & r, const RunManifest & m, bool emit_values,
             const std::vector<double> * bias) {
  json j = {{"manifest", to_json(m)},
            {"config", to_json(r.plan)},
            {"dataset", {{"p", r.p}, {"members", r.m}, {"n_cases", r.n_cases}}},
            {"series", to_json(r.series, emit_values)}};
  j["bias_diagnostics"] = bias ? json(*bias) : json(nullptr);
  return j;
}

void write_histogram_csv(std::ostream & out, const BotSeries & s) {
  out << "bin_lower,bin_upper,count\n";
  const double bins = static_cast<double>(s.counts.size());
  for (std::size_t j = 0; j < s.counts.size(); ++j)
    out << j / bins << ',' << (j + 1) / bins << ',' << s.counts[j] << '\n';
}

void write_histogram_svg(std::ostream & out, const std::vector<BotSeries> & series,
                         const std::string & title) {
  constexpr double panel_w = 220.0;
  constexpr double panel_h = 160.0;
  constexpr double margin = 30.0;
  const double width = margin + series.size() * (panel_w + margin);
  const double height = panel_h + 3 * margin + 20.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << margin << "\" y=\"18\" font-size=\"13\">" << xml_escape(title) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const BotSeries & s = series[i];
    const double x0 = margin + i * (panel_w + margin);
    const double y0 = 2 * margin;
    std::size_t total = 0;
    for (auto c : s.counts) total += c;
    const double bins = static_cast<double>(s.counts.size());
    // density scale: a uniform histogram sits at height 1
    double peak = 2.0;
    for (auto c : s.counts)
      if (total > 0) peak = std::max(peak, c * bins / static_cast<double>(total));
    const double bar_w = panel_w / bins;
    out << "<g>\n<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << panel_w
        << "\" height=\"" << panel_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (std::size_t j = 0; j < s.counts.size(); ++j) {
      const double dens = total > 0 ? s.counts[j] * bins / static_cast<double>(total) : 0.0;
      const double h = panel_h * dens / peak;
      out << "<rect x=\"" << x0 + j * bar_w << "\" y=\"" << y0 + panel_h - h << "\" width=\""
          << bar_w << "\" height=\"" << h << "\" fill=\"#8fb3d9\" stroke=\"#33557a\"/>\n";
    }
    const double y1 = y0 + panel_h - panel_h / peak;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y1 << "\" x2=\"" << x0 + panel_w << "\" y2=\""
        << y1 << "\" stroke=\"#c33\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << x0 << "\" y=\"" << y0 - 6 << "\">" << to_string(s.variant) << "</text>\n";
    std::ostringstream label;
    label << "D = " << std::fixed << std::setprecision(4) << s.d_stat
          << ", p = " << format_p_value(s.p_value);
    out << "<text x=\"" << x0 << "\" y=\"" << y0 + panel_h + 16 << "\">" << xml_escape(label.str())
        << "</text>\n</g>\n";
  }
  out << "</svg>\n";
}

std::string format_p_value(double p) {
  if (p < 5e-5) return "< 5e-05";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << p;
  return os.str();
}

}  // namespace fairbot

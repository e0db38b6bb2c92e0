/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

// fairbot command-line tool: simulate, level, power, verify, synth, replay.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numeric failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fairbot/errors.hpp"
#include "fairbot/report.hpp"
#include "fairbot/scenarios.hpp"
#include "fairbot/verifydata.hpp"

using nlohmann::json;
using namespace fairbot;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

/// Raised for problems detected by the tool itself (bad flag combinations, IO).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Set once inputs are validated; numeric failures after this point exit 3.
bool g_running = false;

unsigned default_jobs() {
  if (const char * env = std::getenv("FAIRBOT_JOBS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception &) {
      throw UsageError(std::string("FAIRBOT_JOBS is not a number: ") + env);
    }
  }
  return 1;
}

template <class T>
std::vector<T> parse_list(const std::string & text, const std::string & flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v;
    if (!(is >> v) || !is.eof()) throw UsageError(flag + ": cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// Output sink for "-" (stdout) or a file path.
class Output {
 public:
  explicit Output(const std::string & path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream & stream() { return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

RunManifest make_manifest(const std::string & sub, const std::vector<std::string> & argv,
                          json config, std::uint64_t seed) {
  RunManifest m;
  m.subcommand = sub;
  m.argv = argv;
  m.config = std::move(config);
  m.root_seed = seed;
  m.timestamp = utc_timestamp();
  return m;
}

void write_comment_manifest(std::ostream & out, const RunManifest & m) {
  out << "# manifest " << to_json(m).dump() << '\n';
}

void write_json(const std::string & path, const json & j) {
  Output o(path);
  o.stream() << j.dump(2) << '\n';
}

void write_extras(const std::string & hist_prefix, const std::string & svg_path,
                  const std::vector<BotSeries> & series, const RunManifest & m,
                  const std::string & title) {
  if (!hist_prefix.empty()) {
    for (const auto & s : series) {
      Output o(hist_prefix + "_" + std::string(to_string(s.variant)) + ".csv");
      write_comment_manifest(o.stream(), m);
      write_histogram_csv(o.stream(), s);
    }
  }
  if (!svg_path.empty()) {
    Output o(svg_path);
    o.stream() << "<!-- manifest " << to_json(m).dump() << " -->\n";
    write_histogram_svg(o.stream(), series, title);
  }
}

// ---------------------------------------------------------------------------
// Scenario flags shared by simulate, level and power.

struct ScenarioFlags {
  std::string scenario = "calibrated";
  std::string config_path;
  std::size_t p = 3;
  std::size_t n = 50;
  double sigma0_sq = 1.0, rho0 = 0.6, sigma_f_sq = 1.0, rho_f = 0.6;
  double sigma_delta_sq = 0.0, rho_delta = 0.0, bias_alpha = 0.15;
  int bias_axis = 1, bias_sign = 1;
  std::vector<CLI::Option *> overrides;
  CLI::Option * p_opt = nullptr;
  CLI::Option * n_opt = nullptr;

  void add(CLI::App & app, bool with_dims) {
    app.add_option("--scenario", scenario, "Named scenario")->capture_default_str();
    app.add_option("--config", config_path, "JSON scenario config (flags override it)");
    if (with_dims) {
      p_opt = app.add_option("--p", p, "Dimension")->capture_default_str();
      n_opt = app.add_option("--n", n, "Ensemble size")->capture_default_str();
    }
    overrides = {app.add_option("--sigma0-sq", sigma0_sq, "Truth variance"),
                 app.add_option("--rho0", rho0, "Truth correlation"),
                 app.add_option("--sigma-f-sq", sigma_f_sq, "Forecast variance"),
                 app.add_option("--rho-f", rho_f, "Forecast correlation"),
                 app.add_option("--sigma-delta-sq", sigma_delta_sq, "Alternating variance error"),
                 app.add_option("--rho-delta", rho_delta, "Alternating correlation error"),
                 app.add_option("--bias-axis", bias_axis, "Bias eigen-axis (1 or 2)"),
                 app.add_option("--bias-sign", bias_sign, "Bias sign (+1 or -1)"),
                 app.add_option("--bias-alpha", bias_alpha, "Bias ellipsoid probability")};
  }

  /// Precedence: --config file, then --scenario, then individual flags.
  ScenarioConfig build(std::size_t p_in, std::size_t n_in) const {
    ScenarioConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config '" + config_path + "'");
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error & e) {
        throw ParseError(config_path + ": " + e.what());
      }
      c = scenario_from_json(j);
      if (p_opt && p_opt->count()) c.p = p_in;
      if (n_opt && n_opt->count()) c.n = n_in;
    } else {
      c = named_scenario(scenario, p_in, n_in);
    }
    if (overrides[0]->count()) c.sigma0_sq = sigma0_sq;
    if (overrides[1]->count()) c.rho0 = rho0;
    if (overrides[2]->count()) c.sigma_f_sq = sigma_f_sq;
    if (overrides[3]->count()) c.rho_f = rho_f;
    if (overrides[4]->count()) c.sigma_delta_sq = sigma_delta_sq;
    if (overrides[5]->count()) c.rho_delta = rho_delta;
    if (overrides[6]->count()) c.bias_axis = bias_axis;
    if (overrides[7]->count()) c.bias_sign = bias_sign;
    if (overrides[8]->count()) c.bias_alpha = bias_alpha;
    return c;
  }
};

// ---------------------------------------------------------------------------

struct SimulateCmd {
  ScenarioFlags sf;
  std::size_t cases = 10000;
  std::uint64_t seed = 1;
  std::size_t bins = kDefaultBins;
  std::string out = "-";
  std::string hist_csv, svg;
  bool emit_values = false;

  void add(CLI::App & app) {
    sf.add(app, true);
    app.add_option("--cases", cases, "Number of cases")->capture_default_str();
    app.add_option("--seed", seed, "Root seed")->capture_default_str();
    app.add_option("--bins", bins, "Histogram bins")->capture_default_str();
    app.add_option("--out", out, "JSON report path ('-' for stdout)")->capture_default_str();
    app.add_option("--hist-csv", hist_csv, "Write <prefix>_<variant>.csv histograms");
    app.add_option("--svg", svg, "Write histogram panels as SVG");
    app.add_flag("--emit-values", emit_values, "Include raw transform values");
  }

  void run(const std::vector<std::string> & argv, unsigned jobs) const {
    const ScenarioConfig c = sf.build(sf.p, sf.n);
    validate(c);
    build_pair(c);
    json config = to_json(c);
    config["cases"] = cases;
    config["bins"] = bins;
    const RunManifest m = make_manifest("simulate", argv, config, seed);
    g_running = true;
    const ExperimentReport r = run_experiment(c, cases, seed, bins, jobs);
    write_json(out, to_json(r, m, emit_values));
    std::ostringstream title;
    title << sf.scenario << ", p = " << c.p << ", n = " << c.n << ", " << cases << " cases";
    write_extras(hist_csv, svg, r.series, m, title.str());
  }
};

struct LevelCmd {
  ScenarioFlags sf;
  std::string p_list = "3,10,30";
  std::string n_list = "10,16,50";
  std::size_t reps = 200;
  std::size_t cases = 2000;
  double level = 0.05;
  std::uint64_t seed = 1;
  std::string out = "-";

  void add(CLI::App & app) {
    sf.add(app, false);
    app.add_option("--p-list", p_list, "Comma-separated dimensions")->capture_default_str();
    app.add_option("--n-list", n_list, "Comma-separated ensemble sizes")->capture_default_str();
    app.add_option("--reps", reps, "Replications per (p, n)")->capture_default_str();
    app.add_option("--cases", cases, "Cases per replication")->capture_default_str();
    app.add_option("--level", level, "KS test level")->capture_default_str();
    app.add_option("--seed", seed, "Root seed")->capture_default_str();
    app.add_option("--out", out, "CSV path ('-' for stdout)")->capture_default_str();
  }

  void run(const std::vector<std::string> & argv, unsigned jobs) const {
    const auto ps = parse_list<std::size_t>(p_list, "--p-list");
    const auto ns = parse_list<std::size_t>(n_list, "--n-list");
    if (ps.empty()) throw UsageError("--p-list is empty");
    if (ns.empty()) throw UsageError("--n-list is empty");
    // every (p, n) combination with n > p
    std::vector<ScenarioConfig> grid;
    for (auto p : ps)
      for (auto n : ns)
        if (n > p) {
          grid.push_back(sf.build(p, n));
          validate(grid.back());
          build_pair(grid.back());
        }
    if (grid.empty()) throw UsageError("no (p, n) combination satisfies n > p");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("--level must lie in (0, 1)");

    json config = to_json(sf.build(ps.front(), ns.front()));
    config.erase("p");
    config.erase("n");
    config["p_list"] = ps;
    config["n_list"] = ns;
    config["reps"] = reps;
    config["cases"] = cases;
    config["level"] = level;
    const RunManifest m = make_manifest("level", argv, config, seed);
    g_running = true;

    std::ostringstream body;
    body << "p,n,variant,rejection_rate\n";
    for (const auto & c : grid) {
      const RejectionRates r = rejection_rate(c, cases, reps, level, seed, jobs);
      for (Variant v : kAllVariants) body << c.p << ',' << c.n << ',' << to_string(v) << ',' << r[v] << '\n';
    }
    Output o(out);
    write_comment_manifest(o.stream(), m);
    o.stream() << body.str();
  }
};

struct PowerCmd {
  ScenarioFlags sf;
  std::string sweep = "sigma_f_sq";
  std::string grid;
  std::size_t reps = 200;
  std::size_t cases = 2000;
  double level = 0.05;
  std::uint64_t seed = 1;
  std::string out = "-";

  void add(CLI::App & app) {
    sf.add(app, true);
    sf.n = 10;
    app.add_option("--sweep", sweep, "sigma_f_sq or rho_f")->capture_default_str();
    app.add_option("--grid", grid, "Comma-separated grid (default: 8 points over the standard range)");
    app.add_option("--reps", reps, "Replications per grid point")->capture_default_str();
    app.add_option("--cases", cases, "Cases per replication")->capture_default_str();
    app.add_option("--level", level, "KS test level")->capture_default_str();
    app.add_option("--seed", seed, "Root seed")->capture_default_str();
    app.add_option("--out", out, "CSV path ('-' for stdout)")->capture_default_str();
  }

  void run(const std::vector<std::string> & argv, unsigned jobs) const {
    const auto s = parse_sweep(sweep);
    if (!s) throw UsageError("--sweep must be sigma_f_sq or rho_f");
    const std::vector<double> g = grid.empty() ? default_grid(*s) : parse_list<double>(grid, "--grid");
    if (g.empty()) throw UsageError("--grid is empty");
    const ScenarioConfig base = sf.build(sf.p, sf.n);
    for (double v : g) {
      const ScenarioConfig c = apply_sweep(base, *s, v);
      validate(c);
      build_pair(c);
    }
    if (!(level > 0.0 && level < 1.0)) throw DomainError("--level must lie in (0, 1)");

    json config = to_json(base);
    config["sweep"] = sweep;
    config["grid"] = g;
    config["reps"] = reps;
    config["cases"] = cases;
    config["level"] = level;
    const RunManifest m = make_manifest("power", argv, config, seed);
    g_running = true;

    const auto rows = power_curve(base, *s, g, cases, reps, level, seed, jobs);
    Output o(out);
    write_comment_manifest(o.stream(), m);
    o.stream() << "value,variant,rejection_rate\n";
    for (const auto & row : rows)
      for (Variant v : kAllVariants) o.stream() << row.value << ',' << to_string(v) << ',' << row.rates[v] << '\n';
  }
};

struct VerifyCmd {
  std::string input;
  std::string format;
  std::string mode = "perfect-reliability";
  std::size_t n_sub = 16;
  std::string holdout = "0";
  std::string selection = "first-n";
  std::uint64_t seed = 1;
  std::size_t bins = kDefaultBins;
  std::string out = "-";
  std::string hist_csv, svg;
  bool emit_values = false;

  void add(CLI::App & app) {
    app.add_option("--input", input, "Dataset path")->required();
    app.add_option("--format", format, "jsonl or csv (default: from the file extension)");
    app.add_option("--mode", mode, "perfect-reliability or against-observation")->capture_default_str();
    app.add_option("--n-sub", n_sub, "Members per evaluated ensemble")->capture_default_str();
    app.add_option("--holdout", holdout, "Holdout member index, or 'random'")->capture_default_str();
    app.add_option("--selection", selection, "first-n or random")->capture_default_str();
    app.add_option("--seed", seed, "Root seed for random selections")->capture_default_str();
    app.add_option("--bins", bins, "Histogram bins")->capture_default_str();
    app.add_option("--out", out, "JSON report path ('-' for stdout)")->capture_default_str();
    app.add_option("--hist-csv", hist_csv, "Write <prefix>_<variant>.csv histograms");
    app.add_option("--svg", svg, "Write histogram panels as SVG");
    app.add_flag("--emit-values", emit_values, "Include raw transform values");
  }

  void run(const std::vector<std::string> & argv, unsigned jobs) const {
    DatasetFormat fmt = DatasetFormat::jsonl;
    if (!format.empty()) {
      const auto f = parse_format(format);
      if (!f) throw UsageError("--format must be jsonl or csv");
      fmt = *f;
    } else if (input.size() >= 4 && input.substr(input.size() - 4) == ".csv") {
      fmt = DatasetFormat::csv;
    }
    VerifyPlan plan;
    const auto md = parse_mode(mode);
    if (!md) throw UsageError("--mode must be perfect-reliability or against-observation");
    plan.mode = *md;
    const auto sel = parse_selection(selection);
    if (!sel) throw UsageError("--selection must be first-n or random");
    plan.member_selection = *sel;
    plan.n_sub = n_sub;
    plan.seed = seed;
    if (holdout == "random") {
      plan.holdout_index.reset();
    } else {
      const auto idx = parse_list<std::size_t>(holdout, "--holdout");
      if (idx.size() != 1) throw UsageError("--holdout must be an index or 'random'");
      plan.holdout_index = idx.front();
    }

    const VerificationDataset data = load_dataset(input, fmt);
    validate(plan, data);
    json config = to_json(plan);
    config["input"] = input;
    config["format"] = fmt == DatasetFormat::csv ? "csv" : "jsonl";
    config["bins"] = bins;
    const RunManifest m = make_manifest("verify", argv, config, seed);
    g_running = true;

    const VerificationReport r = run_verification(data, plan, bins, jobs);
    std::vector<double> bias;
    if (data.has_all_obs()) bias = bias_diagnostics(data);
    write_json(out, to_json(r, m, emit_values, data.has_all_obs() ? &bias : nullptr));
    std::ostringstream title;
    title << mode << ", p = " << data.p << ", n_sub = " << n_sub << ", " << data.cases.size() << " cases";
    write_extras(hist_csv, svg, r.series, m, title.str());
  }
};

struct SynthCmd {
  std::size_t p = 3;
  std::size_t members = 20;
  std::size_t cases = 1000;
  std::string cov = "ar1";
  double sigma_sq = 1.0, rho = 0.6, sigma_delta_sq = 0.0, rho_delta = 0.0;
  double obs_shift = 0.0;
  int bias_axis = 1, bias_sign = 1;
  double bias_alpha = 0.15;
  CLI::Option * bias_opt = nullptr;
  std::uint64_t seed = 1;
  std::string out = "-";

  void add(CLI::App & app) {
    app.add_option("--p", p, "Dimension")->capture_default_str();
    app.add_option("--members", members, "Members per case (M)")->capture_default_str();
    app.add_option("--cases", cases, "Number of cases")->capture_default_str();
    app.add_option("--cov", cov, "ar1, alt or identity")->capture_default_str();
    app.add_option("--sigma-sq", sigma_sq, "Variance (ar1, alt)")->capture_default_str();
    app.add_option("--rho", rho, "Correlation (ar1, alt)")->capture_default_str();
    app.add_option("--sigma-delta-sq", sigma_delta_sq, "Alternating variance error (alt)")->capture_default_str();
    app.add_option("--rho-delta", rho_delta, "Alternating correlation error (alt)")->capture_default_str();
    app.add_option("--obs-shift", obs_shift, "Observation mean shift in marginal standard deviations")
        ->capture_default_str();
    bias_opt = app.add_option("--bias-axis", bias_axis, "Shift members along this eigen-axis (1 or 2)");
    app.add_option("--bias-sign", bias_sign, "Member bias sign")->capture_default_str();
    app.add_option("--bias-alpha", bias_alpha, "Member bias ellipsoid probability")->capture_default_str();
    app.add_option("--seed", seed, "Root seed")->capture_default_str();
    app.add_option("--out", out, "JSONL path ('-' for stdout)")->capture_default_str();
  }

  void run(const std::vector<std::string> & argv, unsigned) const {
    if (members < 2) throw DomainError("--members must be at least 2");
    if (p < 1) throw DomainError("--p must be at least 1");
    if (cases < 1) throw DomainError("--cases must be at least 1");
    SymMatrix s(p);
    if (cov == "ar1") {
      s = ar1_covariance(p, sigma_sq, rho);
    } else if (cov == "alt") {
      s = alternating_covariance(p, sigma_sq, rho, sigma_delta_sq, rho_delta);
    } else if (cov == "identity") {
      s = SymMatrix::identity(p);
    } else {
      throw UsageError("--cov must be ar1, alt or identity");
    }
    Vector member_mean(p, 0.0);
    if (bias_opt->count()) {
      ScenarioConfig bc;
      bc.p = p;
      bc.n = p + 1;
      bc.kind = ScenarioKind::bias;
      bc.bias_axis = bias_axis;
      bc.bias_sign = bias_sign;
      bc.bias_alpha = bias_alpha;
      validate(bc);
      member_mean = bias_vector(s, bias_axis, bias_sign, bias_alpha);
    }
    Vector obs_mean(p);
    for (std::size_t i = 0; i < p; ++i) obs_mean[i] = obs_shift * std::sqrt(s(i, i));
    const GaussianLaw member_law(member_mean, s);
    const GaussianLaw obs_law(obs_mean, s);

    json config = {{"p", p},           {"members", members},       {"cases", cases},
                   {"cov", cov},       {"sigma_sq", sigma_sq},     {"rho", rho},
                   {"sigma_delta_sq", sigma_delta_sq}, {"rho_delta", rho_delta},
                   {"obs_shift", obs_shift}, {"member_mean", member_mean}};
    const RunManifest m = make_manifest("synth", argv, config, seed);
    g_running = true;

    const VerificationDataset d = synth_dataset(member_law, obs_law, cases, members, seed);
    Output o(out);
    o.stream() << json{{"manifest", to_json(m)}}.dump() << '\n';
    write_dataset_jsonl(o.stream(), d);
  }
};

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string> & args, const std::vector<std::string> * recorded_argv);

/// Reads the manifest of an earlier output (JSON report, CSV/SVG comment line
/// or JSONL first line) and reruns it, writing to `out` instead of the
/// original path. The original argv is kept so outputs match byte for byte
/// apart from the timestamp.
int replay(const std::string & path, const std::string & out) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::string first;
  std::getline(in, first);
  json manifest;
  try {
    if (first.rfind("# manifest ", 0) == 0) {
      manifest = json::parse(first.substr(11));
    } else if (first.rfind("<!-- manifest ", 0) == 0) {
      manifest = json::parse(first.substr(14, first.size() - 14 - 4));
    } else {
      json j = json::parse(first, nullptr, false);
      if (j.is_discarded()) {
        in.clear();
        in.seekg(0);
        j = json::parse(in);
      }
      manifest = j.at("manifest");
    }
  } catch (const json::exception & e) {
    throw ParseError(path + ": no readable manifest (" + e.what() + ")");
  }
  const RunManifest m = manifest_from_json(manifest);
  if (m.tool_version != kToolVersion)
    std::cerr << "fairbot: warning: manifest written by version " << m.tool_version << '\n';

  std::vector<std::string> args = m.argv;
  bool replaced = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      args[i + 1] = out;
      replaced = true;
    } else if (args[i].rfind("--out=", 0) == 0) {
      args[i] = "--out=" + out;
      replaced = true;
    }
  }
  if (!replaced) {
    args.push_back("--out");
    args.push_back(out);
  }
  return run_cli(args, &m.argv);
}

int run_cli(const std::vector<std::string> & args, const std::vector<std::string> * recorded_argv) {
  CLI::App app{"Box ordinate transform calibration toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  unsigned jobs = default_jobs();
  app.add_option("--jobs", jobs, "Worker threads (0 = all cores; env FAIRBOT_JOBS)");

  SimulateCmd simulate;
  LevelCmd level;
  PowerCmd power;
  VerifyCmd verify;
  SynthCmd synth;
  std::string replay_input, replay_out = "-";

  auto * sim_app = app.add_subcommand("simulate", "Transform values for one scenario");
  simulate.add(*sim_app);
  sim_app->add_option("--jobs", jobs, "Worker threads");
  auto * level_app = app.add_subcommand("level", "Rejection rates over a (p, n) grid");
  level.add(*level_app);
  level_app->add_option("--jobs", jobs, "Worker threads");
  auto * power_app = app.add_subcommand("power", "Rejection rates along a parameter sweep");
  power.add(*power_app);
  power_app->add_option("--jobs", jobs, "Worker threads");
  auto * verify_app = app.add_subcommand("verify", "Transform values for an ensemble dataset");
  verify.add(*verify_app);
  verify_app->add_option("--jobs", jobs, "Worker threads");
  auto * synth_app = app.add_subcommand("synth", "Write a synthetic Gaussian dataset");
  synth.add(*synth_app);
  auto * replay_app = app.add_subcommand("replay", "Rerun the manifest embedded in an output file");
  replay_app->add_option("file", replay_input, "Output file carrying a manifest")->required();
  replay_app->add_option("--out", replay_out, "Where to write the regenerated output")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::vector<std::string> & argv = recorded_argv ? *recorded_argv : args;
  if (sim_app->parsed()) simulate.run(argv, jobs);
  else if (level_app->parsed()) level.run(argv, jobs);
  else if (power_app->parsed()) power.run(argv, jobs);
  else if (verify_app->parsed()) verify.run(argv, jobs);
  else if (synth_app->parsed()) synth.run(argv, jobs);
  else if (replay_app->parsed()) return replay(replay_input, replay_out);
  return 0;
}

}  // namespace

int main(int argc, char ** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_cli(args, nullptr);
  } catch (const NotPositiveDefinite & e) {
    std::cerr << "fairbot: " << e.what() << '\n';
    return g_running ? kExitNumeric : kExitConfig;
  } catch (const ConvergenceFailure & e) {
    std::cerr << "fairbot: " << e.what() << '\n';
    return g_running ? kExitNumeric : kExitConfig;
  } catch (const Error & e) {
    std::cerr << "fairbot: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError & e) {
    std::cerr << "fairbot: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception & e) {
    std::cerr << "fairbot: " << e.what() << '\n';
    return kExitNumeric;
  }
}

/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "fairbot/verifydata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "fairbot/errors.hpp"
#include "fairbot/parallel.hpp"

namespace fairbot {

namespace {

using nlohmann::json;

constexpr std::size_t idx(Variant v) { return static_cast<std::size_t>(v); }

std::string at_line(std::size_t line, const std::string & msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

double finite_or_throw(double v, std::size_t line, const std::string & id) {
  if (!std::isfinite(v))
    throw NonFiniteValue(at_line(line, "non-finite value in case '" + id + "'"));
  return v;
}

Vector parse_json_vector(const json & j, std::size_t line, const std::string & id,
                         const char * what) {
  if (!j.is_array()) throw SchemaError(at_line(line, std::string(what) + " of case '" + id + "' is not an array"));
  Vector v;
  v.reserve(j.size());
  for (const auto & x : j) {
    if (!x.is_number())
      throw SchemaError(at_line(line, std::string(what) + " of case '" + id + "' holds a non-number"));
    v.push_back(finite_or_throw(x.get<double>(), line, id));
  }
  return v;
}

// Fixes p and M from the first record and checks every later one against them.
class DatasetBuilder {
 public:
  void add(VerificationRecord rec, std::size_t line) {
    const std::size_t m = rec.members.rows();
    const std::size_t p = rec.members.cols();
    if (data_.cases.empty()) {
      if (p < 1) throw SchemaError(at_line(line, "case '" + rec.id + "' has empty member vectors"));
      if (m < 2) throw SchemaError(at_line(line, "case '" + rec.id + "' has fewer than 2 members"));
      data_.p = p;
      data_.m = m;
    }
    if (p != data_.p) {
      std::ostringstream os;
      os << "case '" << rec.id << "' has dimension " << p << ", expected " << data_.p;
      throw SchemaError(at_line(line, os.str()));
    }
    if (m != data_.m) {
      std::ostringstream os;
      os << "case '" << rec.id << "' has " << m << " members, expected " << data_.m;
      throw SchemaError(at_line(line, os.str()));
    }
    if (rec.obs && rec.obs->size() != data_.p) {
      std::ostringstream os;
      os << "case '" << rec.id << "' has an observation of length " << rec.obs->size()
         << ", expected " << data_.p;
      throw SchemaError(at_line(line, os.str()));
    }
    data_.cases.push_back(std::move(rec));
  }

  VerificationDataset finish() {
    if (data_.cases.empty()) throw SchemaError("dataset contains no cases");
    return std::move(data_);
  }

 private:
  VerificationDataset data_;
};

Matrix rows_or_throw(const std::vector<Vector> & rows, std::size_t line, const std::string & id) {
  for (const auto & r : rows) {
    if (r.size() != rows.front().size()) {
      std::ostringstream os;
      os << "case '" << id << "' has member rows of lengths " << rows.front().size() << " and "
         << r.size();
      throw SchemaError(at_line(line, os.str()));
    }
  }
  return Matrix::from_rows(rows);
}

VerificationDataset read_jsonl(std::istream & in) {
  DatasetBuilder builder;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error & e) {
      throw ParseError(at_line(line, e.what()));
    }
    if (!j.is_object()) throw ParseError(at_line(line, "expected a JSON object"));
    if (j.contains("manifest")) continue;

    VerificationRecord rec;
    if (!j.contains("case")) throw SchemaError(at_line(line, "missing \"case\""));
    if (j["case"].is_string())
      rec.id = j["case"].get<std::string>();
    else if (j["case"].is_number_integer())
      rec.id = std::to_string(j["case"].get<long long>());
    else
      throw SchemaError(at_line(line, "\"case\" must be a string"));

    if (j.contains("obs") && !j["obs"].is_null())
      rec.obs = parse_json_vector(j["obs"], line, rec.id, "obs");

    if (!j.contains("members") || !j["members"].is_array())
      throw SchemaError(at_line(line, "case '" + rec.id + "' lacks a \"members\" array"));
    std::vector<Vector> rows;
    for (const auto & mj : j["members"]) rows.push_back(parse_json_vector(mj, line, rec.id, "member"));
    if (rows.empty()) throw SchemaError(at_line(line, "case '" + rec.id + "' has no members"));
    rec.members = rows_or_throw(rows, line, rec.id);
    builder.add(std::move(rec), line);
  }
  return builder.finish();
}

std::vector<std::string> split_csv(const std::string & text) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(text);
  while (std::getline(is, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!text.empty() && text.back() == ',') out.emplace_back();
  return out;
}

// Returns 0 for "obs", k for "mk", nullopt otherwise.
std::optional<std::size_t> parse_role(const std::string & role) {
  if (role == "obs") return 0;
  if (role.size() < 2 || role[0] != 'm') return std::nullopt;
  std::size_t k = 0;
  const auto [ptr, ec] = std::from_chars(role.data() + 1, role.data() + role.size(), k);
  if (ec != std::errc() || ptr != role.data() + role.size() || k == 0) return std::nullopt;
  return k;
}

double parse_number(const std::string & s, std::size_t line, const std::string & id) {
  const char * b = s.data();
  const char * e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ptr == e && ec == std::errc()) return finite_or_throw(v, line, id);
  if (ec == std::errc::result_out_of_range) return finite_or_throw(HUGE_VAL, line, id);
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower.find("nan") != std::string::npos || lower.find("inf") != std::string::npos)
    throw NonFiniteValue(at_line(line, "non-finite value in case '" + id + "'"));
  throw ParseError(at_line(line, "cannot parse number '" + s + "'"));
}

VerificationDataset read_csv(std::istream & in) {
  DatasetBuilder builder;
  std::string text;
  std::size_t line = 0;

  std::string current;
  std::size_t current_line = 0;
  std::optional<Vector> obs;
  std::map<std::size_t, Vector> members;
  std::vector<std::string> finished;

  auto flush = [&] {
    if (current.empty() && members.empty() && !obs) return;
    if (members.empty()) throw SchemaError(at_line(current_line, "case '" + current + "' has no members"));
    std::vector<Vector> rows;
    std::size_t expect = 1;
    for (auto & [k, v] : members) {
      if (k != expect)
        throw SchemaError(at_line(current_line, "case '" + current + "' is missing member m" + std::to_string(expect)));
      rows.push_back(std::move(v));
      ++expect;
    }
    VerificationRecord rec{current, std::move(obs), rows_or_throw(rows, current_line, current)};
    builder.add(std::move(rec), current_line);
    finished.push_back(current);
    obs.reset();
    members.clear();
  };

  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (text[text.find_first_not_of(" \t")] == '#') continue;
    const auto fields = split_csv(text);
    if (fields.size() < 3) throw ParseError(at_line(line, "expected case,role,x1,...,xp"));
    const auto role = parse_role(fields[1]);
    if (!role) {
      if (line == 1 || (current.empty() && members.empty())) continue;  // header row
      throw ParseError(at_line(line, "unknown role '" + fields[1] + "'"));
    }
    const std::string & id = fields[0];
    if (id != current || (current.empty() && members.empty() && !obs)) {
      flush();
      if (std::find(finished.begin(), finished.end(), id) != finished.end())
        throw SchemaError(at_line(line, "rows of case '" + id + "' are not contiguous"));
      current = id;
      current_line = line;
    }
    Vector v;
    for (std::size_t i = 2; i < fields.size(); ++i) v.push_back(parse_number(fields[i], line, id));
    if (*role == 0) {
      if (obs) throw SchemaError(at_line(line, "case '" + id + "' has two obs rows"));
      obs = std::move(v);
    } else {
      if (members.count(*role))
        throw SchemaError(at_line(line, "case '" + id + "' repeats " + fields[1]));
      members[*role] = std::move(v);
    }
  }
  flush();
  return builder.finish();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

bool VerificationDataset::has_all_obs() const {
  return std::all_of(cases.begin(), cases.end(), [](const auto & c) { return c.obs.has_value(); });
}

std::optional<DatasetFormat> parse_format(std::string_view name) {
  if (name == "jsonl") return DatasetFormat::jsonl;
  if (name == "csv") return DatasetFormat::csv;
  return std::nullopt;
}

VerificationDataset read_dataset(std::istream & in, DatasetFormat format) {
  return format == DatasetFormat::jsonl ? read_jsonl(in) : read_csv(in);
}

VerificationDataset load_dataset(const std::string & path, DatasetFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_dataset(in, format);
}

void write_dataset_jsonl(std::ostream & out, const VerificationDataset & data) {
  for (const auto & rec : data.cases) {
    json j;
    j["case"] = rec.id;
    j["obs"] = rec.obs ? json(*rec.obs) : json(nullptr);
    json members = json::array();
    for (std::size_t r = 0; r < rec.members.rows(); ++r) {
      const auto row = rec.members.row(r);
      members.push_back(Vector(row.begin(), row.end()));
    }
    j["members"] = std::move(members);
    out << j.dump() << '\n';
  }
}

void write_dataset_csv(std::ostream & out, const VerificationDataset & data) {
  out << "case,role";
  for (std::size_t i = 1; i <= data.p; ++i) out << ",x" << i;
  out << '\n';
  auto write_row = [&](const std::string & id, const std::string & role, std::span<const double> v) {
    out << id << ',' << role;
    for (double x : v) out << ',' << format_double(x);
    out << '\n';
  };
  for (const auto & rec : data.cases) {
    if (rec.obs) write_row(rec.id, "obs", *rec.obs);
    for (std::size_t r = 0; r < rec.members.rows(); ++r)
      write_row(rec.id, "m" + std::to_string(r + 1), rec.members.row(r));
  }
}

VerificationDataset synth_dataset(const GaussianLaw & member_law, const GaussianLaw & obs_law,
                                  std::size_t n_cases, std::size_t m, std::uint64_t seed) {
  if (m < 2) throw TooFewMembers("synthetic datasets need at least 2 members");
  if (member_law.dim() != obs_law.dim()) throw DimensionMismatch("member and observation laws");
  VerificationDataset data{member_law.dim(), m, {}};
  data.cases.reserve(n_cases);
  for (std::size_t c = 0; c < n_cases; ++c) {
    NormalGenerator gen(RngStream{kRngAlgorithm, seed, derive_stream_index(0, c)});
    VerificationRecord rec;
    rec.id = "c" + std::to_string(c);
    rec.members = member_law.sample_rows(m, gen);
    rec.obs = obs_law.sample(gen);
    data.cases.push_back(std::move(rec));
  }
  return data;
}

VerificationDataset synth_dataset(const GaussianLaw & law, std::size_t n_cases, std::size_t m,
                                  std::uint64_t seed) {
  return synth_dataset(law, law, n_cases, m, seed);
}

std::string_view to_string(VerifyMode m) {
  return m == VerifyMode::perfect_reliability ? "perfect_reliability" : "against_observation";
}

std::optional<VerifyMode> parse_mode(std::string_view name) {
  if (name == "perfect_reliability" || name == "perfect-reliability") return VerifyMode::perfect_reliability;
  if (name == "against_observation" || name == "against-observation") return VerifyMode::against_observation;
  return std::nullopt;
}

std::string_view to_string(MemberSelection s) {
  return s == MemberSelection::first_n ? "first_n" : "random";
}

std::optional<MemberSelection> parse_selection(std::string_view name) {
  if (name == "first_n" || name == "first-n") return MemberSelection::first_n;
  if (name == "random") return MemberSelection::random;
  return std::nullopt;
}

void validate(const VerifyPlan & plan, const VerificationDataset & data) {
  if (data.cases.empty()) throw EmptySample("dataset has no cases");
  if (plan.n_sub <= data.p) {
    std::ostringstream os;
    os << "subsample size " << plan.n_sub << " must exceed dimension " << data.p;
    throw TooFewMembers(os.str());
  }
  const bool loo = plan.mode == VerifyMode::perfect_reliability;
  const std::size_t available = loo ? data.m - 1 : data.m;
  if (plan.n_sub > available) {
    std::ostringstream os;
    os << "subsample size " << plan.n_sub << " exceeds the " << available << " available members";
    throw SubsampleTooLarge(os.str());
  }
  if (loo && plan.holdout_index && *plan.holdout_index >= data.m) {
    std::ostringstream os;
    os << "holdout index " << *plan.holdout_index << " is not below M = " << data.m;
    throw DomainError(os.str());
  }
  if (!loo) {
    for (const auto & rec : data.cases)
      if (!rec.obs) throw MissingObservation("case '" + rec.id + "' has no observation");
  }
}

EnsembleCase select_case(const VerificationRecord & record, const VerifyPlan & plan,
                         std::size_t case_index) {
  const std::size_t m = record.members.rows();
  const std::size_t p = record.members.cols();
  NormalGenerator gen(RngStream{kRngAlgorithm, plan.seed, derive_stream_index(0, case_index)});

  std::vector<std::size_t> pool(m);
  std::iota(pool.begin(), pool.end(), 0);
  EnsembleCase ec;
  if (plan.mode == VerifyMode::perfect_reliability) {
    const std::size_t hold = plan.holdout_index ? *plan.holdout_index : gen.index(m);
    const auto row = record.members.row(hold);
    ec.obs.assign(row.begin(), row.end());
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(hold));
  } else {
    if (!record.obs) throw MissingObservation("case '" + record.id + "' has no observation");
    ec.obs = *record.obs;
  }
  if (plan.n_sub > pool.size()) throw SubsampleTooLarge("case '" + record.id + "'");

  if (plan.member_selection == MemberSelection::random) {
    // partial Fisher-Yates: the first n_sub slots become a uniform subsample
    for (std::size_t i = 0; i < plan.n_sub; ++i) {
      const std::size_t j = i + gen.index(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
  }
  ec.members = Matrix(plan.n_sub, p);
  for (std::size_t i = 0; i < plan.n_sub; ++i) {
    const auto src = record.members.row(pool[i]);
    std::copy(src.begin(), src.end(), ec.members.row(i).begin());
  }
  return ec;
}

const BotSeries & VerificationReport::get(Variant v) const {
  for (const auto & s : series)
    if (s.variant == v) return s;
  throw DomainError("report has no series '" + std::string(to_string(v)) + "'");
}

VerificationReport run_verification(const VerificationDataset & data, const VerifyPlan & plan,
                                    std::size_t bins, unsigned jobs) {
  validate(plan, data);
  const std::size_t n = data.cases.size();
  std::array<std::vector<double>, 4> values;
  for (Variant v : kSampleVariants) values[idx(v)].resize(n);

  parallel_for(n, jobs, [&](std::size_t c) {
    const EnsembleCase ec = select_case(data.cases[c], plan, c);
    SampleBots s;
    try {
      s = evaluate_sample_bots(ec);
    } catch (const NotPositiveDefinite & e) {
      throw NotPositiveDefinite("case '" + data.cases[c].id + "': " + e.what());
    }
    values[idx(Variant::naive)][c] = s.naive;
    values[idx(Variant::adjusted)][c] = s.adjusted;
    values[idx(Variant::fair)][c] = s.fair;
  });

  VerificationReport report{plan, data.p, data.m, n, {}};
  for (Variant v : kSampleVariants)
    report.series.push_back(make_series(v, std::move(values[idx(v)]), bins));
  return report;
}

std::vector<double> bias_diagnostics(const VerificationDataset & data) {
  if (data.cases.empty()) throw EmptySample("bias diagnostics of an empty dataset");
  const std::size_t p = data.p;
  std::vector<double> err(p, 0.0);
  std::vector<double> spread(p, 0.0);
  for (const auto & rec : data.cases) {
    if (!rec.obs) throw MissingObservation("case '" + rec.id + "' has no observation");
    const std::size_t m = rec.members.rows();
    for (std::size_t k = 0; k < p; ++k) {
      double mean = 0.0;
      for (std::size_t r = 0; r < m; ++r) mean += rec.members(r, k);
      mean /= static_cast<double>(m);
      double ss = 0.0;
      for (std::size_t r = 0; r < m; ++r) ss += (rec.members(r, k) - mean) * (rec.members(r, k) - mean);
      err[k] += mean - (*rec.obs)[k];
      spread[k] += std::sqrt(ss / static_cast<double>(m - 1));
    }
  }
  std::vector<double> out(p);
  for (std::size_t k = 0; k < p; ++k)
    out[k] = spread[k] > 0.0 ? err[k] / spread[k] : (err[k] == 0.0 ? 0.0 : std::copysign(HUGE_VAL, err[k]));
  return out;
}

}  // namespace fairbot

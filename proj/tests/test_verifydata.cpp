/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairbot/errors.hpp"
#include "fairbot/scenarios.hpp"
#include "fairbot/verifydata.hpp"
#include "oracles.hpp"

using namespace fairbot;

namespace {

VerificationDataset read_string(const std::string & text, DatasetFormat f) {
  std::istringstream in(text);
  return read_dataset(in, f);
}

template <class E>
std::string error_message(const std::string & text, DatasetFormat f) {
  try {
    read_string(text, f);
  } catch (const E & e) {
    return e.what();
  }
  return "";
}

std::size_t count_below(const BotSeries & s, double x) {
  return static_cast<std::size_t>(std::count_if(s.values.begin(), s.values.end(), [x](double u) { return u < x; }));
}

std::size_t count_at_or_above(const BotSeries & s, double x) {
  return static_cast<std::size_t>(std::count_if(s.values.begin(), s.values.end(), [x](double u) { return u >= x; }));
}

const std::string kJsonl =
    "{\"case\": \"a\", \"obs\": [0.5, 1.0], \"members\": [[0, 1], [1, 2], [2, 0]]}\n"
    "\n"
    "{\"case\": \"b\", \"obs\": null, \"members\": [[3, 1], [1, -2], [0.25, 0]]}\n";

const std::string kCsv =
    "case,role,x1,x2\n"
    "a,obs,0.5,1.0\n"
    "a,m1,0,1\n"
    "a,m2,1,2\n"
    "a,m3,2,0\n"
    "b,m1,3,1\n"
    "b,m2,1,-2\n"
    "b,m3,0.25,0\n";

}  // namespace

TEST_CASE("read_dataset happy path") {
  for (auto [text, f] : {std::pair{kJsonl, DatasetFormat::jsonl}, {kCsv, DatasetFormat::csv}}) {
    const VerificationDataset d = read_string(text, f);
    CHECK(d.p == 2);
    CHECK(d.m == 3);
    REQUIRE(d.cases.size() == 2);
    CHECK(d.cases[0].id == "a");
    CHECK(d.cases[0].obs == Vector{0.5, 1.0});
    CHECK(!d.cases[1].obs.has_value());
    CHECK(d.cases[1].members(2, 0) == 0.25);
    CHECK(!d.has_all_obs());
  }
  CHECK(read_string(kJsonl, DatasetFormat::jsonl) == read_string(kCsv, DatasetFormat::csv));
  // header row is optional
  CHECK(read_string(kCsv.substr(kCsv.find('\n') + 1), DatasetFormat::csv) == read_string(kCsv, DatasetFormat::csv));
}

TEST_CASE("read_dataset errors") {
  const std::string short_row =
      "{\"case\": \"a\", \"obs\": [0, 0], \"members\": [[0, 1], [1, 2]]}\n"
      "{\"case\": \"bad-7\", \"obs\": [0, 0], \"members\": [[0, 1], [1]]}\n";
  CHECK(error_message<SchemaError>(short_row, DatasetFormat::jsonl).find("bad-7") != std::string::npos);

  const std::string wrong_m =
      "{\"case\": \"a\", \"obs\": [0, 0], \"members\": [[0, 1], [1, 2]]}\n"
      "{\"case\": \"b2\", \"obs\": [0, 0], \"members\": [[0, 1], [1, 2], [3, 3]]}\n";
  CHECK(error_message<SchemaError>(wrong_m, DatasetFormat::jsonl).find("b2") != std::string::npos);

  const std::string broken = "{\"case\": \"a\", \"obs\": [0], \"members\": [[0], [1]]}\n{\"case\": \n";
  CHECK(error_message<ParseError>(broken, DatasetFormat::jsonl).find("line 2") != std::string::npos);

  const std::string nonfinite = "a,obs,0,1\na,m1,nan,1\na,m2,1,1\n";
  CHECK_THROWS_AS(read_string(nonfinite, DatasetFormat::csv), NonFiniteValue);

  const std::string csv_short = "a,obs,0,1\na,m1,1,1\nzz,m1,1\n";
  CHECK_THROWS_AS(read_string(csv_short, DatasetFormat::csv), SchemaError);
  CHECK_THROWS_AS(read_string("a,m1,1\na,m2,x\n", DatasetFormat::csv), ParseError);
  CHECK_THROWS_AS(read_string("", DatasetFormat::jsonl), SchemaError);
  CHECK_THROWS_AS(read_string("{\"case\": \"a\", \"members\": [[1]]}\n", DatasetFormat::jsonl), SchemaError);
}

TEST_CASE("synthetic datasets round-trip bit-exactly") {
  const GaussianLaw law(Vector{0.1, -0.3, 2.0}, ar1_covariance(3, 1.7, 0.6));
  const VerificationDataset d = synth_dataset(law, 50, 7, 3);
  for (auto f : {DatasetFormat::jsonl, DatasetFormat::csv}) {
    std::stringstream s;
    if (f == DatasetFormat::jsonl)
      write_dataset_jsonl(s, d);
    else
      write_dataset_csv(s, d);
    CHECK(read_dataset(s, f) == d);
  }
}

TEST_CASE("synth_dataset") {
  const GaussianLaw law(Vector(3, 0.0), ar1_covariance(3, 1.0, 0.6));
  const VerificationDataset one = synth_dataset(law, 1, 2, 9);
  CHECK(one.cases.size() == 1);
  CHECK(one.cases[0].members.rows() == 2);
  CHECK(one.has_all_obs());
  CHECK(synth_dataset(law, 20, 5, 9) == synth_dataset(law, 20, 5, 9));
  CHECK(!(synth_dataset(law, 20, 5, 9) == synth_dataset(law, 20, 5, 10)));

  const VerificationDataset big = synth_dataset(law, 10000, 10, 11);
  std::vector<Vector> rows;
  for (const auto & c : big.cases)
    for (std::size_t r = 0; r < c.members.rows(); ++r) rows.emplace_back(c.members.row(r).begin(), c.members.row(r).end());
  const Matrix cov = oracle::sample_covariance(rows);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(cov(i, j) - law.covariance()(i, j)) < 0.02);
}

TEST_CASE("plan validation") {
  const GaussianLaw law(Vector(4, 0.0), ar1_covariance(4, 1.0, 0.6));
  const VerificationDataset d = synth_dataset(law, 10, 20, 1);
  VerifyPlan plan;
  plan.n_sub = 20;
  CHECK_THROWS_AS(validate(plan, d), SubsampleTooLarge);
  plan.n_sub = 19;
  CHECK_NOTHROW(validate(plan, d));
  plan.n_sub = 4;
  CHECK_THROWS_AS(validate(plan, d), TooFewMembers);
  plan.n_sub = 8;
  plan.holdout_index = 20;
  CHECK_THROWS_AS(validate(plan, d), DomainError);
  plan = VerifyPlan{};
  plan.mode = VerifyMode::against_observation;
  plan.n_sub = 20;
  CHECK_NOTHROW(validate(plan, d));
  plan.n_sub = 21;
  CHECK_THROWS_AS(validate(plan, d), SubsampleTooLarge);

  VerificationDataset no_obs = d;
  no_obs.cases[3].obs.reset();
  plan.n_sub = 8;
  CHECK_THROWS_AS(validate(plan, no_obs), MissingObservation);
  CHECK_THROWS_AS(run_verification(no_obs, plan), MissingObservation);
}

TEST_CASE("select_case") {
  const GaussianLaw law(Vector(2, 0.0), SymMatrix::identity(2));
  const VerificationDataset d = synth_dataset(law, 3, 10, 4);
  VerifyPlan plan;
  plan.n_sub = 5;
  plan.holdout_index = 2;
  const EnsembleCase c = select_case(d.cases[0], plan, 0);
  CHECK(std::equal(c.obs.begin(), c.obs.end(), d.cases[0].members.row(2).begin()));
  CHECK(c.members.rows() == 5);
  // first_n skips the holdout member
  CHECK(std::equal(c.members.row(2).begin(), c.members.row(2).end(), d.cases[0].members.row(3).begin()));

  plan.holdout_index.reset();
  plan.member_selection = MemberSelection::random;
  const EnsembleCase r = select_case(d.cases[1], plan, 1);
  CHECK(r.members.rows() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(!std::equal(r.obs.begin(), r.obs.end(), r.members.row(i).begin()));
    for (std::size_t j = i + 1; j < 5; ++j)
      CHECK(!std::equal(r.members.row(i).begin(), r.members.row(i).end(), r.members.row(j).begin()));
  }
  const EnsembleCase again = select_case(d.cases[1], plan, 1);
  CHECK(again.obs == r.obs);
  CHECK(again.members == r.members);
}

TEST_CASE("perfect-reliability verification is exact for the fair transform") {
  const GaussianLaw law(Vector(4, 0.0), ar1_covariance(4, 1.0, 0.6));
  const VerificationDataset d = synth_dataset(law, 10000, 17, 5);
  VerifyPlan plan;
  plan.n_sub = 16;
  const VerificationReport r = run_verification(d, plan, kDefaultBins, 0);
  CHECK(r.series.size() == 3);
  CHECK(r.get(Variant::fair).values.size() == 10000);
  CHECK(r.get(Variant::fair).p_value > 0.001);
  CHECK_THROWS_AS(r.get(Variant::theoretical), DomainError);

  plan.member_selection = MemberSelection::random;
  plan.holdout_index.reset();
  CHECK(run_verification(d, plan, kDefaultBins, 0).get(Variant::fair).p_value > 0.001);
}

TEST_CASE("first_n selection ignores the order of unselected members") {
  const GaussianLaw law(Vector(3, 0.0), ar1_covariance(3, 1.0, 0.6));
  VerificationDataset d = synth_dataset(law, 50, 12, 6);
  VerifyPlan plan;
  plan.n_sub = 6;
  const VerificationReport a = run_verification(d, plan);
  NormalGenerator gen(RngStream{kRngAlgorithm, 1, 0});
  for (auto & c : d.cases) {
    // members 7..11 are neither the holdout nor in the subsample
    for (std::size_t r = 11; r > 7; --r) {
      const std::size_t j = 7 + gen.index(r - 7 + 1);
      for (std::size_t k = 0; k < 3; ++k) std::swap(c.members(r, k), c.members(j, k));
    }
  }
  const VerificationReport b = run_verification(d, plan);
  for (Variant v : kSampleVariants) CHECK(a.get(v).values == b.get(v).values);
}

TEST_CASE("against-observation mode detects a mean shift") {
  const SymMatrix s = ar1_covariance(3, 1.0, 0.6);
  const GaussianLaw members(Vector(3, 0.0), s);
  const GaussianLaw obs(Vector(3, 0.5), s);
  const VerificationDataset d = synth_dataset(members, obs, 10000, 20, 7);
  VerifyPlan plan;
  plan.mode = VerifyMode::against_observation;
  plan.n_sub = 20;
  const BotSeries & fair = run_verification(d, plan, kDefaultBins, 0).get(Variant::fair);
  CHECK(count_below(fair, 0.1) > 1000);
  CHECK(count_below(fair, 0.1) > count_at_or_above(fair, 0.9));
}

TEST_CASE("bias_diagnostics") {
  VerificationDataset exact = read_string(kJsonl, DatasetFormat::jsonl);
  exact.cases[0].obs = Vector{1.0, 1.0};
  exact.cases[1].obs = Vector{4.25 / 3.0, -1.0 / 3.0};
  for (double b : bias_diagnostics(exact)) CHECK(std::abs(b) < 1e-15);
  CHECK_THROWS_AS(bias_diagnostics(read_string(kJsonl, DatasetFormat::jsonl)), MissingObservation);
  CHECK_THROWS_AS(bias_diagnostics(VerificationDataset{}), EmptySample);

  // members shifted by delta relative to the observation law, unit spread
  constexpr double delta = 0.3;
  constexpr std::size_t n_cases = 4000, m = 10;
  const GaussianLaw member_law(Vector(2, delta), SymMatrix::identity(2));
  const GaussianLaw obs_law(Vector(2, 0.0), SymMatrix::identity(2));
  const auto b = bias_diagnostics(synth_dataset(member_law, obs_law, n_cases, m, 8));
  // per-case error has variance 1 + 1/M; the spread estimate is close to 1
  const double se = std::sqrt((1.0 + 1.0 / m) / n_cases);
  for (double v : b) CHECK(std::abs(v - delta) < 3.0 * se + 0.01 * delta);
}

TEST_CASE("verification rejection rates over dataset replications") {
  const GaussianLaw law(Vector(4, 0.0), ar1_covariance(4, 1.0, 0.6));
  VerifyPlan plan;
  plan.n_sub = 8;
  int fair = 0, naive = 0, adjusted = 0;
  // 400 small datasets rather than 100 large ones: same cost, tighter binomial spread
  constexpr int kReps = 400;
  for (int rep = 0; rep < kReps; ++rep) {
    const VerificationDataset d = synth_dataset(law, 500, 12, 300 + rep);
    const VerificationReport r = run_verification(d, plan, kDefaultBins, 0);
    fair += r.get(Variant::fair).p_value < 0.05;
    naive += r.get(Variant::naive).p_value < 0.05;
    adjusted += r.get(Variant::adjusted).p_value < 0.05;
  }
  const double f = static_cast<double>(fair) / kReps;
  INFO("fair " << f << ", naive " << naive << ", adjusted " << adjusted);
  CHECK(f >= 0.02);
  CHECK(f <= 0.10);
  CHECK(naive > kReps / 2);
  CHECK(adjusted > kReps / 2);
}

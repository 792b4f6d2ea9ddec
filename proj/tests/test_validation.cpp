#include <cmath>

#include "catch_amalgamated.hpp"
#include "cricket_rules/analysis.hpp"
#include "cricket_rules/validation.hpp"
#include "support/oracles.hpp"

using namespace cricket_rules;
using B = BowlingFeature;

namespace {

Eigen::MatrixXd random_points(synthetic::Rng& rng, Eigen::Index n) {
  Eigen::MatrixXd m(n, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) m(i, j) = rng.uniform() * 2.0 - 1.0;
  return m;
}

Eigen::MatrixXd similarity(const Eigen::MatrixXd& a, double scale, double angle, bool reflect, double tx, double ty) {
  Eigen::Matrix2d R;
  R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  if (reflect) R.col(1) *= -1;
  Eigen::MatrixXd out = scale * a * R;
  out.col(0).array() += tx;
  out.col(1).array() += ty;
  return out;
}

DeliveryRecord dated(Date d) {
  DeliveryRecord r;
  r.date = d;
  return r;
}

Rule rule(BattingFeature anchor, std::vector<B> order, AnalysisType type = AnalysisType::Batting) {
  Rule r;
  r.anchor = anchor;
  r.analysis_type = type;
  double score = 1.0;
  for (auto f : order) r.ranked.push_back({f, score -= 0.1});
  return r;
}

}  // namespace

TEST_CASE("Procrustes ignores similarity transforms", "[validation]") {
  synthetic::Rng rng(71);
  for (int t = 0; t < 25; ++t) {
    auto a = random_points(rng, 4 + static_cast<Eigen::Index>(rng.below(12)));
    auto b = similarity(a, 0.1 + rng.uniform() * 5, rng.uniform() * 6.3, rng.chance(0.5), rng.uniform() * 4 - 2,
                        rng.uniform() * 4 - 2);
    CHECK(procrustes(a, b) < 1e-9);
    CHECK(procrustes(b, a) < 1e-9);
  }
}

TEST_CASE("Procrustes of a configuration with itself is exactly zero", "[validation]") {
  synthetic::Rng rng(73);
  auto a = random_points(rng, 15);
  CHECK(procrustes(a, a) == 0.0);
}

TEST_CASE("Procrustes is bounded and symmetric", "[validation]") {
  synthetic::Rng rng(79);
  for (int t = 0; t < 25; ++t) {
    auto a = random_points(rng, 10);
    auto b = random_points(rng, 10);
    double d = procrustes(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK_THAT(d, Catch::Matchers::WithinAbs(procrustes(b, a), 1e-12));
  }
}

TEST_CASE("Procrustes errors and edge cases", "[validation]") {
  Eigen::MatrixXd a(3, 2), same(3, 2), shorter(2, 2);
  a << 0, 0, 1, 0, 0, 1;
  same.setConstant(0.5);
  shorter << 0, 0, 1, 1;
  CHECK(procrustes(a, same) == 1.0);
  CHECK_THROWS_AS(procrustes(a, shorter), Error);
  try {
    procrustes(same, a);
    FAIL("expected DegenerateConfiguration");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateConfiguration);
  }

  BiplotData x, y;
  x.points = {{"attacked", PointSide::Row, "response", 0, 0, 0}, {"short", PointSide::Column, "bowling", 1, 1, 0}};
  y.points = {{"attacked", PointSide::Row, "response", 0, 0, 0}, {"full", PointSide::Column, "bowling", 1, 1, 0}};
  CHECK_THROWS_AS(procrustes(x, y), Error);
  auto [p, q] = align_biplots(x, y);
  CHECK(p.points.size() == 1);
  CHECK(q.points.size() == 1);
}

TEST_CASE("commonality percentage", "[validation]") {
  std::vector<Rule> a{rule(BattingFeature::Attacked, {B::Short, B::Leg, B::Spin, B::Good})};
  std::vector<Rule> b{rule(BattingFeature::Attacked, {B::Short, B::Full, B::Spin, B::Leg})};
  std::vector<Rule> c{rule(BattingFeature::Attacked, {B::Off, B::Middle, B::Swing})};
  CHECK(rule_overlap(a, a) == 100.0);
  CHECK(rule_overlap(a, c) == 0.0);
  CHECK_THAT(rule_overlap(a, b), Catch::Matchers::WithinAbs(200.0 / 3.0, 1e-12));
  CHECK(rule_overlap(a, b, 4) == 75.0);
  CHECK(commonality(RulePairSet{{BattingFeature::Attacked, B::Short}}, {}) == 0.0);

  // Pairs are per anchor: the same feature under another anchor does not count.
  std::vector<Rule> beaten{rule(BattingFeature::Beaten, {B::Short, B::Leg, B::Spin})};
  CHECK(rule_overlap(a, beaten) == 0.0);

  std::vector<Rule> bowling{rule(BattingFeature::Beaten, {B::Short}, AnalysisType::Bowling)};
  CHECK_THROWS_AS(rule_overlap(a, bowling), Error);
  CHECK_THROWS_AS(rule_overlap(a, a, 0), Error);
}

TEST_CASE("rule pair files", "[validation]") {
  auto pairs = parse_rule_pairs({"# comment", "attacked\tshort", "", "beaten\tmove away"});
  CHECK(pairs == RulePairSet{{BattingFeature::Attacked, B::Short}, {BattingFeature::Beaten, B::MoveOut}});
  CHECK(format_rule_pairs(pairs) == "beaten\tmove-out\nattacked\tshort\n");
  CHECK_THROWS_AS(parse_rule_pairs({"attacked short"}), Error);
  CHECK_THROWS_AS(parse_rule_pairs({"attacks\tshort"}), Error);
}

TEST_CASE("holdout split by date", "[validation]") {
  std::vector<DeliveryRecord> recs;
  for (int i = 0; i < 7; ++i) recs.push_back(dated(Date(2016, 3, 1 + i)));
  for (int i = 0; i < 3; ++i) recs.push_back(dated(Date(2017, 4, 1 + i)));

  auto split = holdout_split(recs, Date(2017, 1, 1));
  CHECK(split.train.size() == 7);
  CHECK(split.test.size() == 3);

  auto by_default = holdout_split(recs);
  CHECK(by_default.cutoff == Date(2016, 4, 3));
  CHECK(by_default.train.size() == 7);
  CHECK(by_default.test.size() == 3);

  try {
    holdout_split(recs, Date(2020, 1, 1));
    FAIL("expected EmptySide");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySide);
  }
  CHECK_THROWS_AS(holdout_split(recs, Date(2000, 1, 1)), Error);
}

TEST_CASE("validation report on the committed fixture", "[validation]") {
  auto corpus = load_corpus(CRICKET_RULES_FIXTURE_DIR "/synthetic_corpus.tsv").corpus;
  auto lexicon = load_lexicon(default_lexicon_path());
  auto roster = load_roster(CRICKET_RULES_FIXTURE_DIR "/roster.tsv");
  AnalysisContext ctx{corpus, lexicon, roster};

  ValidationRequest request;
  request.analysis.player = "Alpha";
  auto report = run_validation(ctx, request);
  auto selected = filter_deliveries(corpus, request.analysis.to_filter(corpus)).records.size();
  CHECK(report.train_count + report.test_count == selected);
  CHECK(report.procrustes_delta >= 0.0);
  for (double cp : {report.cp_strength, report.cp_weakness, report.cp_overall}) {
    CHECK(cp >= 0.0);
    CHECK(cp <= 100.0);
  }
  CHECK(report.compared_points == 15);
  CHECK_FALSE(report.reference_cp);
}

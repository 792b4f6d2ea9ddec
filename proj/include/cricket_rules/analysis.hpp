#pragma once

// End-to-end pipeline shared by the CLI and the HTTP service: filter, count,
// correspondence analysis, rule mining, biplots, and their JSON documents.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cricket_rules/ca.hpp"
#include "cricket_rules/confrontation.hpp"
#include "cricket_rules/corpus.hpp"
#include "cricket_rules/lexicon.hpp"
#include "cricket_rules/rules.hpp"
#include "cricket_rules/validation.hpp"

namespace cricket_rules {

using Json = nlohmann::json;

/// Number rounded to 12 significant digits; keeps JSON output byte-stable.
inline Json json_number(double v) {
  if (v == 0.0 || !std::isfinite(v)) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double rounded = std::strtod(buf, nullptr);
  return rounded == 0.0 ? 0.0 : rounded;
}

/// Filter as requested by a caller; dates are optional on either side.
struct AnalysisRequest {
  std::string player;
  AnalysisType type = AnalysisType::Batting;
  std::string opponents = "all";
  std::optional<Date> from;
  std::optional<Date> to;
  std::vector<FeatureCategory> categories{kAllCategories.begin(), kAllCategories.end()};
  std::size_t top_k = 3;

  /// Open-ended ranges are closed with the corpus date range.
  FilterTuple to_filter(const Corpus& corpus) const {
    FilterTuple f;
    f.player = player;
    f.type = type;
    f.opponents = parse_opponents(opponents);
    if (from || to) {
      f.window = DateRange{from.value_or(corpus.date_range().from), to.value_or(corpus.date_range().to)};
    }
    if (top_k == 0) throw Error(ErrorCode::InvalidFilter, "top-k must be >= 1");
    f.validate();
    return f;
  }
};

/// Immutable inputs shared across requests.
struct AnalysisContext {
  const Corpus& corpus;
  const FeatureLexicon& lexicon;
  const Roster& roster;
};

struct Analysis {
  FilterTuple filter;
  std::size_t uncovered_opponents = 0;
  ConfrontationMatrix cm;
  CAResult ca;
  MinedRules rules;
  std::vector<Rule> others;
  std::vector<BiplotData> biplots;
};

/// CM → CA → rules for an already-selected record set.
inline Analysis analyze_records(std::span<const DeliveryRecord> records, const AnalysisContext& ctx,
                                const FilterTuple& filter,
                                std::span<const FeatureCategory> categories = kAllCategories) {
  Analysis a;
  a.filter = filter;
  a.cm = build_cm(records, ctx.lexicon, filter, ctx.corpus.digest());
  a.ca = correspondence_analysis(a.cm);
  a.rules = mine_rules(a.ca, filter.type);
  a.others = mine_other_rules(a.ca, filter.type);
  for (auto c : categories) a.biplots.push_back(biplot(a.ca, c));
  return a;
}

/// Throws UnknownPlayer, EmptySelection, AllZeroMatrix, RankZero.
inline Analysis run_analysis(const AnalysisContext& ctx, const FilterTuple& filter,
                             std::span<const FeatureCategory> categories = kAllCategories) {
  if (!ctx.corpus.has_player(filter.player))
    throw Error(ErrorCode::UnknownPlayer, "player '" + filter.player + "' not in corpus");
  auto selection = filter_deliveries(ctx.corpus, filter, ctx.roster);
  auto a = analyze_records(selection.records, ctx, filter, categories);
  a.uncovered_opponents = selection.uncovered_opponents;
  return a;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const FilterTuple& f) {
  return {{"player", f.player},
          {"type", std::string(name(f.type))},
          {"opponents", describe(f.opponents)},
          {"from", f.window ? Json(f.window->from.iso()) : Json(nullptr)},
          {"to", f.window ? Json(f.window->to.iso()) : Json(nullptr)}};
}

inline Json to_json(const Rule& rule, std::string_view player, std::size_t top_k) {
  Json ranked = Json::array();
  for (const auto& r : rule.ranked)
    ranked.push_back({{"feature", std::string(name(r.feature))}, {"score", json_number(r.score)}});
  Json top = Json::array();
  for (auto f : rule.top(top_k)) top.push_back(std::string(name(f)));
  return {{"kind", std::string(name(rule.kind))},
          {"analysis_type", std::string(name(rule.analysis_type))},
          {"anchor", std::string(name(rule.anchor))},
          {"category", std::string(name(rule.category))},
          {"ranked", ranked},
          {"top", top},
          {"summary", rule_sentence(rule, player, top_k)}};
}

inline Json to_json(const BiplotData& b) {
  Json points = Json::array();
  for (const auto& p : b.points)
    points.push_back({{"label", p.label},
                      {"side", p.side == PointSide::Row ? "row" : "column"},
                      {"category", p.category},
                      {"x", json_number(p.x)},
                      {"y", json_number(p.y)},
                      {"mass", json_number(p.mass)}});
  return {{"category", std::string(name(b.category))}, {"points", points}};
}

inline Json to_json(const ConfrontationMatrix& cm) {
  Json rows = Json::array(), cols = Json::array(), counts = Json::array();
  for (auto r : cm.rows) rows.push_back(std::string(name(r)));
  for (auto c : cm.cols) cols.push_back(std::string(name(c)));
  for (Eigen::Index i = 0; i < cm.counts.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < cm.counts.cols(); ++j) row.push_back(cm.counts(i, j));
    counts.push_back(row);
  }
  return {{"rows", rows}, {"columns", cols}, {"counts", counts}};
}

inline Json to_json(const CAResult& ca) {
  Json sv = Json::array();
  for (Eigen::Index k = 0; k < ca.singular_values.size(); ++k) sv.push_back(json_number(ca.singular_values(k)));
  return {{"rank", ca.rank()},
          {"padded", ca.padded},
          {"inertia", json_number(ca.inertia)},
          {"singular_values", sv},
          {"dropped_rows", ca.dropped_rows},
          {"dropped_columns", ca.dropped_cols}};
}

/// Self-contained response document for one analysis.
inline Json analysis_json(const Analysis& a, const AnalysisContext& ctx, std::size_t top_k) {
  const auto& player = a.filter.player;
  Json others = Json::array();
  for (const auto& r : a.others) others.push_back(to_json(r, player, top_k));
  Json biplots = Json::object();
  for (const auto& b : a.biplots) biplots[std::string(name(b.category))] = to_json(b);

  Json provenance = {{"filter", to_json(a.filter)},
                     {"corpus_digest", ctx.corpus.digest()},
                     {"cm_digest", a.cm.digest()},
                     {"lexicon_version", ctx.lexicon.version()},
                     {"n", a.cm.n},
                     {"records", a.cm.records},
                     {"records_without_bowling", a.cm.records_without_bowling},
                     {"uncovered_opponents", a.uncovered_opponents},
                     {"top_k", top_k}};
  return {{"provenance", provenance},
          {"confrontation_matrix", to_json(a.cm)},
          {"correspondence", to_json(a.ca)},
          {"rules",
           {{"strength", a.rules.strength ? to_json(*a.rules.strength, player, top_k) : Json(nullptr)},
            {"weakness", a.rules.weakness ? to_json(*a.rules.weakness, player, top_k) : Json(nullptr)},
            {"others", others}}},
          {"biplots", biplots}};
}

/// Serialised document: sorted keys, two-space indent, trailing newline.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

/// The one code path behind `analyze` and `GET /analysis`.
inline std::string analysis_response(const AnalysisContext& ctx, const AnalysisRequest& request) {
  auto filter = request.to_filter(ctx.corpus);
  auto a = run_analysis(ctx, filter, request.categories);
  return dump_json(analysis_json(a, ctx, request.top_k));
}

inline Json error_json(const Error& e) {
  return {{"error", {{"code", std::string(error_name(e.code()))}, {"message", e.what()}}}};
}

inline Json players_json(const Corpus& corpus) {
  Json players = Json::array();
  for (const auto& [player, pos] : corpus.player_index())
    players.push_back({{"name", player},
                       {"as_batsman", pos.as_batsman.size()},
                       {"as_bowler", pos.as_bowler.size()}});
  return {{"players", players}};
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationRequest {
  AnalysisRequest analysis;
  std::optional<Date> cutoff;
  std::size_t k = 3;
  FeatureCategory biplot_category = FeatureCategory::Response;
  std::optional<RulePairSet> reference;  // human-authored pairs
};

struct ValidationReport {
  FilterTuple filter;
  Date cutoff;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::size_t compared_points = 0;
  double procrustes_delta = 0.0;
  double cp_strength = 0.0;
  double cp_weakness = 0.0;
  double cp_overall = 0.0;
  std::size_t k = 3;
  FeatureCategory biplot_category = FeatureCategory::Response;
  std::optional<double> reference_cp;
  std::size_t reference_pairs = 0;
};

namespace detail {

inline std::vector<Rule> as_vector(const std::optional<Rule>& r) {
  return r ? std::vector<Rule>{*r} : std::vector<Rule>{};
}

inline std::vector<Rule> all_rules(const Analysis& a) {
  std::vector<Rule> out = as_vector(a.rules.strength);
  if (a.rules.weakness) out.push_back(*a.rules.weakness);
  out.insert(out.end(), a.others.begin(), a.others.end());
  return out;
}

}  // namespace detail

/// Commonality of reference (human) pairs with the top-k pairs of every
/// rule mined on the whole selection.
inline double reference_commonality(const Analysis& a, const RulePairSet& reference, std::size_t k) {
  auto mined = detail::all_rules(a);
  return commonality(top_pairs(mined, k), reference);
}

/// Holdout validation: train before the cutoff, test from it onwards.
inline ValidationReport run_validation(const AnalysisContext& ctx, const ValidationRequest& request) {
  auto filter = request.analysis.to_filter(ctx.corpus);
  if (!ctx.corpus.has_player(filter.player))
    throw Error(ErrorCode::UnknownPlayer, "player '" + filter.player + "' not in corpus");
  if (request.k == 0) throw Error(ErrorCode::InvalidFilter, "k must be >= 1");
  auto selection = filter_deliveries(ctx.corpus, filter, ctx.roster);
  auto split = holdout_split(selection.records, request.cutoff);

  const std::array<FeatureCategory, 1> category{request.biplot_category};
  auto train = analyze_records(split.train, ctx, filter, category);
  auto test = analyze_records(split.test, ctx, filter, category);

  ValidationReport report;
  report.filter = filter;
  report.cutoff = split.cutoff;
  report.train_count = split.train.size();
  report.test_count = split.test.size();
  report.k = request.k;
  report.biplot_category = request.biplot_category;

  auto [ref, moving] = align_biplots(train.biplots.front(), test.biplots.front());
  report.compared_points = ref.points.size();
  report.procrustes_delta = procrustes(ref, moving);

  auto strength_train = detail::as_vector(train.rules.strength);
  auto strength_test = detail::as_vector(test.rules.strength);
  auto weakness_train = detail::as_vector(train.rules.weakness);
  auto weakness_test = detail::as_vector(test.rules.weakness);
  report.cp_strength = rule_overlap(strength_train, strength_test, request.k);
  report.cp_weakness = rule_overlap(weakness_train, weakness_test, request.k);
  auto both_train = strength_train, both_test = strength_test;
  both_train.insert(both_train.end(), weakness_train.begin(), weakness_train.end());
  both_test.insert(both_test.end(), weakness_test.begin(), weakness_test.end());
  report.cp_overall = rule_overlap(both_train, both_test, request.k);

  if (request.reference) {
    auto full = analyze_records(selection.records, ctx, filter, category);
    report.reference_cp = reference_commonality(full, *request.reference, request.k);
    report.reference_pairs = request.reference->size();
  }
  return report;
}

inline Json to_json(const ValidationReport& r) {
  Json j = {{"filter", to_json(r.filter)},
            {"cutoff_date", r.cutoff.iso()},
            {"train_count", r.train_count},
            {"test_count", r.test_count},
            {"biplot_category", std::string(name(r.biplot_category))},
            {"compared_points", r.compared_points},
            {"procrustes_delta", json_number(r.procrustes_delta)},
            {"k", r.k},
            {"commonality_pct",
             {{"strength", json_number(r.cp_strength)},
              {"weakness", json_number(r.cp_weakness)},
              {"overall", json_number(r.cp_overall)}}}};
  if (r.reference_cp) {
    j["reference"] = {{"commonality_pct", json_number(*r.reference_cp)}, {"pairs", r.reference_pairs}};
  }
  return j;
}

inline std::string validation_response(const AnalysisContext& ctx, const ValidationRequest& request) {
  return dump_json(to_json(run_validation(ctx, request)));
}

}  // namespace cricket_rules

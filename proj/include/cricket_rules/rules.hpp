#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "cricket_rules/ca.hpp"
#include "cricket_rules/error.hpp"
#include "cricket_rules/features.hpp"

namespace cricket_rules {

enum class RuleKind : std::uint8_t { Strength, Weakness, Other };

inline std::string_view name(RuleKind k) {
  switch (k) {
    case RuleKind::Strength: return "strength";
    case RuleKind::Weakness: return "weakness";
    case RuleKind::Other: return "other";
  }
  return "";
}

struct RankedFeature {
  BowlingFeature feature;
  double score = 0.0;  // ⟨F′_anchor, G′_feature⟩

  friend bool operator==(const RankedFeature&, const RankedFeature&) = default;
};

/// A batting-feature anchor with every observed bowling feature ranked by
/// its inner product with the anchor in the first two CA dimensions.
struct Rule {
  RuleKind kind = RuleKind::Other;
  AnalysisType analysis_type = AnalysisType::Batting;
  BattingFeature anchor = BattingFeature::Attacked;
  FeatureCategory category = FeatureCategory::Response;
  std::vector<RankedFeature> ranked;

  std::vector<BowlingFeature> top(std::size_t k) const {
    std::vector<BowlingFeature> out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(ranked[i].feature);
    return out;
  }

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Strength anchor: batsman attacking (batting) / batsman beaten (bowling).
inline BattingFeature strength_anchor(AnalysisType t) {
  return t == AnalysisType::Batting ? BattingFeature::Attacked : BattingFeature::Beaten;
}

inline BattingFeature weakness_anchor(AnalysisType t) {
  return t == AnalysisType::Batting ? BattingFeature::Beaten : BattingFeature::Attacked;
}

namespace detail {

inline Rule rank_against(const CAResult& ca, BattingFeature anchor, RuleKind kind,
                         AnalysisType type) {
  auto row = ca.row_index(name(anchor));
  if (!row)
    throw Error(ErrorCode::AnchorUnobserved,
                "batting feature '" + std::string(name(anchor)) + "' has no observations");
  Rule rule;
  rule.kind = kind;
  rule.analysis_type = type;
  rule.anchor = anchor;
  rule.category = category_of(anchor);

  const Eigen::RowVector2d f = ca.F2.row(*row);
  for (std::size_t j = 0; j < ca.col_labels.size(); ++j) {
    auto feature = parse_bowling_feature(ca.col_labels[j]);
    if (!feature)
      throw Error(ErrorCode::DegenerateMatrix, "column '" + ca.col_labels[j] + "' is not a bowling feature");
    const Eigen::RowVector2d g = ca.G2.row(static_cast<Eigen::Index>(j));
    rule.ranked.push_back({*feature, f.dot(g)});
  }
  // Canonical order first, then a stable sort by score: ties keep canonical order.
  std::sort(rule.ranked.begin(), rule.ranked.end(),
            [](const RankedFeature& a, const RankedFeature& b) { return a.feature < b.feature; });
  std::stable_sort(rule.ranked.begin(), rule.ranked.end(),
                   [](const RankedFeature& a, const RankedFeature& b) { return a.score > b.score; });
  return rule;
}

inline void require_rank(const CAResult& ca) {
  if (ca.rank_zero)
    throw Error(ErrorCode::RankZero, "no association between batting and bowling features to mine");
}

}  // namespace detail

/// One rule of the given kind. Throws RankZero or AnchorUnobserved.
inline Rule mine_rule(const CAResult& ca, AnalysisType type, RuleKind kind) {
  detail::require_rank(ca);
  const BattingFeature anchor =
      kind == RuleKind::Strength ? strength_anchor(type) : weakness_anchor(type);
  return detail::rank_against(ca, anchor, kind, type);
}

struct MinedRules {
  std::optional<Rule> strength;
  std::optional<Rule> weakness;
};

/// Strength and weakness rules; a kind whose anchor row was dropped is
/// absent. Throws RankZero.
inline MinedRules mine_rules(const CAResult& ca, AnalysisType type) {
  detail::require_rank(ca);
  MinedRules out;
  for (auto kind : {RuleKind::Strength, RuleKind::Weakness}) {
    try {
      auto rule = mine_rule(ca, type, kind);
      (kind == RuleKind::Strength ? out.strength : out.weakness) = std::move(rule);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AnchorUnobserved) throw;
    }
  }
  return out;
}

/// One rule per observed batting feature other than attacked and beaten,
/// in canonical feature order. Throws RankZero.
inline std::vector<Rule> mine_other_rules(const CAResult& ca, AnalysisType type) {
  detail::require_rank(ca);
  std::vector<Rule> out;
  for (std::size_t i = 0; i < kBattingFeatureCount; ++i) {
    auto f = static_cast<BattingFeature>(i);
    if (f == BattingFeature::Attacked || f == BattingFeature::Beaten) continue;
    if (!ca.row_index(name(f))) continue;
    out.push_back(detail::rank_against(ca, f, RuleKind::Other, type));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sentences

namespace detail {

inline std::string anchor_verb(BattingFeature a, bool plural) {
  switch (a) {
    case BattingFeature::Attacked: return plural ? "attack" : "attacks";
    case BattingFeature::Beaten: return plural ? "get beaten on" : "gets beaten on";
    case BattingFeature::Defended: return plural ? "defend" : "defends";
    case BattingFeature::Out: return plural ? "get out on" : "gets out on";
    case BattingFeature::FrontFoot: return plural ? "play on the front foot to" : "plays on the front foot to";
    case BattingFeature::BackFoot: return plural ? "play on the back foot to" : "plays on the back foot to";
    default: break;
  }
  if (category_of(a) == FeatureCategory::Outcome) {
    const auto runs = std::string(name(a)).substr(0, 1);
    return std::string(plural ? "score " : "scores ") + runs + (runs == "1" ? " run on" : " runs on");
  }
  return std::string(plural ? "play towards " : "plays towards ") + std::string(name(a)) + " from";
}

inline std::string join_or(const std::vector<BowlingFeature>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += items.size() == 2 ? " or " : (i + 1 == items.size() ? ", or " : ", ");
    out += name(items[i]);
  }
  return out;
}

}  // namespace detail

/// "<player> attacks short, slow, or middle deliveries" (batting) or
/// "Batsmen attack <player>'s full deliveries" (bowling).
inline std::string rule_sentence(const Rule& rule, std::string_view player, std::size_t top_k) {
  const auto features = detail::join_or(rule.top(top_k));
  if (rule.analysis_type == AnalysisType::Batting)
    return std::string(player) + ' ' + detail::anchor_verb(rule.anchor, false) + ' ' + features +
           " deliveries";
  return "Batsmen " + detail::anchor_verb(rule.anchor, true) + ' ' + std::string(player) + "'s " +
         features + " deliveries";
}

// ---------------------------------------------------------------------------
// Biplots

enum class PointSide : std::uint8_t { Row, Column };

struct BiplotPoint {
  std::string label;
  PointSide side = PointSide::Row;
  std::string category;  // batting category, or "bowling" for column points
  double x = 0.0;
  double y = 0.0;
  double mass = 0.0;
};

/// Row points of one batting category plus every retained bowling column,
/// taken verbatim from the full-table CA.
struct BiplotData {
  FeatureCategory category = FeatureCategory::Response;
  std::vector<BiplotPoint> points;

  std::size_t row_count() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(),
                                                  [](const auto& p) { return p.side == PointSide::Row; }));
  }
  std::size_t column_count() const { return points.size() - row_count(); }
};

inline BiplotData biplot(const CAResult& ca, FeatureCategory category) {
  BiplotData out;
  out.category = category;
  for (std::size_t i = 0; i < kBattingFeatureCount; ++i) {
    auto f = static_cast<BattingFeature>(i);
    if (category_of(f) != category) continue;
    auto row = ca.row_index(name(f));
    if (!row) continue;
    out.points.push_back({std::string(name(f)), PointSide::Row, std::string(name(category)),
                          ca.F2(*row, 0), ca.F2(*row, 1), ca.row_masses(*row)});
  }
  for (std::size_t j = 0; j < ca.col_labels.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    out.points.push_back({ca.col_labels[j], PointSide::Column, "bowling", ca.G2(col, 0),
                          ca.G2(col, 1), ca.col_masses(col)});
  }
  return out;
}

/// Point matrix (one row per point, columns x and y) and matching labels.
inline Eigen::MatrixX2d biplot_coordinates(const BiplotData& b) {
  Eigen::MatrixX2d m(static_cast<Eigen::Index>(b.points.size()), 2);
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = b.points[i].x;
    m(static_cast<Eigen::Index>(i), 1) = b.points[i].y;
  }
  return m;
}

/// Static SVG scatter: dimension 1 horizontal, dimension 2 vertical; row
/// points are circles, column points are squares, all labelled.
inline std::string render_biplot_svg(const BiplotData& b, std::string_view title = {}) {
  constexpr double kSize = 520.0, kMargin = 60.0;
  double extent = 1e-9;
  for (const auto& p : b.points) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  extent *= 1.1;
  const double half = (kSize - 2 * kMargin) / 2;
  auto sx = [&](double x) { return kSize / 2 + x / extent * half; };
  auto sy = [&](double y) { return kSize / 2 - y / extent * half; };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  auto escape = [](std::string_view s) {
    std::string out;
    for (char ch : s) {
      if (ch == '&') out += "&amp;";
      else if (ch == '<') out += "&lt;";
      else if (ch == '>') out += "&gt;";
      else if (ch == '"') out += "&quot;";
      else out += ch;
    }
    return out;
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kSize) + "\" height=\"" +
                    fmt(kSize) + "\" viewBox=\"0 0 " + fmt(kSize) + " " + fmt(kSize) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kSize / 2) + "\" x2=\"" + fmt(kSize - kMargin) +
         "\" y2=\"" + fmt(kSize / 2) + "\" stroke=\"#999\"/>\n";
  svg += "<line x1=\"" + fmt(kSize / 2) + "\" y1=\"" + fmt(kMargin) + "\" x2=\"" + fmt(kSize / 2) +
         "\" y2=\"" + fmt(kSize - kMargin) + "\" stroke=\"#999\"/>\n";
  svg += "<text x=\"" + fmt(kSize - kMargin) + "\" y=\"" + fmt(kSize / 2 + 16) +
         "\" font-size=\"11\" text-anchor=\"end\">Dimension 1</text>\n";
  svg += "<text x=\"" + fmt(kSize / 2 + 6) + "\" y=\"" + fmt(kMargin - 6) +
         "\" font-size=\"11\">Dimension 2</text>\n";
  const std::string heading = title.empty() ? std::string(name(b.category)) : std::string(title);
  svg += "<text x=\"" + fmt(kSize / 2) + "\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">" +
         escape(heading) + "</text>\n";
  for (const auto& p : b.points) {
    const double x = sx(p.x), y = sy(p.y);
    if (p.side == PointSide::Row)
      svg += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"5\" fill=\"#1f77b4\"/>\n";
    else
      svg += "<rect x=\"" + fmt(x - 4) + "\" y=\"" + fmt(y - 4) +
             "\" width=\"8\" height=\"8\" fill=\"#d62728\"/>\n";
    svg += "<text x=\"" + fmt(x + 7) + "\" y=\"" + fmt(y - 7) + "\" font-size=\"11\">" + escape(p.label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace cricket_rules

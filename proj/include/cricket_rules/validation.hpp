#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cricket_rules/confrontation.hpp"
#include "cricket_rules/error.hpp"
#include "cricket_rules/rules.hpp"
#include "cricket_rules/svd.hpp"

namespace cricket_rules {

// ---------------------------------------------------------------------------
// Date-based holdout

struct HoldoutSplit {
  std::vector<DeliveryRecord> train;  // date < cutoff
  std::vector<DeliveryRecord> test;   // date >= cutoff
  Date cutoff;
};

/// Default cutoff: one year before the latest date in `records`.
inline Date default_cutoff(std::span<const DeliveryRecord> records) {
  Date latest = records.front().date;
  for (const auto& r : records) latest = std::max(latest, r.date);
  return latest.minus_years(1);
}

/// Splits filtered records by date. Throws EmptySide.
inline HoldoutSplit holdout_split(std::span<const DeliveryRecord> records,
                                  std::optional<Date> cutoff = std::nullopt) {
  if (records.empty()) throw Error(ErrorCode::EmptySide, "no records to split");
  HoldoutSplit out;
  out.cutoff = cutoff ? *cutoff : default_cutoff(records);
  for (const auto& r : records) (r.date < out.cutoff ? out.train : out.test).push_back(r);
  if (out.train.empty() || out.test.empty())
    throw Error(ErrorCode::EmptySide, "cutoff " + out.cutoff.iso() + " leaves " +
                                          std::to_string(out.train.size()) + " train / " +
                                          std::to_string(out.test.size()) + " test records");
  return out;
}

inline HoldoutSplit holdout_split(const Corpus& corpus, const FilterTuple& filter,
                                  std::optional<Date> cutoff = std::nullopt,
                                  const Roster& roster = {}) {
  auto selection = filter_deliveries(corpus, filter, roster);
  return holdout_split(selection.records, cutoff);
}

// ---------------------------------------------------------------------------
// Procrustes

/// Residual sum of squares after the best similarity superimposition
/// (translation, uniform scale, rotation or reflection) of `moving` onto
/// `reference`, divided by the reference's total sum of squares about its
/// centroid. Result lies in [0, 1]; identical configurations give exactly 0.
///
/// Throws LabelMismatch for differing shapes or fewer than two points and
/// DegenerateConfiguration when every reference point coincides.
inline double procrustes(const Eigen::MatrixXd& reference, const Eigen::MatrixXd& moving) {
  if (reference.rows() != moving.rows() || reference.cols() != moving.cols())
    throw Error(ErrorCode::LabelMismatch, "configurations differ in shape");
  if (reference.rows() < 2) throw Error(ErrorCode::LabelMismatch, "need at least two points");
  if (reference == moving) return 0.0;

  const Eigen::MatrixXd a = reference.rowwise() - reference.colwise().mean();
  const Eigen::MatrixXd b = moving.rowwise() - moving.colwise().mean();
  const double ss_a = a.squaredNorm();
  const double ss_b = b.squaredNorm();
  if (!(ss_a > 0.0))
    throw Error(ErrorCode::DegenerateConfiguration, "reference points all coincide");
  if (!(ss_b > 0.0)) return 1.0;

  const double trace = jacobi_svd(a.transpose() * b).sigma.sum();
  const double delta = 1.0 - (trace * trace) / (ss_a * ss_b);
  return std::clamp(delta, 0.0, 1.0);
}

/// Label-checked variant over biplots.
inline double procrustes(const BiplotData& reference, const BiplotData& moving) {
  if (reference.points.size() != moving.points.size())
    throw Error(ErrorCode::LabelMismatch, "biplots have different point counts");
  for (std::size_t i = 0; i < reference.points.size(); ++i)
    if (reference.points[i].label != moving.points[i].label ||
        reference.points[i].side != moving.points[i].side)
      throw Error(ErrorCode::LabelMismatch, "point " + std::to_string(i) + ": '" +
                                                reference.points[i].label + "' vs '" +
                                                moving.points[i].label + "'");
  return procrustes(Eigen::MatrixXd(biplot_coordinates(reference)),
                    Eigen::MatrixXd(biplot_coordinates(moving)));
}

/// Restricts two biplots to the points present in both, keeping the
/// reference order.
inline std::pair<BiplotData, BiplotData> align_biplots(const BiplotData& a, const BiplotData& b) {
  std::pair<BiplotData, BiplotData> out;
  out.first.category = a.category;
  out.second.category = b.category;
  for (const auto& p : a.points) {
    auto it = std::find_if(b.points.begin(), b.points.end(), [&](const BiplotPoint& q) {
      return q.label == p.label && q.side == p.side;
    });
    if (it == b.points.end()) continue;
    out.first.points.push_back(p);
    out.second.points.push_back(*it);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rule commonality

using RulePair = std::pair<BattingFeature, BowlingFeature>;
using RulePairSet = std::set<RulePair>;

/// (anchor, feature) pairs for the top-k features of each rule.
inline RulePairSet top_pairs(std::span<const Rule> rules, std::size_t k) {
  RulePairSet out;
  for (const auto& rule : rules)
    for (auto f : rule.top(k)) out.emplace(rule.anchor, f);
  return out;
}

/// 100 · |reference ∩ candidate| / |reference|; 0 when the reference is empty.
inline double commonality(const RulePairSet& candidate, const RulePairSet& reference) {
  if (reference.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& p : reference) common += candidate.contains(p) ? 1 : 0;
  return 100.0 * static_cast<double>(common) / static_cast<double>(reference.size());
}

/// Commonality percentage of train-side top-k pairs over the test side.
inline double rule_overlap(std::span<const Rule> train, std::span<const Rule> test, std::size_t k = 3) {
  if (k == 0) throw Error(ErrorCode::InvalidFilter, "k must be >= 1");
  std::optional<AnalysisType> type;
  for (auto side : {train, test})
    for (const auto& r : side) {
      if (type && *type != r.analysis_type)
        throw Error(ErrorCode::InvalidFilter, "rules mix batting and bowling analyses");
      type = r.analysis_type;
    }
  return commonality(top_pairs(train, k), top_pairs(test, k));
}

/// Human-authored rule file: `anchor <TAB> bowling-feature` per line,
/// '#' comments.
inline RulePairSet parse_rule_pairs(const std::vector<std::string>& lines) {
  RulePairSet out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto fields = text::split(line, '\t');
    auto where = "rule file line " + std::to_string(i + 1) + ": ";
    if (fields.size() != 2) throw Error(ErrorCode::InvalidFilter, where + "expected 'anchor<TAB>bowling-feature'");
    auto anchor = parse_batting_feature(text::trim(fields[0]));
    auto feature = parse_bowling_feature(text::trim(fields[1]));
    if (!anchor) throw Error(ErrorCode::InvalidFilter, where + "unknown batting feature '" + std::string(fields[0]) + "'");
    if (!feature) throw Error(ErrorCode::InvalidFilter, where + "unknown bowling feature '" + std::string(fields[1]) + "'");
    out.emplace(*anchor, *feature);
  }
  return out;
}

inline RulePairSet load_rule_pairs(const std::string& path) {
  return parse_rule_pairs(detail::read_lines(path));
}

inline std::string format_rule_pairs(const RulePairSet& pairs) {
  std::string out;
  for (const auto& [a, b] : pairs) {
    out += name(a);
    out += '\t';
    out += name(b);
    out += '\n';
  }
  return out;
}

}  // namespace cricket_rules

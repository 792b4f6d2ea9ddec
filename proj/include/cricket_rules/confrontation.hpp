#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cricket_rules/corpus.hpp"
#include "cricket_rules/error.hpp"
#include "cricket_rules/features.hpp"
#include "cricket_rules/lexicon.hpp"

namespace cricket_rules {

enum class BowlerClass : std::uint8_t { Fast, Spin };

inline std::string_view name(BowlerClass c) { return c == BowlerClass::Fast ? "fast" : "spin"; }

struct AllOpponents {
  friend bool operator==(AllOpponents, AllOpponents) { return true; }
};

using PlayerSet = std::set<std::string, std::less<>>;

/// Who the player is confronted with: everyone, an explicit set of
/// players, or every bowler of one class.
using Opponents = std::variant<AllOpponents, PlayerSet, BowlerClass>;

inline bool is_bowler_class(const Opponents& o) { return std::holds_alternative<BowlerClass>(o); }

/// "all", "fast", "spin", or a comma-separated list of player identifiers.
inline Opponents parse_opponents(std::string_view spec) {
  auto trimmed = text::trim(spec);
  if (trimmed.empty() || trimmed == "all") return AllOpponents{};
  if (trimmed == "fast") return BowlerClass::Fast;
  if (trimmed == "spin") return BowlerClass::Spin;
  PlayerSet players;
  for (auto part : text::split(trimmed, ','))
    if (auto p = text::trim(part); !p.empty()) players.emplace(p);
  if (players.empty()) throw Error(ErrorCode::InvalidFilter, "empty opponent list");
  return players;
}

inline std::string describe(const Opponents& o) {
  if (std::holds_alternative<AllOpponents>(o)) return "all";
  if (auto* c = std::get_if<BowlerClass>(&o)) return std::string(name(*c));
  std::string out;
  for (const auto& p : std::get<PlayerSet>(o)) {
    if (!out.empty()) out += ',';
    out += p;
  }
  return out;
}

/// Finer time granularity than a date range (innings, day, session,
/// over span). Unset fields match everything.
struct PhaseFilter {
  std::optional<int> innings;
  std::optional<int> day;
  std::optional<int> session;
  std::optional<int> over_from;
  std::optional<int> over_to;

  bool matches(const DeliveryRecord& r) const {
    if (innings && r.innings != *innings) return false;
    if (day && r.day != day) return false;
    if (session && r.session != session) return false;
    if (over_from && r.over < *over_from) return false;
    if (over_to && r.over > *over_to) return false;
    return true;
  }
  friend bool operator==(const PhaseFilter&, const PhaseFilter&) = default;
};

/// ⟨player, opponents, time, type⟩ selector.
struct FilterTuple {
  std::string player;
  Opponents opponents = AllOpponents{};
  std::optional<DateRange> window;  // nullopt = career
  AnalysisType type = AnalysisType::Batting;
  PhaseFilter phase;

  void validate() const {
    if (player.empty()) throw Error(ErrorCode::InvalidFilter, "player must be non-empty");
    if (window && !window->ordered())
      throw Error(ErrorCode::InvalidFilter, "date range " + window->from.iso() + ".." +
                                                window->to.iso() + " is not ordered");
    if (is_bowler_class(opponents) && type == AnalysisType::Bowling)
      throw Error(ErrorCode::InvalidFilter,
                  "bowler-class opponents apply to batting analysis only");
  }

  std::string window_text() const {
    return window ? window->from.iso() + ".." + window->to.iso() : "career";
  }

  friend bool operator==(const FilterTuple&, const FilterTuple&) = default;
};

using Roster = std::map<std::string, BowlerClass, std::less<>>;

/// Roster file: `player <TAB> fast|spin`, '#' comments.
inline Roster parse_roster(const std::vector<std::string>& lines) {
  Roster roster;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto fields = text::split(line, '\t');
    auto cls = fields.size() == 2 ? text::trim(fields[1]) : std::string_view{};
    if (fields.size() != 2 || (cls != "fast" && cls != "spin"))
      throw Error(ErrorCode::InvalidFilter,
                  "roster line " + std::to_string(i + 1) + ": expected 'player<TAB>fast|spin'");
    roster[std::string(text::trim(fields[0]))] = cls == "fast" ? BowlerClass::Fast : BowlerClass::Spin;
  }
  return roster;
}

inline Roster load_roster(const std::string& path) { return parse_roster(detail::read_lines(path)); }

struct Selection {
  std::vector<DeliveryRecord> records;
  /// Records skipped because the opponent bowler is missing from the roster.
  std::size_t uncovered_opponents = 0;
};

/// Records matching `filter`, in corpus order. Throws EmptySelection.
inline Selection filter_deliveries(const Corpus& corpus, const FilterTuple& filter,
                                   const Roster& roster = {}) {
  filter.validate();
  Selection out;
  const auto* positions = corpus.positions(filter.player);
  if (positions) {
    const bool batting = filter.type == AnalysisType::Batting;
    for (auto i : batting ? positions->as_batsman : positions->as_bowler) {
      const auto& r = corpus[i];
      const std::string& opponent = batting ? r.bowler : r.batsman;
      if (filter.window && !filter.window->contains(r.date)) continue;
      if (!filter.phase.matches(r)) continue;
      if (auto* players = std::get_if<PlayerSet>(&filter.opponents)) {
        if (!players->contains(opponent)) continue;
      } else if (auto* cls = std::get_if<BowlerClass>(&filter.opponents)) {
        auto it = roster.find(opponent);
        if (it == roster.end()) {
          ++out.uncovered_opponents;
          continue;
        }
        if (it->second != *cls) continue;
      }
      out.records.push_back(r);
    }
  }
  if (out.records.empty())
    throw Error(ErrorCode::EmptySelection, "no deliveries match " + filter.player + " (" +
                                               std::string(name(filter.type)) + ", opponents " +
                                               describe(filter.opponents) + ", " +
                                               filter.window_text() + ")");
  return out;
}

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Labelled count table; the generic input to correspondence analysis.
struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  CountMatrix counts;
};

/// Batting-feature × bowling-feature co-occurrence counts.
struct ConfrontationMatrix {
  std::vector<BattingFeature> rows;
  std::vector<BowlingFeature> cols;
  CountMatrix counts;
  std::int64_t n = 0;

  FilterTuple filter;
  std::string corpus_digest;
  std::size_t records = 0;
  /// Records that produced no bowling feature and so contributed nothing.
  std::size_t records_without_bowling = 0;

  std::int64_t at(BattingFeature a, BowlingFeature b) const {
    auto row = std::find(rows.begin(), rows.end(), a);
    auto col = std::find(cols.begin(), cols.end(), b);
    if (row == rows.end() || col == cols.end()) return 0;
    return counts(row - rows.begin(), col - cols.begin());
  }

  ContingencyTable table() const {
    ContingencyTable t;
    for (auto r : rows) t.row_labels.emplace_back(name(r));
    for (auto c : cols) t.col_labels.emplace_back(name(c));
    t.counts = counts;
    return t;
  }

  /// FNV-1a over labels and counts.
  std::string digest() const {
    text::Fnv1a h;
    for (auto c : cols) {
      h.update(name(c));
      h.update("\t");
    }
    for (Eigen::Index i = 0; i < counts.rows(); ++i)
      for (Eigen::Index j = 0; j < counts.cols(); ++j) {
        h.update(std::to_string(counts(i, j)));
        h.update(",");
      }
    return h.hex();
  }
};

/// Column set for a filter: all twelve, or eight when the opponents are a
/// bowler class (fast/slow/spin/swing carry no information then).
inline std::vector<BowlingFeature> cm_columns(const FilterTuple& filter) {
  std::vector<BowlingFeature> cols;
  for (std::size_t j = 0; j < kBowlingFeatureCount; ++j) {
    auto f = static_cast<BowlingFeature>(j);
    if (is_bowler_class(filter.opponents) && is_bowler_type_feature(f)) continue;
    cols.push_back(f);
  }
  return cols;
}

/// Every (bat, bowl) pair of each record increments its cell. For bowling
/// analysis the rows are the opposing batsmen's features. Throws
/// EmptySelection for no records and AllZeroMatrix when nothing pairs up.
inline ConfrontationMatrix build_cm(std::span<const DeliveryRecord> records,
                                    const FeatureLexicon& lexicon, const FilterTuple& filter,
                                    std::string corpus_digest = {}) {
  if (records.empty()) throw Error(ErrorCode::EmptySelection, "no records to count");
  ConfrontationMatrix cm;
  for (std::size_t i = 0; i < kBattingFeatureCount; ++i)
    cm.rows.push_back(static_cast<BattingFeature>(i));
  cm.cols = cm_columns(filter);
  cm.counts = CountMatrix::Zero(static_cast<Eigen::Index>(cm.rows.size()),
                                static_cast<Eigen::Index>(cm.cols.size()));
  cm.filter = filter;
  cm.corpus_digest = std::move(corpus_digest);
  cm.records = records.size();

  std::array<int, kBowlingFeatureCount> column_of{};
  column_of.fill(-1);
  for (std::size_t j = 0; j < cm.cols.size(); ++j) column_of[index_of(cm.cols[j])] = static_cast<int>(j);

  for (const auto& record : records) {
    auto match = features_of(record, lexicon);
    bool contributed = false;
    for (auto b : match.bowl.items()) {
      int j = column_of[index_of(b)];
      if (j < 0) continue;
      for (auto a : match.bat.items()) {
        ++cm.counts(static_cast<Eigen::Index>(index_of(a)), j);
        ++cm.n;
        contributed = true;
      }
    }
    if (!contributed) ++cm.records_without_bowling;
  }
  if (cm.n == 0)
    throw Error(ErrorCode::AllZeroMatrix, "none of " + std::to_string(records.size()) +
                                              " records produced a batting/bowling pair");
  return cm;
}

// ---------------------------------------------------------------------------
// Text export: `#` provenance lines, a header row of bowling features, then
// one `<batting feature> <TAB> counts...` line per row.

inline void write_cm(std::ostream& out, const ConfrontationMatrix& cm) {
  out << "# player: " << cm.filter.player << '\n'
      << "# opponents: " << describe(cm.filter.opponents) << '\n'
      << "# window: " << cm.filter.window_text() << '\n'
      << "# type: " << name(cm.filter.type) << '\n'
      << "# corpus: " << cm.corpus_digest << '\n'
      << "# records: " << cm.records << '\n'
      << "# records_without_bowling: " << cm.records_without_bowling << '\n'
      << "# n: " << cm.n << '\n';
  for (std::size_t j = 0; j < cm.cols.size(); ++j) out << (j ? "\t" : "") << name(cm.cols[j]);
  out << '\n';
  for (std::size_t i = 0; i < cm.rows.size(); ++i) {
    out << name(cm.rows[i]);
    for (std::size_t j = 0; j < cm.cols.size(); ++j)
      out << '\t' << cm.counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    out << '\n';
  }
}

inline std::string cm_to_string(const ConfrontationMatrix& cm) {
  std::ostringstream os;
  write_cm(os, cm);
  return os.str();
}

/// Reads a matrix written by write_cm. Provenance is restored where present.
inline ConfrontationMatrix parse_cm(const std::vector<std::string>& lines) {
  ConfrontationMatrix cm;
  bool header_seen = false;
  auto bad = [](std::size_t line, const std::string& msg) {
    return Error(ErrorCode::DegenerateMatrix, "matrix line " + std::to_string(line) + ": " + msg);
  };
  std::vector<std::vector<std::int64_t>> values;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (text::trim(line).empty()) continue;
    if (line.front() == '#') {
      auto colon = line.find(':');
      if (colon == std::string_view::npos) continue;
      auto key = text::trim(line.substr(1, colon - 1));
      auto value = std::string(text::trim(line.substr(colon + 1)));
      if (key == "player") cm.filter.player = value;
      else if (key == "opponents") cm.filter.opponents = parse_opponents(value);
      else if (key == "type") cm.filter.type = parse_analysis_type(value).value_or(AnalysisType::Batting);
      else if (key == "corpus") cm.corpus_digest = value;
      else if (key == "records") cm.records = text::parse_int<std::size_t>(value).value_or(0);
      else if (key == "records_without_bowling")
        cm.records_without_bowling = text::parse_int<std::size_t>(value).value_or(0);
      else if (key == "window" && value != "career") {
        auto dots = value.find("..");
        auto from = Date::parse(value.substr(0, dots));
        auto to = dots == std::string::npos ? std::nullopt : Date::parse(value.substr(dots + 2));
        if (!from || !to) throw bad(i + 1, "bad window '" + value + "'");
        cm.filter.window = DateRange{*from, *to};
      }
      continue;
    }
    auto fields = text::split(line, '\t');
    if (!header_seen) {
      for (auto f : fields) {
        auto b = parse_bowling_feature(f);
        if (!b) throw bad(i + 1, "unknown bowling feature '" + std::string(f) + "'");
        cm.cols.push_back(*b);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != cm.cols.size() + 1) throw bad(i + 1, "wrong column count");
    auto a = parse_batting_feature(fields[0]);
    if (!a) throw bad(i + 1, "unknown batting feature '" + std::string(fields[0]) + "'");
    cm.rows.push_back(*a);
    auto& row = values.emplace_back();
    for (std::size_t j = 1; j < fields.size(); ++j) {
      auto v = text::parse_int<std::int64_t>(fields[j]);
      if (!v || *v < 0) throw bad(i + 1, "count must be a non-negative integer");
      row.push_back(*v);
    }
  }
  cm.counts = CountMatrix::Zero(static_cast<Eigen::Index>(cm.rows.size()),
                                static_cast<Eigen::Index>(cm.cols.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values[i].size(); ++j) {
      cm.counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i][j];
      cm.n += values[i][j];
    }
  return cm;
}

inline ConfrontationMatrix load_cm(const std::string& path) { return parse_cm(detail::read_lines(path)); }

}  // namespace cricket_rules

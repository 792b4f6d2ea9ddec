#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cricket_rules/date.hpp"
#include "cricket_rules/error.hpp"
#include "cricket_rules/features.hpp"
#include "cricket_rules/text.hpp"

namespace cricket_rules {

/// One ball of commentary.
struct DeliveryRecord {
  std::string match_id;
  Date date;
  int innings = 1;
  std::optional<int> day;
  std::optional<int> session;
  int over = 0;
  int ball_in_over = 1;
  std::string bowler;
  std::string batsman;
  Outcome outcome = Outcome::Runs0;
  std::optional<std::string> dismissal_kind;
  std::optional<double> speed_kph;
  std::optional<std::string> short_text;
  std::string text;

  friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
};

/// Header fields recognised at the start of a commentary line.
struct StructuredHeader {
  int over = 0;
  int ball_in_over = 1;
  std::string bowler;
  std::string batsman;
  Outcome outcome = Outcome::Runs0;
  std::optional<double> speed_kph;
  std::string remainder;
};

struct HeaderParse {
  std::optional<StructuredHeader> header;
  std::string error;
  std::size_t column = 0;  // 1-based offset of the offending segment
};

inline std::string_view outcome_token(Outcome o) {
  static constexpr std::string_view kTokens[] = {"0", "1", "2", "3", "4", "5", "6", "out"};
  return kTokens[index_of(o)];
}

inline std::optional<Outcome> parse_outcome_token(std::string_view s) {
  if (s == "out") return Outcome::Out;
  if (s.size() == 1 && s[0] >= '0' && s[0] <= '6') return static_cast<Outcome>(s[0] - '0');
  return std::nullopt;
}

/// Normalises the commentary outcome phrase: "FOUR", "SIX", "OUT",
/// "no run", "<d> run(s)" with d in 0..6. Anything else (wides, byes,
/// no-balls) is unrecognised.
inline std::optional<Outcome> parse_outcome_phrase(std::string_view phrase) {
  const std::string s = text::lower_ascii(text::trim(phrase));
  if (s == "four") return Outcome::Runs4;
  if (s == "six") return Outcome::Runs6;
  if (s == "out") return Outcome::Out;
  if (s == "no run" || s == "no runs") return Outcome::Runs0;
  if (s.size() >= 5 && s[0] >= '0' && s[0] <= '6' && s[1] == ' ') {
    auto unit = std::string_view(s).substr(2);
    if (unit == "run" || unit == "runs") return static_cast<Outcome>(s[0] - '0');
  }
  return std::nullopt;
}

/// Non-throwing header parse; see parse_structured.
inline HeaderParse try_parse_structured(std::string_view line) {
  HeaderParse result;
  auto fail = [&](std::size_t column, std::string message) {
    while (column < line.size() && line[column] == ' ') ++column;
    result.column = column + 1;
    result.error = "column " + std::to_string(column + 1) + ": " + message;
    return result;
  };

  StructuredHeader h;
  std::size_t pos = 0;

  auto c1 = line.find(',');
  if (c1 == std::string_view::npos) return fail(0, "missing ',' after over.ball");
  auto over_ball = text::trim(line.substr(0, c1));
  auto dot = over_ball.find('.');
  if (dot == std::string_view::npos) return fail(0, "over.ball lacks '.'");
  auto over = text::parse_int<int>(over_ball.substr(0, dot));
  auto ball = text::parse_int<int>(over_ball.substr(dot + 1));
  if (!over || *over < 0) return fail(0, "non-numeric over");
  if (!ball || *ball < 1) return fail(0, "non-numeric ball");
  h.over = *over;
  h.ball_in_over = *ball;
  pos = c1 + 1;

  auto c2 = line.find(',', pos);
  if (c2 == std::string_view::npos) return fail(pos, "missing ',' after players");
  auto players = line.substr(pos, c2 - pos);
  auto to = players.find(" to ");
  if (to == std::string_view::npos) return fail(pos, "expected '<bowler> to <batsman>'");
  h.bowler = std::string(text::trim(players.substr(0, to)));
  h.batsman = std::string(text::trim(players.substr(to + 4)));
  if (h.bowler.empty() || h.batsman.empty()) return fail(pos, "empty player name");
  pos = c2 + 1;

  auto c3 = line.find(',', pos);
  auto outcome_end = c3 == std::string_view::npos ? line.size() : c3;
  auto outcome = parse_outcome_phrase(line.substr(pos, outcome_end - pos));
  if (!outcome)
    return fail(pos, "unrecognised outcome '" +
                         std::string(text::trim(line.substr(pos, outcome_end - pos))) + "'");
  h.outcome = *outcome;
  pos = c3 == std::string_view::npos ? line.size() : c3 + 1;

  // Optional "<speed> kph," segment.
  if (pos < line.size()) {
    auto c4 = line.find(',', pos);
    auto seg_end = c4 == std::string_view::npos ? line.size() : c4;
    auto seg = text::trim(line.substr(pos, seg_end - pos));
    constexpr std::string_view kUnit = " kph";
    if (seg.size() > kUnit.size() && seg.substr(seg.size() - kUnit.size()) == kUnit) {
      if (auto speed = text::parse_double(seg.substr(0, seg.size() - kUnit.size()));
          speed && *speed >= 0) {
        h.speed_kph = *speed;
        pos = c4 == std::string_view::npos ? line.size() : c4 + 1;
      }
    }
  }

  h.remainder = std::string(text::trim(line.substr(std::min(pos, line.size()))));
  result.header = std::move(h);
  return result;
}

/// Splits "<over>.<ball>, <bowler> to <batsman>, <outcome>, [<speed> kph,]"
/// from the free-text remainder. Throws MalformedHeader.
inline StructuredHeader parse_structured(std::string_view line) {
  auto parsed = try_parse_structured(line);
  if (!parsed.header) throw Error(ErrorCode::MalformedHeader, parsed.error);
  return std::move(*parsed.header);
}

/// The free-text part of a record's commentary. Records whose text still
/// carries the structured header have it stripped.
inline std::string unstructured_text(const DeliveryRecord& r) {
  auto parsed = try_parse_structured(r.text);
  if (parsed.header) return std::move(parsed.header->remainder);
  return r.text;
}

/// Returns a description of the first violated record invariant, if any.
inline std::optional<std::string> validate_record(const DeliveryRecord& r) {
  auto has_control = [](std::string_view s) {
    return s.find_first_of("\t\n\r") != std::string_view::npos;
  };
  if (r.match_id.empty()) return "empty match_id";
  if (r.innings < 1) return "innings must be >= 1";
  if (r.day && *r.day < 1) return "day must be >= 1";
  if (r.session && *r.session < 1) return "session must be >= 1";
  if (r.over < 0) return "over must be >= 0";
  if (r.ball_in_over < 1) return "ball_in_over must be >= 1";
  if (r.bowler.empty() || r.batsman.empty()) return "empty player identifier";
  if (r.bowler == r.batsman) return "bowler equals batsman";
  if (r.speed_kph && !(*r.speed_kph >= 0)) return "negative speed";
  if (text::trim(r.text).empty()) return "empty text";
  for (std::string_view s : {std::string_view(r.match_id), std::string_view(r.bowler),
                             std::string_view(r.batsman), std::string_view(r.text)})
    if (has_control(s)) return "field contains tab or newline";
  if ((r.dismissal_kind && has_control(*r.dismissal_kind)) ||
      (r.short_text && has_control(*r.short_text)))
    return "field contains tab or newline";
  return std::nullopt;
}

inline constexpr std::size_t kCorpusFieldCount = 14;

/// One tab-separated corpus line (no trailing newline).
inline std::string serialize_record(const DeliveryRecord& r) {
  auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  std::string line;
  auto add = [&](std::string_view field, bool last = false) {
    line.append(field);
    if (!last) line.push_back('\t');
  };
  add(r.match_id);
  add(r.date.iso());
  add(std::to_string(r.innings));
  add(opt_int(r.day));
  add(opt_int(r.session));
  add(std::to_string(r.over));
  add(std::to_string(r.ball_in_over));
  add(r.bowler);
  add(r.batsman);
  add(outcome_token(r.outcome));
  add(r.dismissal_kind.value_or(""));
  add(r.speed_kph ? text::format_double(*r.speed_kph) : "");
  add(r.short_text.value_or(""));
  add(r.text, true);
  return line;
}

/// Parses one corpus line; on failure returns the reason in `error`.
inline std::optional<DeliveryRecord> parse_record_line(std::string_view line, std::string& error) {
  auto fields = text::split(line, '\t');
  if (fields.size() != kCorpusFieldCount) {
    error = "expected " + std::to_string(kCorpusFieldCount) + " tab-separated fields, got " +
            std::to_string(fields.size());
    return std::nullopt;
  }
  DeliveryRecord r;
  auto opt_int = [&](std::string_view f, std::optional<int>& out, const char* what) {
    if (f.empty()) return true;
    auto v = text::parse_int<int>(f);
    if (!v) {
      error = std::string("non-numeric ") + what;
      return false;
    }
    out = *v;
    return true;
  };
  auto req_int = [&](std::string_view f, int& out, const char* what) {
    auto v = text::parse_int<int>(f);
    if (!v) {
      error = std::string("non-numeric ") + what;
      return false;
    }
    out = *v;
    return true;
  };

  r.match_id = std::string(fields[0]);
  auto date = Date::parse(fields[1]);
  if (!date) {
    error = "invalid date '" + std::string(fields[1]) + "'";
    return std::nullopt;
  }
  r.date = *date;
  if (!req_int(fields[2], r.innings, "innings") || !opt_int(fields[3], r.day, "day") ||
      !opt_int(fields[4], r.session, "session") || !req_int(fields[5], r.over, "over") ||
      !req_int(fields[6], r.ball_in_over, "ball_in_over"))
    return std::nullopt;
  r.bowler = std::string(fields[7]);
  r.batsman = std::string(fields[8]);
  auto outcome = parse_outcome_token(fields[9]);
  if (!outcome) {
    error = "unrecognised outcome '" + std::string(fields[9]) + "'";
    return std::nullopt;
  }
  r.outcome = *outcome;
  if (!fields[10].empty()) r.dismissal_kind = std::string(fields[10]);
  if (!fields[11].empty()) {
    auto speed = text::parse_double(fields[11]);
    if (!speed) {
      error = "non-numeric speed";
      return std::nullopt;
    }
    r.speed_kph = *speed;
  }
  if (!fields[12].empty()) r.short_text = std::string(fields[12]);
  r.text = std::string(fields[13]);
  if (auto problem = validate_record(r)) {
    error = *problem;
    return std::nullopt;
  }
  return r;
}

struct PlayerPositions {
  std::vector<std::size_t> as_batsman;
  std::vector<std::size_t> as_bowler;

  friend bool operator==(const PlayerPositions&, const PlayerPositions&) = default;
};

/// Immutable, indexed collection of delivery records.
class Corpus {
 public:
  Corpus() = default;

  explicit Corpus(std::vector<DeliveryRecord> records) : records_(std::move(records)) {
    text::Fnv1a digest;
    for (std::size_t i = 0; i < records_.size(); ++i) {
      const auto& r = records_[i];
      index_[r.batsman].as_batsman.push_back(i);
      index_[r.bowler].as_bowler.push_back(i);
      if (i == 0 || r.date < date_range_.from) date_range_.from = r.date;
      if (i == 0 || date_range_.to < r.date) date_range_.to = r.date;
      digest.update(serialize_record(r));
      digest.update("\n");
    }
    digest_ = digest.hex();
  }

  const std::vector<DeliveryRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const DeliveryRecord& operator[](std::size_t i) const { return records_[i]; }

  const std::map<std::string, PlayerPositions>& player_index() const { return index_; }

  const PlayerPositions* positions(std::string_view player) const {
    auto it = index_.find(std::string(player));
    return it == index_.end() ? nullptr : &it->second;
  }

  bool has_player(std::string_view player) const { return positions(player) != nullptr; }

  /// Undefined for an empty corpus.
  const DateRange& date_range() const { return date_range_; }
  const std::string& digest() const { return digest_; }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

 private:
  std::vector<DeliveryRecord> records_;
  std::map<std::string, PlayerPositions> index_;
  DateRange date_range_;
  std::string digest_;
};

struct Rejection {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct LoadReport {
  std::size_t accepted = 0;
  std::vector<Rejection> rejected;
};

struct LoadResult {
  Corpus corpus;
  LoadReport report;
};

/// Context applied to raw commentary lines that do not carry their own.
struct RawImportDefaults {
  std::string match_id = "unknown";
  std::optional<Date> date;
  int innings = 1;
};

namespace detail {

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw Error(ErrorCode::FileUnreadable, "read error on '" + path + "'");
  return lines;
}

inline LoadResult finish(std::vector<DeliveryRecord> records, LoadReport report,
                         const std::string& source) {
  if (records.empty())
    throw Error(ErrorCode::EmptyCorpus, "no valid records in '" + source + "' (" +
                                            std::to_string(report.rejected.size()) + " rejected)");
  report.accepted = records.size();
  return {Corpus(std::move(records)), std::move(report)};
}

}  // namespace detail

/// Parses corpus lines. Blank lines are skipped; malformed lines are
/// reported, not fatal.
inline LoadResult parse_corpus(const std::vector<std::string>& lines,
                               const std::string& source = "<memory>") {
  std::vector<DeliveryRecord> records;
  LoadReport report;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    std::string error;
    if (auto r = parse_record_line(lines[i], error))
      records.push_back(std::move(*r));
    else
      report.rejected.push_back({i + 1, error});
  }
  return detail::finish(std::move(records), std::move(report), source);
}

inline LoadResult load_corpus(const std::string& path) {
  return parse_corpus(detail::read_lines(path), path);
}

/// Raw import: one commentary string per line, optionally prefixed by
/// `match_id <TAB> date <TAB> innings <TAB>`.
inline LoadResult import_raw_commentary(const std::vector<std::string>& lines,
                                        const RawImportDefaults& defaults,
                                        const std::string& source = "<memory>") {
  std::vector<DeliveryRecord> records;
  LoadReport report;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (text::trim(line).empty()) continue;
    auto reject = [&](std::string reason) { report.rejected.push_back({i + 1, std::move(reason)}); };

    DeliveryRecord r;
    r.match_id = defaults.match_id;
    r.innings = defaults.innings;
    std::optional<Date> date = defaults.date;
    if (line.find('\t') != std::string_view::npos) {
      auto fields = text::split(line, '\t');
      if (fields.size() != 4) {
        reject("expected 'match_id<TAB>date<TAB>innings<TAB>commentary'");
        continue;
      }
      r.match_id = std::string(fields[0]);
      date = Date::parse(fields[1]);
      if (!date) {
        reject("invalid date '" + std::string(fields[1]) + "'");
        continue;
      }
      auto innings = text::parse_int<int>(fields[2]);
      if (!innings) {
        reject("non-numeric innings");
        continue;
      }
      r.innings = *innings;
      line = fields[3];
    }
    if (!date) {
      reject("no date for record (supply a default date)");
      continue;
    }
    r.date = *date;
    auto parsed = try_parse_structured(line);
    if (!parsed.header) {
      reject(parsed.error);
      continue;
    }
    auto& h = *parsed.header;
    r.over = h.over;
    r.ball_in_over = h.ball_in_over;
    r.bowler = h.bowler;
    r.batsman = h.batsman;
    r.outcome = h.outcome;
    r.speed_kph = h.speed_kph;
    r.text = std::string(text::trim(line));
    if (auto problem = validate_record(r)) {
      reject(*problem);
      continue;
    }
    records.push_back(std::move(r));
  }
  return detail::finish(std::move(records), std::move(report), source);
}

inline LoadResult import_raw_commentary_file(const std::string& path,
                                             const RawImportDefaults& defaults) {
  return import_raw_commentary(detail::read_lines(path), defaults, path);
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& r : corpus.records()) out << serialize_record(r) << '\n';
}

inline void save_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write '" + path + "'");
  write_corpus(out, corpus);
}

}  // namespace cricket_rules

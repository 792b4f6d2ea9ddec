#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cricket_rules/corpus.hpp"
#include "cricket_rules/error.hpp"
#include "cricket_rules/features.hpp"
#include "cricket_rules/text.hpp"

namespace cricket_rules {

using NgramSet = std::set<std::string, std::less<>>;

/// Lowercases, drops apostrophes, turns every other non-alphanumeric byte
/// into a separator, and keeps a hyphen only between two word characters.
/// Bytes >= 0x80 count as word characters so UTF-8 names survive intact.
/// No stop-word removal: "off", "on", "out", "full" are cricket vocabulary.
inline std::vector<std::string> normalize_tokens(std::string_view input) {
  auto is_word = [](unsigned char ch) { return std::isalnum(ch) || ch >= 0x80; };

  std::string cleaned;
  cleaned.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    auto ch = static_cast<unsigned char>(input[i]);
    if (ch == '\'') continue;
    // U+2019 right single quotation mark
    if (ch == 0xE2 && i + 2 < input.size() && static_cast<unsigned char>(input[i + 1]) == 0x80 &&
        static_cast<unsigned char>(input[i + 2]) == 0x99) {
      i += 2;
      continue;
    }
    if (is_word(ch)) {
      cleaned.push_back(static_cast<char>(std::tolower(ch)));
    } else if (ch == '-' && !cleaned.empty() && is_word(static_cast<unsigned char>(cleaned.back())) &&
               i + 1 < input.size() && is_word(static_cast<unsigned char>(input[i + 1]))) {
      cleaned.push_back('-');
    } else {
      cleaned.push_back(' ');
    }
  }

  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < cleaned.size()) {
    auto start = cleaned.find_first_not_of(' ', pos);
    if (start == std::string::npos) break;
    auto end = cleaned.find(' ', start);
    if (end == std::string::npos) end = cleaned.size();
    tokens.emplace_back(cleaned.substr(start, end - start));
    pos = end;
  }
  return tokens;
}

/// All unigrams plus all adjacent pairs joined by a single space.
inline NgramSet extract_ngrams(const std::vector<std::string>& tokens) {
  NgramSet out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.insert(tokens[i]);
    if (i + 1 < tokens.size()) out.insert(tokens[i] + ' ' + tokens[i + 1]);
  }
  return out;
}

/// True if `ngram` is one or two tokens already in normalize_tokens form.
inline bool is_normalized_ngram(std::string_view ngram) {
  auto tokens = normalize_tokens(ngram);
  if (tokens.empty() || tokens.size() > 2) return false;
  std::string joined = tokens[0];
  if (tokens.size() == 2) joined += ' ' + tokens[1];
  return joined == ngram;
}

struct FeatureMatch {
  BattingSet bat;
  BowlingSet bowl;

  friend bool operator==(const FeatureMatch&, const FeatureMatch&) = default;
};

/// Feature definitions: the set of n-grams that signal each feature.
class FeatureLexicon {
 public:
  using Feature = std::variant<BattingFeature, BowlingFeature>;

  /// Throws MalformedLexicon if `ngram` is not normalised.
  void add(Feature feature, std::string_view ngram) {
    if (!is_normalized_ngram(ngram))
      throw Error(ErrorCode::MalformedLexicon, "entry '" + std::string(ngram) +
                                                   "' is not a normalised unigram or bigram");
    auto& match = lookup_[std::string(ngram)];
    if (auto* bat = std::get_if<BattingFeature>(&feature)) {
      match.bat.insert(*bat);
      batting_[index_of(*bat)].insert(std::string(ngram));
    } else {
      auto bowl = std::get<BowlingFeature>(feature);
      match.bowl.insert(bowl);
      bowling_[index_of(bowl)].insert(std::string(ngram));
    }
  }

  const NgramSet& ngrams(BattingFeature f) const { return batting_[index_of(f)]; }
  const NgramSet& ngrams(BowlingFeature f) const { return bowling_[index_of(f)]; }

  /// Features whose definition contains `ngram`, or null.
  const FeatureMatch* find(std::string_view ngram) const {
    auto it = lookup_.find(std::string(ngram));
    return it == lookup_.end() ? nullptr : &it->second;
  }

  std::size_t entry_count() const {
    std::size_t n = 0;
    for (const auto& s : batting_) n += s.size();
    for (const auto& s : bowling_) n += s.size();
    return n;
  }

  int version() const { return version_; }
  void set_version(int v) { version_ = v; }

 private:
  std::array<NgramSet, kBattingFeatureCount> batting_;
  std::array<NgramSet, kBowlingFeatureCount> bowling_;
  std::unordered_map<std::string, FeatureMatch> lookup_;
  int version_ = 0;
};

/// Outcome feature from the structured header, plus every feature whose
/// definition intersects `ngrams`.
inline FeatureMatch map_features(const NgramSet& ngrams, Outcome outcome,
                                 const FeatureLexicon& lexicon) {
  FeatureMatch result;
  result.bat.insert(batting_feature(outcome));
  for (const auto& g : ngrams) {
    if (const auto* m = lexicon.find(g)) {
      result.bat |= m->bat;
      result.bowl |= m->bowl;
    }
  }
  return result;
}

inline FeatureMatch features_of(const DeliveryRecord& record, const FeatureLexicon& lexicon) {
  return map_features(extract_ngrams(normalize_tokens(unstructured_text(record))), record.outcome,
                      lexicon);
}

// ---------------------------------------------------------------------------
// Lexicon file: `bat|bowl <TAB> feature <TAB> ngram`, '#' comments,
// optional `# lexicon-version: N` line.

struct LintIssue {
  std::size_t line = 0;
  std::string kind;  // malformed | unknown-side | unknown-feature | not-normalized | duplicate
  std::string message;
};

namespace detail {

struct ParsedLexiconLine {
  std::optional<FeatureLexicon::Feature> feature;
  std::string ngram;
};

inline std::optional<int> lexicon_version(std::string_view line) {
  constexpr std::string_view kTag = "# lexicon-version:";
  if (line.substr(0, kTag.size()) != kTag) return std::nullopt;
  return text::parse_int<int>(text::trim(line.substr(kTag.size())));
}

inline std::optional<ParsedLexiconLine> parse_lexicon_line(std::string_view line,
                                                           std::size_t lineno,
                                                           std::vector<LintIssue>& issues) {
  auto fields = text::split(line, '\t');
  if (fields.size() != 3) {
    issues.push_back({lineno, "malformed", "expected 3 tab-separated fields"});
    return std::nullopt;
  }
  ParsedLexiconLine out;
  out.ngram = std::string(fields[2]);
  if (fields[0] == "bat") {
    if (auto f = parse_batting_feature(fields[1])) out.feature = *f;
  } else if (fields[0] == "bowl") {
    if (auto f = parse_bowling_feature(fields[1]))
      if (name(*f) == fields[1]) out.feature = *f;
  } else {
    issues.push_back({lineno, "unknown-side", "side must be 'bat' or 'bowl', got '" +
                                                  std::string(fields[0]) + "'"});
    return std::nullopt;
  }
  if (!out.feature) {
    issues.push_back({lineno, "unknown-feature",
                      "unknown " + std::string(fields[0]) + " feature '" + std::string(fields[1]) + "'"});
    return std::nullopt;
  }
  if (!is_normalized_ngram(out.ngram)) {
    issues.push_back({lineno, "not-normalized",
                      "entry '" + out.ngram + "' is not a normalised unigram or bigram"});
    return std::nullopt;
  }
  return out;
}

}  // namespace detail

/// Every problem in a lexicon file; empty means clean.
inline std::vector<LintIssue> lint_lexicon(const std::vector<std::string>& lines) {
  std::vector<LintIssue> issues;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (text::trim(line).empty() || line.front() == '#') continue;
    if (auto it = seen.find(lines[i]); it != seen.end()) {
      issues.push_back({i + 1, "duplicate", "duplicates line " + std::to_string(it->second)});
      continue;
    }
    seen.emplace(lines[i], i + 1);
    detail::parse_lexicon_line(line, i + 1, issues);
  }
  return issues;
}

/// Strict parse: any issue other than a duplicate line is fatal.
inline FeatureLexicon parse_lexicon(const std::vector<std::string>& lines) {
  FeatureLexicon lexicon;
  std::vector<LintIssue> issues;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto v = detail::lexicon_version(line)) lexicon.set_version(*v);
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto parsed = detail::parse_lexicon_line(line, i + 1, issues);
    if (!parsed)
      throw Error(ErrorCode::MalformedLexicon,
                  "line " + std::to_string(issues.back().line) + ": " + issues.back().message);
    lexicon.add(*parsed->feature, parsed->ngram);
  }
  return lexicon;
}

inline FeatureLexicon load_lexicon(const std::string& path) {
  return parse_lexicon(detail::read_lines(path));
}

#ifdef CRICKET_RULES_DATA_DIR
inline std::string default_lexicon_path() { return std::string(CRICKET_RULES_DATA_DIR) + "/lexicon.tsv"; }
#endif

}  // namespace cricket_rules

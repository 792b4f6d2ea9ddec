#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

namespace cricket_rules {

/// Batsman-side descriptors, in canonical row order.
enum class BattingFeature : std::uint8_t {
  Run0, Run1, Run2, Run3, Run4, Run5, Run6, Out,
  Beaten, Defended, Attacked,
  FrontFoot, BackFoot,
  ThirdMan, SquareOff, LongOff, LongOn, SquareLeg, FineLeg,
};

/// Bowler-side descriptors, in canonical column order.
enum class BowlingFeature : std::uint8_t {
  Good, Short, Full, Off, Leg, Middle, Spin, Swing, Fast, Slow, MoveIn, MoveOut,
};

enum class FeatureCategory : std::uint8_t { Response, Outcome, Footwork, ShotArea };

enum class AnalysisType : std::uint8_t { Batting, Bowling };

/// Result of one delivery as recorded in its structured header.
enum class Outcome : std::uint8_t { Runs0, Runs1, Runs2, Runs3, Runs4, Runs5, Runs6, Out };

inline constexpr std::size_t kBattingFeatureCount = 19;
inline constexpr std::size_t kBowlingFeatureCount = 12;

inline constexpr std::array<std::string_view, kBattingFeatureCount> kBattingFeatureNames = {
    "0 run", "1 run", "2 run", "3 run", "4 run", "5 run", "6 run", "out",
    "beaten", "defended", "attacked", "front foot", "back foot",
    "third man", "square off", "long off", "long on", "square leg", "fine leg"};

inline constexpr std::array<std::string_view, kBowlingFeatureCount> kBowlingFeatureNames = {
    "good", "short", "full", "off", "leg", "middle",
    "spin", "swing", "fast", "slow", "move-in", "move-out"};

inline constexpr std::array<FeatureCategory, 4> kAllCategories = {
    FeatureCategory::Response, FeatureCategory::Outcome, FeatureCategory::Footwork,
    FeatureCategory::ShotArea};

template <typename Enum>
constexpr std::size_t index_of(Enum e) {
  return static_cast<std::size_t>(e);
}

inline std::string_view name(BattingFeature f) { return kBattingFeatureNames[index_of(f)]; }
inline std::string_view name(BowlingFeature f) { return kBowlingFeatureNames[index_of(f)]; }

inline std::string_view name(FeatureCategory c) {
  switch (c) {
    case FeatureCategory::Response: return "response";
    case FeatureCategory::Outcome: return "outcome";
    case FeatureCategory::Footwork: return "footwork";
    case FeatureCategory::ShotArea: return "shot-area";
  }
  return "";
}

inline std::string_view name(AnalysisType t) {
  return t == AnalysisType::Batting ? "batting" : "bowling";
}

inline std::optional<BattingFeature> parse_batting_feature(std::string_view s) {
  for (std::size_t i = 0; i < kBattingFeatureCount; ++i)
    if (kBattingFeatureNames[i] == s) return static_cast<BattingFeature>(i);
  return std::nullopt;
}

/// Accepts the canonical names plus the "move in" / "move away" spellings
/// used in narrative rule sheets.
inline std::optional<BowlingFeature> parse_bowling_feature(std::string_view s) {
  for (std::size_t i = 0; i < kBowlingFeatureCount; ++i)
    if (kBowlingFeatureNames[i] == s) return static_cast<BowlingFeature>(i);
  if (s == "move in") return BowlingFeature::MoveIn;
  if (s == "move away" || s == "move-away" || s == "move out") return BowlingFeature::MoveOut;
  return std::nullopt;
}

inline std::optional<FeatureCategory> parse_category(std::string_view s) {
  for (auto c : kAllCategories)
    if (name(c) == s) return c;
  if (s == "shotarea" || s == "shot_area") return FeatureCategory::ShotArea;
  return std::nullopt;
}

inline std::optional<AnalysisType> parse_analysis_type(std::string_view s) {
  if (s == "bat" || s == "batting") return AnalysisType::Batting;
  if (s == "bowl" || s == "bowling") return AnalysisType::Bowling;
  return std::nullopt;
}

inline FeatureCategory category_of(BattingFeature f) {
  switch (f) {
    case BattingFeature::Beaten:
    case BattingFeature::Defended:
    case BattingFeature::Attacked: return FeatureCategory::Response;
    case BattingFeature::FrontFoot:
    case BattingFeature::BackFoot: return FeatureCategory::Footwork;
    case BattingFeature::ThirdMan:
    case BattingFeature::SquareOff:
    case BattingFeature::LongOff:
    case BattingFeature::LongOn:
    case BattingFeature::SquareLeg:
    case BattingFeature::FineLeg: return FeatureCategory::ShotArea;
    default: return FeatureCategory::Outcome;
  }
}

inline constexpr BattingFeature batting_feature(Outcome o) {
  return static_cast<BattingFeature>(static_cast<std::uint8_t>(o));
}

/// Columns dropped when the opponents are restricted to one bowler class.
inline constexpr bool is_bowler_type_feature(BowlingFeature f) {
  return f == BowlingFeature::Spin || f == BowlingFeature::Swing || f == BowlingFeature::Fast ||
         f == BowlingFeature::Slow;
}

/// Fixed-size set over a closed feature enumeration. Iteration follows the
/// canonical order.
template <typename Enum, std::size_t N>
class FeatureSet {
 public:
  using value_type = Enum;
  static constexpr std::size_t capacity = N;

  FeatureSet() = default;
  FeatureSet(std::initializer_list<Enum> items) {
    for (auto e : items) insert(e);
  }

  void insert(Enum e) { bits_.set(index_of(e)); }
  bool contains(Enum e) const { return bits_.test(index_of(e)); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  FeatureSet& operator|=(const FeatureSet& other) {
    bits_ |= other.bits_;
    return *this;
  }

  /// True if every element of `this` is also in `other`.
  bool subset_of(const FeatureSet& other) const { return (bits_ & ~other.bits_).none(); }

  std::vector<Enum> items() const {
    std::vector<Enum> out;
    for (std::size_t i = 0; i < N; ++i)
      if (bits_.test(i)) out.push_back(static_cast<Enum>(i));
    return out;
  }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  std::bitset<N> bits_;
};

using BattingSet = FeatureSet<BattingFeature, kBattingFeatureCount>;
using BowlingSet = FeatureSet<BowlingFeature, kBowlingFeatureCount>;

}  // namespace cricket_rules

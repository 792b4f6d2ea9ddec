#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace cricket_rules {

/// Calendar date, read and written as ISO-8601 `YYYY-MM-DD`.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::year_month_day ymd) : ymd_(ymd) {}
  Date(int y, unsigned m, unsigned d)
      : ymd_(std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}) {}

  static std::optional<Date> parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    auto field = [&](std::size_t pos, std::size_t len, auto& out) {
      auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
      return ec == std::errc{} && ptr == text.data() + pos + len;
    };
    if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
    Date date(y, m, d);
    if (!date.ymd_.ok()) return std::nullopt;
    return date;
  }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd_.year()),
                  static_cast<unsigned>(ymd_.month()), static_cast<unsigned>(ymd_.day()));
    return buf;
  }

  std::chrono::sys_days days() const { return std::chrono::sys_days{ymd_}; }
  std::chrono::year_month_day ymd() const { return ymd_; }

  /// Same calendar day `n` years earlier; 29 February maps to 28 February.
  Date minus_years(int n) const {
    auto shifted = ymd_ - std::chrono::years{n};
    if (!shifted.ok()) shifted = shifted.year() / shifted.month() / std::chrono::last;
    return Date(shifted);
  }

  friend bool operator==(const Date& a, const Date& b) { return a.days() == b.days(); }
  friend auto operator<=>(const Date& a, const Date& b) { return a.days() <=> b.days(); }

 private:
  std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::month{1},
                                   std::chrono::day{1}};
};

/// Inclusive date range.
struct DateRange {
  Date from;
  Date to;

  bool contains(const Date& d) const { return from <= d && d <= to; }
  bool ordered() const { return from <= to; }
  friend bool operator==(const DateRange&, const DateRange&) = default;
};

}  // namespace cricket_rules

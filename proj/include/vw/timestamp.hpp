#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace vw {

// Point in time, UTC, microseconds since the Unix epoch.
struct Timestamp {
  std::int64_t micros = 0;

  static constexpr Timestamp from_seconds(std::int64_t s) { return {s * 1'000'000}; }

  constexpr Timestamp operator+(std::int64_t delta_micros) const {
    return {micros + delta_micros};
  }
  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

namespace detail {

inline bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  pos += count;
  return true;
}

inline bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

inline std::optional<Timestamp> compose(int year, int month, int day, int hour, int minute,
                                        int second, std::int64_t frac_micros,
                                        std::int64_t offset_seconds) {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                     std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) return std::nullopt;
  std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  std::int64_t secs = days * 86400 + hour * 3600 + minute * 60 + second - offset_seconds;
  return Timestamp{secs * 1'000'000 + frac_micros};
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// YYYY-MM-DD[T ]HH:MM[:SS[.frac]][Z|+HH:MM|-HH:MM]; no offset means UTC.
inline std::optional<Timestamp> parse_iso(std::string_view s) {
  std::size_t p = 0;
  int y, mo, d, h, mi, sec = 0;
  if (!read_digits(s, p, 4, y) || !expect(s, p, '-') || !read_digits(s, p, 2, mo) ||
      !expect(s, p, '-') || !read_digits(s, p, 2, d))
    return std::nullopt;
  if (!(expect(s, p, 'T') || expect(s, p, 't') || expect(s, p, ' '))) return std::nullopt;
  if (!read_digits(s, p, 2, h) || !expect(s, p, ':') || !read_digits(s, p, 2, mi))
    return std::nullopt;
  std::int64_t frac = 0;
  if (expect(s, p, ':')) {
    if (!read_digits(s, p, 2, sec)) return std::nullopt;
    if (expect(s, p, '.') || expect(s, p, ',')) {
      std::int64_t scale = 100'000;
      std::size_t digits = 0;
      while (p < s.size() && s[p] >= '0' && s[p] <= '9') {
        // Digits beyond microsecond precision are truncated.
        frac += (s[p] - '0') * scale;
        scale /= 10;
        ++p;
        ++digits;
      }
      if (digits == 0) return std::nullopt;
    }
  }
  std::int64_t offset = 0;
  if (p < s.size()) {
    if (s[p] == 'Z' || s[p] == 'z') {
      ++p;
    } else if (s[p] == '+' || s[p] == '-') {
      int sign = s[p] == '-' ? -1 : 1;
      ++p;
      int oh, om = 0;
      if (!read_digits(s, p, 2, oh)) return std::nullopt;
      if (expect(s, p, ':')) {
        if (!read_digits(s, p, 2, om)) return std::nullopt;
      } else if (p < s.size()) {
        if (!read_digits(s, p, 2, om)) return std::nullopt;
      }
      offset = sign * (oh * 3600 + om * 60);
    }
  }
  if (p != s.size()) return std::nullopt;
  return compose(y, mo, d, h, mi, sec, frac, offset);
}

// MM/DD/YYYY HH:MM[:SS], interpreted as UTC.
inline std::optional<Timestamp> parse_us_date(std::string_view s) {
  std::size_t p = 0;
  int y, mo, d, h, mi, sec = 0;
  if (!read_digits(s, p, 2, mo) || !expect(s, p, '/') || !read_digits(s, p, 2, d) ||
      !expect(s, p, '/') || !read_digits(s, p, 4, y) || !expect(s, p, ' ') ||
      !read_digits(s, p, 2, h) || !expect(s, p, ':') || !read_digits(s, p, 2, mi))
    return std::nullopt;
  if (expect(s, p, ':') && !read_digits(s, p, 2, sec)) return std::nullopt;
  if (p != s.size()) return std::nullopt;
  return compose(y, mo, d, h, mi, sec, 0, 0);
}

}  // namespace detail

/// Parses an RFC 3339 / ISO 8601 date-time or the "MM/DD/YYYY HH:MM" form used by
/// spreadsheet exports. Returns nullopt for anything else.
inline std::optional<Timestamp> parse_timestamp(std::string_view text) {
  text = detail::trim(text);
  if (text.size() >= 5 && text[2] == '/') return detail::parse_us_date(text);
  return detail::parse_iso(text);
}

/// RFC 3339 in UTC with microseconds, e.g. "2021-07-13T08:00:00.000000Z".
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  std::int64_t secs = t.micros / 1'000'000;
  std::int64_t frac = t.micros % 1'000'000;
  if (frac < 0) {
    frac += 1'000'000;
    --secs;
  }
  std::int64_t days = secs / 86400;
  std::int64_t rem = secs % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%06dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(rem / 3600),
                int(rem / 60 % 60), int(rem % 60), int(frac));
  return buf;
}

}  // namespace vw

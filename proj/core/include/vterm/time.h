#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace vterm {

inline constexpr int kSecondsPerDay = 86400;

struct ServiceDate {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const ServiceDate&) const = default;

  /// ISO form, e.g. "2022-11-07".
  std::string iso() const;
  static ServiceDate from_iso(std::string_view text);
};

/// A local-clock instant: service day plus whole seconds since midnight.
struct Timestamp {
  ServiceDate date;
  int seconds = 0;

  auto operator<=>(const Timestamp&) const = default;
};

/// Parses "dd/MM/yyyy HH:mm:ss". Throws vterm::Error on malformed input or
/// out-of-range fields.
Timestamp parse_dthr(std::string_view text);
std::string format_dthr(const Timestamp& ts);

/// Renders seconds-of-day as "HH:MM:SS", rounding fractional seconds half-up.
std::string format_hms(double seconds_of_day);

/// Parses "HH:MM:SS" or "HH:MM" into seconds-of-day.
int parse_hms(std::string_view text);

/// Half-up rounding used for every rendered time.
std::int64_t round_half_up(double value);

}  // namespace vterm

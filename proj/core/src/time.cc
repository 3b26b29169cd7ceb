#include "vterm/time.h"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "vterm/error.h"

namespace vterm {
namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

void check_date(const ServiceDate& d) {
  if (d.month < 1 || d.month > 12 || d.day < 1 ||
      d.day > days_in_month(d.year, d.month) || d.year < 1) {
    throw Error("date out of range");
  }
}

}  // namespace

std::string ServiceDate::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

ServiceDate ServiceDate::from_iso(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw Error("invalid date '" + std::string(text) + "'");
  }
  ServiceDate d{parse_int(text.substr(0, 4), "year"),
                parse_int(text.substr(5, 2), "month"),
                parse_int(text.substr(8, 2), "day")};
  check_date(d);
  return d;
}

int parse_hms(std::string_view text) {
  if (text.size() != 8 && text.size() != 5) {
    throw Error("invalid time '" + std::string(text) + "'");
  }
  if (text[2] != ':' || (text.size() == 8 && text[5] != ':')) {
    throw Error("invalid time '" + std::string(text) + "'");
  }
  const int h = parse_int(text.substr(0, 2), "hour");
  const int m = parse_int(text.substr(3, 2), "minute");
  const int s = text.size() == 8 ? parse_int(text.substr(6, 2), "second") : 0;
  if (h > 23 || m > 59 || s > 59) {
    throw Error("time out of range '" + std::string(text) + "'");
  }
  return h * 3600 + m * 60 + s;
}

Timestamp parse_dthr(std::string_view text) {
  // dd/MM/yyyy HH:mm:ss
  if (text.size() != 19 || text[2] != '/' || text[5] != '/' || text[10] != ' ') {
    throw Error("invalid timestamp '" + std::string(text) +
                "', expected dd/MM/yyyy HH:mm:ss");
  }
  Timestamp ts;
  ts.date.day = parse_int(text.substr(0, 2), "day");
  ts.date.month = parse_int(text.substr(3, 2), "month");
  ts.date.year = parse_int(text.substr(6, 4), "year");
  check_date(ts.date);
  ts.seconds = parse_hms(text.substr(11, 8));
  return ts;
}

std::string format_dthr(const Timestamp& ts) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02d/%02d/%04d %s", ts.date.day,
                ts.date.month, ts.date.year, format_hms(ts.seconds).c_str());
  return buf;
}

std::int64_t round_half_up(double value) {
  return static_cast<std::int64_t>(std::floor(value + 0.5));
}

std::string format_hms(double seconds_of_day) {
  const std::int64_t total = round_half_up(seconds_of_day);
  const std::int64_t h = total / 3600;
  const std::int64_t m = (total / 60) % 60;
  const std::int64_t s = total % 60;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld",
                static_cast<long long>(h), static_cast<long long>(m),
                static_cast<long long>(s));
  return buf;
}

}  // namespace vterm

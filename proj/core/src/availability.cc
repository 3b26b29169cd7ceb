#include "vterm/availability.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "vterm/error.h"

namespace vterm {
namespace {

constexpr int kSpanMinutes = kSpanEndMinute - kSpanStartMinute;

void check_window(int window_minutes) {
  if (window_minutes < 1 || window_minutes > kSpanMinutes) {
    throw Error("window must be between 1 and " + std::to_string(kSpanMinutes) +
                " minutes");
  }
}

int minute_of(double seconds) {
  return static_cast<int>(std::floor(seconds / 60.0));
}

}  // namespace

std::size_t series_length(int window_minutes) {
  check_window(window_minutes);
  return static_cast<std::size_t>(kSpanMinutes - window_minutes + 1);
}

std::vector<int> moving_window_counts(std::span<const double> passages,
                                      int window_minutes) {
  const std::size_t length = series_length(window_minutes);
  // prefix[i] = passages in minutes [start, start + i)
  std::vector<int> per_minute(kSpanMinutes, 0);
  for (double t : passages) {
    const int m = minute_of(t) - kSpanStartMinute;
    if (m >= 0 && m < kSpanMinutes) ++per_minute[static_cast<std::size_t>(m)];
  }
  std::vector<int> prefix(kSpanMinutes + 1, 0);
  for (int i = 0; i < kSpanMinutes; ++i) {
    prefix[i + 1] = prefix[i] + per_minute[i];
  }
  std::vector<int> counts(length);
  for (std::size_t i = 0; i < length; ++i) {
    counts[i] = prefix[i + window_minutes] - prefix[i];
  }
  return counts;
}

std::vector<double> mean_series(std::span<const std::vector<double>> series) {
  if (series.empty()) return {};
  std::vector<double> mean(series.front().size(), 0.0);
  for (const auto& s : series) {
    if (s.size() != mean.size()) throw Error("series lengths differ");
    for (std::size_t i = 0; i < s.size(); ++i) mean[i] += s[i];
  }
  for (double& v : mean) v /= static_cast<double>(series.size());
  return mean;
}

CategorySeries aggregate_by_category(
    const std::map<std::string, std::vector<double>>& series,
    const std::map<std::string, StopType>& category_of) {
  std::map<StopType, std::vector<std::vector<double>>> members;
  for (const auto& [stop_id, s] : series) {
    auto it = category_of.find(stop_id);
    if (it == category_of.end()) {
      throw Error("no category for stop '" + stop_id + "'");
    }
    members[it->second].push_back(s);
  }
  CategorySeries out;
  for (StopType t : kAllStopTypes) {
    auto it = members.find(t);
    if (it == members.end()) {
      out.warnings.push_back("category " + std::string(to_string(t)) +
                             " has no stops; series omitted");
      continue;
    }
    out.mean[t] = mean_series(it->second);
  }
  return out;
}

double daily_average(std::span<const int> counts) {
  if (counts.empty()) return 0.0;
  double sum = 0.0;
  for (int c : counts) sum += c;
  return sum / static_cast<double>(counts.size());
}

double daily_average(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double quantile_type7(std::vector<double> values, double q) {
  if (values.empty()) throw Error("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

OutlierResult find_outlier_stops(
    const std::map<std::string, double>& averages,
    const std::map<std::string, StopType>& category_of) {
  std::map<StopType, std::vector<std::pair<std::string, double>>> groups;
  for (const auto& [stop_id, avg] : averages) {
    auto it = category_of.find(stop_id);
    if (it == category_of.end()) {
      throw Error("no category for stop '" + stop_id + "'");
    }
    groups[it->second].emplace_back(stop_id, avg);
  }
  OutlierResult out;
  for (const auto& [type, members] : groups) {
    if (type == StopType::kTerminal) continue;
    if (members.size() < 4) {
      out.warnings.push_back("category " + std::string(to_string(type)) +
                             " has fewer than 4 stops; outlier rule skipped");
      continue;
    }
    std::vector<double> values;
    for (const auto& m : members) values.push_back(m.second);
    const double q1 = quantile_type7(values, 0.25);
    const double q3 = quantile_type7(values, 0.75);
    const double fence = q3 + 1.5 * (q3 - q1);
    for (const auto& [stop_id, avg] : members) {
      if (avg > fence) out.stops.push_back(stop_id);
    }
  }
  std::sort(out.stops.begin(), out.stops.end());
  return out;
}

PassageIndex::PassageIndex(std::span<const DetectedItinerary> itineraries) {
  std::set<ServiceDate> days;
  for (const DetectedItinerary& det : itineraries) days.insert(det.date);
  days_.assign(days.begin(), days.end());

  // The terminal mark shared by consecutive circular trips is one arrival.
  std::set<std::tuple<std::string_view, std::size_t, std::string_view, double>>
      seen;
  for (std::size_t trip = 0; trip < itineraries.size(); ++trip) {
    const DetectedItinerary& det = itineraries[trip];
    trip_lines_.push_back(det.line_code);
    const auto day = static_cast<std::size_t>(
        std::lower_bound(days_.begin(), days_.end(), det.date) - days_.begin());
    for (const TimedStop& e : det.entries) {
      if (!seen.emplace(det.vehicle_id, day, e.stop_id, e.time).second) continue;
      by_stop_[e.stop_id].push_back({e.time, trip, day});
    }
  }
  for (auto& [stop, list] : by_stop_) {
    std::stable_sort(list.begin(), list.end(), [](const Passage& a, const Passage& b) {
      return std::tie(a.day, a.time) < std::tie(b.day, b.time);
    });
  }
}

bool PassageIndex::has_stop(const std::string& stop_id) const {
  return by_stop_.contains(stop_id);
}

std::vector<std::string> PassageIndex::stop_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, list] : by_stop_) out.push_back(id);
  return out;
}

std::vector<double> PassageIndex::passages(const std::string& stop_id,
                                           const ServiceDate& day) const {
  std::vector<double> out;
  auto it = by_stop_.find(stop_id);
  if (it == by_stop_.end()) return out;
  for (const Passage& p : it->second) {
    if (days_[p.day] == day) out.push_back(p.time);
  }
  return out;
}

std::vector<double> PassageIndex::day_averaged_series(const std::string& stop_id,
                                                      int window_minutes) const {
  std::vector<double> mean(series_length(window_minutes), 0.0);
  if (days_.empty()) return mean;
  auto it = by_stop_.find(stop_id);
  if (it == by_stop_.end()) return mean;
  std::vector<std::vector<double>> per_day(days_.size());
  for (const Passage& p : it->second) per_day[p.day].push_back(p.time);
  for (const auto& times : per_day) {
    const auto counts = moving_window_counts(times, window_minutes);
    for (std::size_t i = 0; i < counts.size(); ++i) mean[i] += counts[i];
  }
  for (double& v : mean) v /= static_cast<double>(days_.size());
  return mean;
}

std::vector<double> PassageIndex::union_series(
    std::span<const std::string> stop_ids, int window_minutes) const {
  const std::size_t length = series_length(window_minutes);
  std::vector<double> mean(length, 0.0);
  if (days_.empty()) return mean;

  // trip -> minutes (span-relative) with a passage at a member stop
  std::map<std::size_t, std::vector<int>> minutes_by_trip;
  for (const std::string& id : stop_ids) {
    auto it = by_stop_.find(id);
    if (it == by_stop_.end()) continue;
    for (const Passage& p : it->second) {
      minutes_by_trip[p.trip].push_back(minute_of(p.time) - kSpanStartMinute);
    }
  }
  std::vector<std::vector<int>> diff(days_.size(),
                                     std::vector<int>(length + 1, 0));
  std::map<std::size_t, std::size_t> day_of_trip;
  for (const auto& [id, list] : by_stop_) {
    for (const Passage& p : list) day_of_trip[p.trip] = p.day;
  }
  const int last_start = static_cast<int>(length) - 1;
  for (auto& [trip, minutes] : minutes_by_trip) {
    std::sort(minutes.begin(), minutes.end());
    auto& d = diff[day_of_trip[trip]];
    // Window starts covering minute u: [u - W + 1, u]; merge overlaps.
    int open_lo = 0, open_hi = -1;
    bool open = false;
    auto flush = [&] {
      const int lo = std::max(open_lo, 0);
      const int hi = std::min(open_hi, last_start);
      if (open && lo <= hi) {
        ++d[static_cast<std::size_t>(lo)];
        --d[static_cast<std::size_t>(hi + 1)];
      }
    };
    for (int u : minutes) {
      const int lo = u - window_minutes + 1;
      if (open && lo <= open_hi + 1) {
        open_hi = std::max(open_hi, u);
      } else {
        flush();
        open_lo = lo;
        open_hi = u;
        open = true;
      }
    }
    flush();
  }
  for (const auto& d : diff) {
    int running = 0;
    for (std::size_t i = 0; i < length; ++i) {
      running += d[i];
      mean[i] += running;
    }
  }
  for (double& v : mean) v /= static_cast<double>(days_.size());
  return mean;
}

std::vector<std::string> PassageIndex::lines_serving(
    std::span<const std::string> stop_ids) const {
  std::set<std::string> lines;
  for (const std::string& id : stop_ids) {
    auto it = by_stop_.find(id);
    if (it == by_stop_.end()) continue;
    for (const Passage& p : it->second) lines.insert(trip_lines_[p.trip]);
  }
  return {lines.begin(), lines.end()};
}

}  // namespace vterm

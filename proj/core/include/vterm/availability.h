#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "vterm/detection.h"
#include "vterm/model.h"
#include "vterm/time.h"

namespace vterm {

inline constexpr int kSpanStartMinute = 5 * 60;
inline constexpr int kSpanEndMinute = 23 * 60;

/// Per-minute bus counts in a sliding window across 05:00-23:00.
///
/// counts[i] covers the half-open window [m, m + W) minutes with
/// m = kSpanStartMinute + i, so there are (18 * 60 - W + 1) entries.
struct AvailabilitySeries {
  std::string stop_id;
  ServiceDate day;
  int window_minutes = 10;
  std::vector<int> counts;

  int start_minute(std::size_t i) const {
    return kSpanStartMinute + static_cast<int>(i);
  }
};

std::size_t series_length(int window_minutes);

/// Throws vterm::Error when window_minutes is outside [1, 18 * 60].
std::vector<int> moving_window_counts(std::span<const double> passages,
                                      int window_minutes);

/// Element-wise arithmetic mean of equally sized series.
std::vector<double> mean_series(std::span<const std::vector<double>> series);

struct CategorySeries {
  std::map<StopType, std::vector<double>> mean;
  std::vector<std::string> warnings;  // categories without members
};

/// Mean series per stop category. `category_of` maps every key of `series`.
CategorySeries aggregate_by_category(
    const std::map<std::string, std::vector<double>>& series,
    const std::map<std::string, StopType>& category_of);

double daily_average(std::span<const int> counts);
double daily_average(std::span<const double> values);

/// Linear-interpolation quantile (R type 7) of unsorted data.
double quantile_type7(std::vector<double> values, double q);

struct OutlierResult {
  std::vector<std::string> stops;  // sorted ascending
  std::vector<std::string> warnings;
};

/// Upper boxplot outliers (value > Q3 + 1.5 IQR) within each stop category.
/// Terminals are never returned; categories with fewer than four stops are
/// skipped with a warning.
OutlierResult find_outlier_stops(
    const std::map<std::string, double>& averages,
    const std::map<std::string, StopType>& category_of);

/// Stop passages of detected itineraries (observed and interpolated), indexed
/// by stop and service day.
class PassageIndex {
 public:
  explicit PassageIndex(std::span<const DetectedItinerary> itineraries);

  const std::vector<ServiceDate>& days() const { return days_; }
  bool has_stop(const std::string& stop_id) const;
  std::vector<std::string> stop_ids() const;

  /// Passage times of a stop on one day (ascending).
  std::vector<double> passages(const std::string& stop_id,
                               const ServiceDate& day) const;

  /// Availability series averaged element-wise over every indexed day (days
  /// without passages contribute zeros).
  std::vector<double> day_averaged_series(const std::string& stop_id,
                                          int window_minutes) const;

  /// Per-window count of distinct trips with at least one passage at any of
  /// `stop_ids`, averaged over every indexed day. A trip passing two members
  /// inside one window counts once.
  std::vector<double> union_series(std::span<const std::string> stop_ids,
                                   int window_minutes) const;

  /// Distinct line codes with at least one passage at any of `stop_ids`.
  std::vector<std::string> lines_serving(
      std::span<const std::string> stop_ids) const;

 private:
  struct Passage {
    double time;
    std::size_t trip;
    std::size_t day;
  };

  std::vector<ServiceDate> days_;
  std::vector<std::string> trip_lines_;
  std::map<std::string, std::vector<Passage>, std::less<>> by_stop_;
};

}  // namespace vterm

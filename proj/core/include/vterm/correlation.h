#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vterm {

struct DayPeriod {
  std::string name;
  int start_minute = 0;  // inclusive
  int end_minute = 0;    // exclusive

  friend bool operator==(const DayPeriod&, const DayPeriod&) = default;
};

/// Morning 06-09, midday 11-14, evening 17-20.
std::vector<DayPeriod> default_periods();
/// 05:00-23:00, used for the full-day comparison matrices.
DayPeriod full_day_period();

/// Sample Pearson coefficient; nullopt when either input has zero variance
/// or fewer than two points. Throws vterm::Error on a length mismatch.
std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b);

/// Two-sided p-value of r under H0: rho = 0 with n samples, via the
/// t-transform with n - 2 degrees of freedom. nullopt when n < 3.
std::optional<double> pearson_p_value(double r, std::size_t n);

/// Restricts a series sampled per window start minute to starts inside
/// [period.start_minute, period.end_minute). `first_minute` is the start
/// minute of element 0.
std::vector<double> restrict_to_period(std::span<const double> counts,
                                       int first_minute,
                                       const DayPeriod& period);

struct CorrelationMatrix {
  std::vector<std::string> stop_ids;
  std::string period;
  /// Row-major n x n; nullopt marks an undefined coefficient. The diagonal is
  /// 1 for stops with non-constant series and undefined otherwise.
  std::vector<std::optional<double>> r;

  std::size_t size() const { return stop_ids.size(); }
  const std::optional<double>& at(std::size_t i, std::size_t j) const {
    return r[i * stop_ids.size() + j];
  }
};

/// `series` holds one already period-restricted vector per stop id.
CorrelationMatrix correlation_matrix(
    const std::vector<std::string>& stop_ids,
    const std::vector<std::vector<double>>& series, const std::string& period);

/// Mean of the defined off-diagonal coefficients over unordered pairs.
std::optional<double> mean_pairwise(const CorrelationMatrix& m);

struct SyncProfileEntry {
  std::string period;
  int window_minutes = 0;
  std::optional<double> mean_r;
  std::size_t defined_pairs = 0;
  std::size_t total_pairs = 0;
};

/// Supplies a member stop's availability series (day-averaged counts) for a
/// window size, or nullptr when the stop has none.
using SeriesLookup =
    std::function<const std::vector<double>*(const std::string& stop_id,
                                             int window_minutes)>;

/// Mean pairwise r over a cluster's members per (period, window).
std::vector<SyncProfileEntry> cluster_sync_profile(
    const std::vector<std::string>& members, const SeriesLookup& lookup,
    const std::vector<DayPeriod>& periods, const std::vector<int>& windows,
    int first_minute);

/// Averages per-cluster profiles entry-wise (undefined entries skipped).
std::vector<SyncProfileEntry> average_profiles(
    const std::vector<std::vector<SyncProfileEntry>>& profiles);

inline constexpr std::array<int, 8> kDefaultWindowSet = {10, 15, 20, 25,
                                                         30, 35, 40, 45};

}  // namespace vterm

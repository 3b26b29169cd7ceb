#include "vterm/correlation.h"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "vterm/error.h"

namespace vterm {

std::vector<DayPeriod> default_periods() {
  return {{"MORNING", 6 * 60, 9 * 60},
          {"MIDDAY", 11 * 60, 14 * 60},
          {"EVENING", 17 * 60, 20 * 60}};
}

DayPeriod full_day_period() { return {"FULL_DAY", 5 * 60, 23 * 60}; }

std::optional<double> pearson(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() != b.size()) throw Error("pearson inputs differ in length");
  const std::size_t n = a.size();
  if (n < 2) return std::nullopt;
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  const double r = sab / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

std::optional<double> pearson_p_value(double r, std::size_t n) {
  if (n < 3) return std::nullopt;
  const double df = static_cast<double>(n - 2);
  if (std::abs(r) >= 1.0) return 0.0;
  const double t = r * std::sqrt(df / (1.0 - r * r));
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

std::vector<double> restrict_to_period(std::span<const double> counts,
                                       int first_minute,
                                       const DayPeriod& period) {
  std::vector<double> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int m = first_minute + static_cast<int>(i);
    if (m >= period.start_minute && m < period.end_minute) out.push_back(counts[i]);
  }
  return out;
}

CorrelationMatrix correlation_matrix(
    const std::vector<std::string>& stop_ids,
    const std::vector<std::vector<double>>& series, const std::string& period) {
  if (stop_ids.size() != series.size()) {
    throw Error("one series per stop is required");
  }
  const std::size_t n = stop_ids.size();
  CorrelationMatrix m{stop_ids, period, std::vector<std::optional<double>>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (pearson(series[i], series[i])) m.r[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto r = pearson(series[i], series[j]);
      m.r[i * n + j] = r;
      m.r[j * n + i] = r;
    }
  }
  return m;
}

std::optional<double> mean_pairwise(const CorrelationMatrix& m) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (const auto& r = m.at(i, j)) {
        sum += *r;
        ++count;
      }
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::vector<SyncProfileEntry> cluster_sync_profile(
    const std::vector<std::string>& members, const SeriesLookup& lookup,
    const std::vector<DayPeriod>& periods, const std::vector<int>& windows,
    int first_minute) {
  std::vector<SyncProfileEntry> out;
  for (const DayPeriod& period : periods) {
    for (int w : windows) {
      std::vector<std::string> ids;
      std::vector<std::vector<double>> restricted;
      for (const std::string& id : members) {
        const std::vector<double>* s = lookup(id, w);
        if (s == nullptr) continue;
        ids.push_back(id);
        restricted.push_back(restrict_to_period(*s, first_minute, period));
      }
      SyncProfileEntry e{period.name, w, std::nullopt, 0,
                         ids.size() * (ids.size() - (ids.empty() ? 0 : 1)) / 2};
      if (ids.size() >= 2) {
        const CorrelationMatrix m = correlation_matrix(ids, restricted, period.name);
        for (std::size_t i = 0; i < m.size(); ++i) {
          for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (m.at(i, j)) ++e.defined_pairs;
          }
        }
        e.mean_r = mean_pairwise(m);
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<SyncProfileEntry> average_profiles(
    const std::vector<std::vector<SyncProfileEntry>>& profiles) {
  if (profiles.empty()) return {};
  std::vector<SyncProfileEntry> out;
  for (std::size_t k = 0; k < profiles.front().size(); ++k) {
    SyncProfileEntry avg{profiles.front()[k].period,
                         profiles.front()[k].window_minutes, std::nullopt, 0, 0};
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& p : profiles) {
      if (k >= p.size() || p[k].period != avg.period ||
          p[k].window_minutes != avg.window_minutes) {
        throw Error("profiles are not aligned");
      }
      avg.defined_pairs += p[k].defined_pairs;
      avg.total_pairs += p[k].total_pairs;
      if (p[k].mean_r) {
        sum += *p[k].mean_r;
        ++count;
      }
    }
    if (count > 0) avg.mean_r = sum / static_cast<double>(count);
    out.push_back(std::move(avg));
  }
  return out;
}

}  // namespace vterm

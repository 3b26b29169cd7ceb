#include "vterm/clustering.h"

#include <algorithm>
#include <list>
#include <map>
#include <set>

#include "vterm/correlation.h"
#include "vterm/error.h"

namespace vterm {

std::vector<Candidate> build_candidates(
    std::span<const std::string> outlier_stops,
    const std::map<std::string, double>& daily_averages) {
  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (const std::string& id : outlier_stops) {
    auto it = daily_averages.find(id);
    if (it == daily_averages.end() || !seen.insert(id).second) continue;
    out.push_back({id, it->second});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.daily_avg_buses != b.daily_avg_buses) {
      return a.daily_avg_buses > b.daily_avg_buses;
    }
    return a.stop_id < b.stop_id;
  });
  return out;
}

std::vector<Cluster> cluster_stops(std::span<const Candidate> candidates,
                                   std::span<const BusStop> bus_stops,
                                   double radius_m) {
  std::map<std::string_view, const BusStop*> by_id;
  for (const BusStop& s : bus_stops) by_id.emplace(s.stop_id, &s);

  std::list<std::string> remaining;
  for (const Candidate& c : candidates) {
    if (!by_id.contains(c.stop_id)) {
      throw Error("candidate '" + c.stop_id + "' is not a known bus stop");
    }
    remaining.push_back(c.stop_id);
  }

  std::vector<Cluster> clusters;
  while (!remaining.empty()) {
    const BusStop& centroid = *by_id.at(remaining.front());
    Cluster cluster;
    cluster.cluster_id = static_cast<int>(clusters.size()) + 1;
    cluster.centroid_stop_id = centroid.stop_id;
    cluster.members.push_back(centroid.stop_id);
    for (const BusStop& b : bus_stops) {
      if (b.stop_id == centroid.stop_id) continue;
      if (haversine_m(centroid.location, b.location) <= radius_m) {
        cluster.members.push_back(b.stop_id);
      }
    }
    const std::set<std::string_view> members(cluster.members.begin(),
                                             cluster.members.end());
    remaining.remove_if([&](const std::string& id) {
      if (!members.contains(id)) return false;
      cluster.consumed.push_back(id);
      return true;
    });
    clusters.push_back(std::move(cluster));
  }

  std::map<std::string, int> membership;
  for (const Cluster& c : clusters) {
    for (const std::string& m : c.members) ++membership[m];
  }
  for (Cluster& c : clusters) {
    c.shared_members = static_cast<std::size_t>(std::count_if(
        c.members.begin(), c.members.end(),
        [&](const std::string& m) { return membership[m] > 1; }));
  }
  return clusters;
}

ClusterCoverage coverage(std::span<const Cluster> clusters) {
  ClusterCoverage cov;
  std::set<std::string> distinct;
  cov.clusters = clusters.size();
  for (const Cluster& c : clusters) {
    cov.total_memberships += c.members.size();
    distinct.insert(c.members.begin(), c.members.end());
  }
  cov.distinct_stops = distinct.size();
  return cov;
}

ClusterStats cluster_stats(std::vector<Cluster>& clusters,
                           const PassageIndex& passages, int window_minutes) {
  ClusterStats stats;
  for (Cluster& c : clusters) {
    const auto series = passages.union_series(c.members, window_minutes);
    c.avg_buses = daily_average(std::span<const double>(series));
    c.lines_served = passages.lines_serving(c.members);
    stats.avg_buses.push_back(c.avg_buses);
    stats.line_counts.push_back(static_cast<double>(c.lines_served.size()));
  }
  stats.r = pearson(stats.avg_buses, stats.line_counts);
  if (stats.r) stats.p_value = pearson_p_value(*stats.r, clusters.size());
  return stats;
}

}  // namespace vterm

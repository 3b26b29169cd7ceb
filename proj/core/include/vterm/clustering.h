#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vterm/availability.h"
#include "vterm/model.h"

namespace vterm {

struct Candidate {
  std::string stop_id;
  double daily_avg_buses = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Centroid candidates ordered by descending average, ties by ascending
/// stop_id. Stops without an average are skipped.
std::vector<Candidate> build_candidates(
    std::span<const std::string> outlier_stops,
    const std::map<std::string, double>& daily_averages);

inline constexpr double kDefaultClusterRadiusM = 600.0;

/// A virtual terminal: a centroid stop plus every stop within the radius.
struct Cluster {
  int cluster_id = 0;  // 1-based, in creation order
  std::string centroid_stop_id;
  /// Centroid first, then the other members in bus_stops order.
  std::vector<std::string> members;
  /// Candidates removed from the list by this cluster, centroid first. Over
  /// all clusters these partition the candidate list.
  std::vector<std::string> consumed;
  /// Members that also belong to another cluster.
  std::size_t shared_members = 0;
  std::vector<std::string> lines_served;
  double avg_buses = 0.0;
};

/// Greedy clustering: repeatedly pops the head candidate as centroid, takes
/// every stop within `radius_m` (inclusive) and removes the clustered stops
/// from the candidate list. A stop may be a member of several clusters, since
/// membership scans every stop and not just the remaining candidates.
/// Throws vterm::Error if a candidate is not in bus_stops.
std::vector<Cluster> cluster_stops(std::span<const Candidate> candidates,
                                   std::span<const BusStop> bus_stops,
                                   double radius_m = kDefaultClusterRadiusM);

struct ClusterCoverage {
  std::size_t clusters = 0;
  std::size_t total_memberships = 0;
  std::size_t distinct_stops = 0;
};

ClusterCoverage coverage(std::span<const Cluster> clusters);

struct ClusterStats {
  std::vector<double> avg_buses;   // per cluster, input order
  std::vector<double> line_counts;
  std::optional<double> r;
  std::optional<double> p_value;
};

/// Fills avg_buses (daily mean of the union availability series at
/// `window_minutes`) and lines_served of every cluster, then correlates the
/// two across clusters.
ClusterStats cluster_stats(std::vector<Cluster>& clusters,
                           const PassageIndex& passages,
                           int window_minutes = 10);

}  // namespace vterm

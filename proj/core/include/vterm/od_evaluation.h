#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vterm/geo.h"
#include "vterm/transit_graph.h"

namespace vterm {

struct ODPair {
  GeoPoint origin;
  GeoPoint destination;
};

struct TripResult {
  bool feasible = false;
  std::vector<EdgeId> path;
  double distance_m = 0.0;
  /// Walking share of distance_m (access, egress and transfer edges).
  double walk_m = 0.0;
  int transfers = 0;
  /// Stop ids visited, with consecutive repeats removed.
  std::vector<std::string> stops;
  /// Ride line codes in order, consecutive repeats removed.
  std::vector<std::string> lines;
};

struct RoutingOptions {
  std::size_t k_paths = 30;
  double search_radius_m = 600.0;
};

/// Routes one OD pair: attaches access/egress edges to every stop within the
/// search radius and runs Yen's algorithm. Returns the K paths in ascending
/// distance; an empty vector means infeasible.
std::vector<TripResult> route_pair(const TransitGraph& g, const StopIndex& stops,
                                   const ODPair& od,
                                   const RoutingOptions& options = {});

/// Line changes along a path: distinct consecutive ride lines minus one.
int count_transfers(const TransitGraph& g, std::span<const EdgeId> path);

struct NetworkSummary {
  std::size_t feasible = 0;
  std::size_t infeasible = 0;
  double mean_distance_m = 0.0;
  double q1_distance_m = 0.0;
  double median_distance_m = 0.0;
  double q3_distance_m = 0.0;
  double mean_transfers = 0.0;
  double q1_transfers = 0.0;
  double median_transfers = 0.0;
  double q3_transfers = 0.0;
};

struct ODEvaluation {
  /// Per pair, the K paths of each network (best first; empty = infeasible).
  std::vector<std::vector<TripResult>> base;
  std::vector<std::vector<TripResult>> clustered;
  NetworkSummary base_summary;
  NetworkSummary clustered_summary;

  static const TripResult& best(const std::vector<TripResult>& k_paths);
};

/// Evaluates every pair on both networks. Pairs run on `jobs` worker threads;
/// results are stored by pair index, so the output does not depend on jobs.
ODEvaluation evaluate_od(std::span<const ODPair> pairs,
                         const TransitGraph& base,
                         const TransitGraph& clustered, const StopIndex& stops,
                         const RoutingOptions& options = {}, int jobs = 1);

NetworkSummary summarize(const std::vector<std::vector<TripResult>>& results);

/// Seeded synthetic OD survey: each endpoint is a uniformly chosen stop (so
/// density follows stop density) displaced by up to `jitter_m` and clamped
/// to the network bounding box.
std::vector<ODPair> generate_od_pairs(const StopIndex& stops,
                                      std::size_t count, std::uint64_t seed,
                                      double jitter_m = 400.0);

}  // namespace vterm

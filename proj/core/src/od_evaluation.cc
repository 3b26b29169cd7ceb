#include "vterm/od_evaluation.h"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

#include "vterm/availability.h"
#include "vterm/error.h"

namespace vterm {

int count_transfers(const TransitGraph& g, std::span<const EdgeId> path) {
  int segments = 0;
  const std::string* current = nullptr;
  for (EdgeId e : path) {
    const EdgeInfo& info = g.edge_info(e);
    if (info.kind != EdgeKind::kRide) continue;
    if (current == nullptr || *current != info.line_code) {
      ++segments;
      current = &info.line_code;
    }
  }
  return std::max(0, segments - 1);
}

namespace {

TripResult describe(const TransitGraph& g, const Path& p) {
  TripResult r;
  r.feasible = true;
  r.path = p.edges;
  r.distance_m = p.weight;
  r.transfers = count_transfers(g, p.edges);
  for (EdgeId e : p.edges) {
    const EdgeInfo& info = g.edge_info(e);
    const auto& edge = g.graph().edge(e);
    switch (info.kind) {
      case EdgeKind::kAccess:
      case EdgeKind::kEgress:
      case EdgeKind::kTransfer:
        r.walk_m += edge.weight;
        break;
      case EdgeKind::kRide:
        if (r.lines.empty() || r.lines.back() != info.line_code) {
          r.lines.push_back(info.line_code);
        }
        break;
      default:
        break;
    }
    const NodeInfo& to = g.node(edge.to);
    if (!to.stop_id.empty() &&
        (r.stops.empty() || r.stops.back() != to.stop_id)) {
      r.stops.push_back(to.stop_id);
    }
  }
  return r;
}

}  // namespace

std::vector<TripResult> route_pair(const TransitGraph& g, const StopIndex& stops,
                                   const ODPair& od,
                                   const RoutingOptions& options) {
  const auto near_origin = nearest_stops(od.origin, stops, options.search_radius_m);
  const auto near_dest =
      nearest_stops(od.destination, stops, options.search_radius_m);
  if (near_origin.empty() || near_dest.empty()) return {};

  TransitGraph work = g;
  const NodeId origin = work.add_virtual_node(NodeKind::kOrigin);
  const NodeId dest = work.add_virtual_node(NodeKind::kDestination);
  for (const NearbyStop& s : near_origin) {
    if (auto n = work.stop_node(s.stop_id)) {
      work.add_edge(origin, *n, s.distance_m, {EdgeKind::kAccess, {}, 0});
    }
  }
  for (const NearbyStop& s : near_dest) {
    if (auto n = work.stop_node(s.stop_id)) {
      work.add_edge(*n, dest, s.distance_m, {EdgeKind::kEgress, {}, 0});
    }
  }

  std::vector<TripResult> out;
  for (const Path& p : yen_k_shortest(work.graph(), origin, dest, options.k_paths)) {
    out.push_back(describe(work, p));
  }
  return out;
}

const TripResult& ODEvaluation::best(const std::vector<TripResult>& k_paths) {
  static const TripResult kInfeasible{};
  if (k_paths.empty()) return kInfeasible;
  return *std::min_element(
      k_paths.begin(), k_paths.end(),
      [](const TripResult& a, const TripResult& b) {
        return a.distance_m < b.distance_m;
      });
}

NetworkSummary summarize(const std::vector<std::vector<TripResult>>& results) {
  NetworkSummary s;
  std::vector<double> distance;
  std::vector<double> transfers;
  for (const auto& k_paths : results) {
    const TripResult& best = ODEvaluation::best(k_paths);
    if (!best.feasible) {
      ++s.infeasible;
      continue;
    }
    ++s.feasible;
    distance.push_back(best.distance_m);
    transfers.push_back(best.transfers);
  }
  if (distance.empty()) return s;
  auto mean = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  };
  s.mean_distance_m = mean(distance);
  s.q1_distance_m = quantile_type7(distance, 0.25);
  s.median_distance_m = quantile_type7(distance, 0.5);
  s.q3_distance_m = quantile_type7(distance, 0.75);
  s.mean_transfers = mean(transfers);
  s.q1_transfers = quantile_type7(transfers, 0.25);
  s.median_transfers = quantile_type7(transfers, 0.5);
  s.q3_transfers = quantile_type7(transfers, 0.75);
  return s;
}

ODEvaluation evaluate_od(std::span<const ODPair> pairs,
                         const TransitGraph& base,
                         const TransitGraph& clustered, const StopIndex& stops,
                         const RoutingOptions& options, int jobs) {
  ODEvaluation ev;
  ev.base.resize(pairs.size());
  ev.clustered.resize(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      ev.base[i] = route_pair(base, stops, pairs[i], options);
      ev.clustered[i] = route_pair(clustered, stops, pairs[i], options);
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(pairs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  ev.base_summary = summarize(ev.base);
  ev.clustered_summary = summarize(ev.clustered);
  return ev;
}

std::vector<ODPair> generate_od_pairs(const StopIndex& stops,
                                      std::size_t count, std::uint64_t seed,
                                      double jitter_m) {
  if (stops.empty()) throw Error("cannot generate OD pairs without stops");
  std::vector<const BusStop*> pool;
  GeoPoint lo{90.0, 180.0};
  GeoPoint hi{-90.0, -180.0};
  for (const auto& [id, s] : stops) {
    pool.push_back(&s);
    lo.lat = std::min(lo.lat, s.location.lat);
    lo.lon = std::min(lo.lon, s.location.lon);
    hi.lat = std::max(hi.lat, s.location.lat);
    hi.lon = std::max(hi.lon, s.location.lon);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> offset(-jitter_m, jitter_m);
  auto sample = [&] {
    const GeoPoint base = pool[pick(rng)]->location;
    const double east = offset(rng);
    const double north = offset(rng);
    GeoPoint p = LocalFrame(base).to_geo(east, north);
    p.lat = std::clamp(p.lat, lo.lat, hi.lat);
    p.lon = std::clamp(p.lon, lo.lon, hi.lon);
    return p;
  };
  std::vector<ODPair> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const GeoPoint o = sample();
    const GeoPoint d = sample();
    out.push_back({o, d});
  }
  return out;
}

}  // namespace vterm

#include "vterm/transit_graph.h"

#include <algorithm>

#include "vterm/error.h"

namespace vterm {

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kRide: return "ride";
    case EdgeKind::kBoard: return "board";
    case EdgeKind::kAlight: return "alight";
    case EdgeKind::kTransfer: return "transfer";
    case EdgeKind::kAccess: return "access";
    case EdgeKind::kEgress: return "egress";
  }
  return "unknown";
}

std::optional<NodeId> TransitGraph::stop_node(std::string_view stop_id) const {
  auto it = stop_nodes_.find(stop_id);
  if (it == stop_nodes_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> TransitGraph::line_node(std::string_view stop_id,
                                              std::string_view line_code) const {
  auto it = line_nodes_.find({std::string(stop_id), std::string(line_code)});
  if (it == line_nodes_.end()) return std::nullopt;
  return it->second;
}

std::size_t TransitGraph::count_edges(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edge_info_.begin(), edge_info_.end(),
                    [&](const EdgeInfo& e) { return e.kind == kind; }));
}

const GeoPoint& TransitGraph::stop_location(std::string_view stop_id) const {
  auto it = locations_.find(stop_id);
  if (it == locations_.end()) {
    throw Error("stop '" + std::string(stop_id) + "' is not in the graph");
  }
  return it->second;
}

NodeId TransitGraph::add_stop_node(const BusStop& stop) {
  if (auto existing = stop_node(stop.stop_id)) return *existing;
  const NodeId n = graph_.add_node();
  nodes_.push_back({NodeKind::kStop, stop.stop_id, {}});
  stop_nodes_.emplace(stop.stop_id, n);
  locations_.emplace(stop.stop_id, stop.location);
  return n;
}

NodeId TransitGraph::add_line_node(const std::string& stop_id,
                                   const std::string& line) {
  if (auto existing = line_node(stop_id, line)) return *existing;
  const auto stop = stop_node(stop_id);
  if (!stop) throw Error("stop '" + stop_id + "' is not in the graph");
  const NodeId n = graph_.add_node();
  nodes_.push_back({NodeKind::kLineStop, stop_id, line});
  line_nodes_.emplace(std::make_pair(stop_id, line), n);
  add_edge(*stop, n, 0.0, {EdgeKind::kBoard, line, 0});
  add_edge(n, *stop, 0.0, {EdgeKind::kAlight, line, 0});
  return n;
}

NodeId TransitGraph::add_virtual_node(NodeKind kind) {
  const NodeId n = graph_.add_node();
  nodes_.push_back({kind, {}, {}});
  return n;
}

EdgeId TransitGraph::add_edge(NodeId from, NodeId to, double weight,
                              EdgeInfo info) {
  const EdgeId e = graph_.add_edge(from, to, weight);
  edge_info_.push_back(std::move(info));
  return e;
}

bool TransitGraph::add_transfer(const std::string& a, const std::string& b,
                                int cluster_id) {
  if (a == b) return false;
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  if (transfers_.contains(key)) return false;
  const auto na = stop_node(a);
  const auto nb = stop_node(b);
  if (!na || !nb) {
    throw Error("transfer between unknown stops '" + a + "' and '" + b + "'");
  }
  const double d = haversine_m(stop_location(a), stop_location(b));
  add_edge(*na, *nb, d, {EdgeKind::kTransfer, {}, cluster_id});
  add_edge(*nb, *na, d, {EdgeKind::kTransfer, {}, cluster_id});
  transfers_.insert(std::move(key));
  return true;
}

bool TransitGraph::add_ride(const std::string& a, const std::string& b,
                            const std::string& line, double weight) {
  if (!rides_.emplace(a, b, line).second) return false;
  const NodeId from = add_line_node(a, line);
  const NodeId to = add_line_node(b, line);
  add_edge(from, to, weight, {EdgeKind::kRide, line, 0});
  return true;
}

TransitGraph build_graph(std::span<const ItineraryDef> itineraries,
                         const StopIndex& stops) {
  TransitGraph g;
  for (const auto& [id, stop] : stops) g.add_stop_node(stop);
  for (const ItineraryDef& iti : itineraries) {
    for (const ItineraryStop& s : iti.stops) {
      if (!stops.contains(s.stop_id)) {
        throw Error("itinerary " + iti.line_code + "/" + iti.direction +
                    " references unknown stop '" + s.stop_id + "'");
      }
    }
    for (std::size_t i = 0; i + 1 < iti.stops.size(); ++i) {
      const std::string& a = iti.stops[i].stop_id;
      const std::string& b = iti.stops[i + 1].stop_id;
      const double d = haversine_m(stops.find(a)->second.location,
                                   stops.find(b)->second.location);
      if (!(d > 0.0)) {
        throw InvariantError("zero-length ride " + a + " -> " + b +
                             " on line " + iti.line_code);
      }
      g.add_ride(a, b, iti.line_code, d);
    }
  }
  return g;
}

TransitGraph add_cluster_transfers(const TransitGraph& g,
                                   std::span<const Cluster> clusters) {
  TransitGraph out = g;
  for (const Cluster& c : clusters) {
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      for (std::size_t j = i + 1; j < c.members.size(); ++j) {
        out.add_transfer(c.members[i], c.members[j], c.cluster_id);
      }
    }
  }
  return out;
}

std::vector<NearbyStop> nearest_stops(const GeoPoint& p,
                                      const StopIndex& stops,
                                      double radius_m) {
  std::vector<NearbyStop> out;
  for (const auto& [id, stop] : stops) {
    const double d = haversine_m(p, stop.location);
    if (d <= radius_m) out.push_back({id, d});
  }
  std::sort(out.begin(), out.end(), [](const NearbyStop& a, const NearbyStop& b) {
    if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
    return a.stop_id < b.stop_id;
  });
  return out;
}

}  // namespace vterm

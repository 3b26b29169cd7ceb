#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vterm/clustering.h"
#include "vterm/graph.h"
#include "vterm/model.h"

namespace vterm {

enum class NodeKind { kStop, kLineStop, kOrigin, kDestination };
enum class EdgeKind { kRide, kBoard, kAlight, kTransfer, kAccess, kEgress };

std::string_view to_string(EdgeKind kind);

struct NodeInfo {
  NodeKind kind = NodeKind::kStop;
  std::string stop_id;
  std::string line_code;  // kLineStop only
};

struct EdgeInfo {
  EdgeKind kind = EdgeKind::kRide;
  std::string line_code;  // kRide only
  int cluster_id = 0;     // kTransfer only
};

/// Stop nodes shared by all lines, one line node per (stop, line) and
/// zero-weight board/alight edges between them. Ride, transfer and access
/// edges are weighted by haversine distance in meters.
class TransitGraph {
 public:
  const Digraph& graph() const { return graph_; }
  const NodeInfo& node(NodeId n) const { return nodes_[n]; }
  const EdgeInfo& edge_info(EdgeId e) const { return edge_info_[e]; }

  std::optional<NodeId> stop_node(std::string_view stop_id) const;
  std::optional<NodeId> line_node(std::string_view stop_id,
                                  std::string_view line_code) const;
  std::size_t count_edges(EdgeKind kind) const;
  const GeoPoint& stop_location(std::string_view stop_id) const;

  NodeId add_stop_node(const BusStop& stop);
  NodeId add_line_node(const std::string& stop_id, const std::string& line);
  NodeId add_virtual_node(NodeKind kind);
  EdgeId add_edge(NodeId from, NodeId to, double weight, EdgeInfo info);

  /// Adds a transfer pair a <-> b unless one already exists. Returns whether
  /// edges were added.
  bool add_transfer(const std::string& a, const std::string& b,
                    int cluster_id);
  /// Adds a ride edge a -> b on `line` (creating line nodes) unless it
  /// already exists.
  bool add_ride(const std::string& a, const std::string& b,
                const std::string& line, double weight);

 private:
  Digraph graph_;
  std::vector<NodeInfo> nodes_;
  std::vector<EdgeInfo> edge_info_;
  std::map<std::string, NodeId, std::less<>> stop_nodes_;
  std::map<std::pair<std::string, std::string>, NodeId> line_nodes_;
  std::map<std::string, GeoPoint, std::less<>> locations_;
  std::set<std::pair<std::string, std::string>> transfers_;
  std::set<std::tuple<std::string, std::string, std::string>> rides_;
};

/// Builds the base network. Every stop of `stops` gets a node; each
/// itinerary contributes ride edges between consecutive positions. Throws
/// vterm::Error on an unresolvable stop and InvariantError on a zero-length
/// ride.
TransitGraph build_graph(std::span<const ItineraryDef> itineraries,
                         const StopIndex& stops);

/// Copy of `g` with bidirectional transfer edges between every member pair
/// of every cluster. Existing pairs are not duplicated.
TransitGraph add_cluster_transfers(const TransitGraph& g,
                                   std::span<const Cluster> clusters);

struct NearbyStop {
  std::string stop_id;
  double distance_m = 0.0;

  friend bool operator==(const NearbyStop&, const NearbyStop&) = default;
};

/// Stops within `radius_m` (inclusive), ascending by distance then stop_id.
std::vector<NearbyStop> nearest_stops(const GeoPoint& p,
                                      const StopIndex& stops,
                                      double radius_m = 600.0);

}  // namespace vterm

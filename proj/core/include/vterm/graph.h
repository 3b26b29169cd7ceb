#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace vterm {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Directed multigraph with non-negative edge weights.
class Digraph {
 public:
  struct Edge {
    NodeId from;
    NodeId to;
    double weight;
  };

  NodeId add_node();
  /// Throws vterm::Error on unknown endpoints or a negative/NaN weight.
  EdgeId add_edge(NodeId from, NodeId to, double weight);

  std::size_t node_count() const { return out_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const EdgeId> out_edges(NodeId n) const { return out_[n]; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
};

/// A walk through the graph as an edge sequence.
struct Path {
  std::vector<EdgeId> edges;
  double weight = 0.0;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Left-to-right sum of edge weights.
double path_weight(const Digraph& g, std::span<const EdgeId> edges);
/// Node sequence of a path starting at `source`.
std::vector<NodeId> path_nodes(const Digraph& g, NodeId source,
                               std::span<const EdgeId> edges);

/// Single-pair Dijkstra that may skip blocked nodes and edges (either span
/// may be empty; otherwise it is indexed by id). Ties prefer the first
/// relaxation in edge-insertion order, so results are deterministic.
std::optional<Path> shortest_path(const Digraph& g, NodeId source,
                                  NodeId target,
                                  std::span<const char> blocked_nodes = {},
                                  std::span<const char> blocked_edges = {});

/// Yen's algorithm (with Lawler's spur-node restriction): up to k loopless
/// paths in ascending weight. Empty when the target is unreachable or
/// source == target.
std::vector<Path> yen_k_shortest(const Digraph& g, NodeId source,
                                 NodeId target, std::size_t k);

}  // namespace vterm

#include "vterm/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include "vterm/error.h"

namespace vterm {

NodeId Digraph::add_node() {
  out_.emplace_back();
  return static_cast<NodeId>(out_.size() - 1);
}

EdgeId Digraph::add_edge(NodeId from, NodeId to, double weight) {
  if (from >= out_.size() || to >= out_.size()) {
    throw Error("edge endpoint out of range");
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error("edge weights must be finite and non-negative");
  }
  edges_.push_back({from, to, weight});
  const auto id = static_cast<EdgeId>(edges_.size() - 1);
  out_[from].push_back(id);
  return id;
}

double path_weight(const Digraph& g, std::span<const EdgeId> edges) {
  double w = 0.0;
  for (EdgeId e : edges) w += g.edge(e).weight;
  return w;
}

std::vector<NodeId> path_nodes(const Digraph& g, NodeId source,
                               std::span<const EdgeId> edges) {
  std::vector<NodeId> nodes{source};
  for (EdgeId e : edges) nodes.push_back(g.edge(e).to);
  return nodes;
}

std::optional<Path> shortest_path(const Digraph& g, NodeId source,
                                  NodeId target,
                                  std::span<const char> blocked_nodes,
                                  std::span<const char> blocked_edges) {
  const std::size_t n = g.node_count();
  if (source >= n || target >= n) throw Error("node out of range");
  auto node_blocked = [&](NodeId v) {
    return !blocked_nodes.empty() && blocked_nodes[v];
  };
  if (node_blocked(source) || node_blocked(target)) return std::nullopt;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<EdgeId> via(n, std::numeric_limits<EdgeId>::max());
  std::vector<char> done(n, 0);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == target) break;
    for (EdgeId e : g.out_edges(u)) {
      if (!blocked_edges.empty() && blocked_edges[e]) continue;
      const auto& edge = g.edge(e);
      if (done[edge.to] || node_blocked(edge.to)) continue;
      const double nd = d + edge.weight;
      if (nd < dist[edge.to]) {
        dist[edge.to] = nd;
        via[edge.to] = e;
        queue.emplace(nd, edge.to);
      }
    }
  }
  if (!done[target]) return std::nullopt;

  Path path;
  for (NodeId v = target; v != source;) {
    const EdgeId e = via[v];
    path.edges.push_back(e);
    v = g.edge(e).from;
  }
  std::reverse(path.edges.begin(), path.edges.end());
  path.weight = path_weight(g, path.edges);
  return path;
}

std::vector<Path> yen_k_shortest(const Digraph& g, NodeId source,
                                 NodeId target, std::size_t k) {
  std::vector<Path> accepted;
  if (k == 0 || source == target) return accepted;
  auto first = shortest_path(g, source, target);
  if (!first) return accepted;

  struct Candidate {
    Path path;
    std::size_t deviation;
  };
  auto order = [](const Candidate& a, const Candidate& b) {
    return std::tie(a.path.weight, a.path.edges) <
           std::tie(b.path.weight, b.path.edges);
  };
  std::set<Candidate, decltype(order)> pending(order);
  std::set<std::vector<EdgeId>> known{first->edges};
  std::vector<std::size_t> deviation{0};
  accepted.push_back(std::move(*first));

  std::vector<char> blocked_nodes(g.node_count(), 0);
  std::vector<char> blocked_edges(g.edge_count(), 0);

  while (accepted.size() < k) {
    const Path& last = accepted.back();
    const std::vector<NodeId> nodes = path_nodes(g, source, last.edges);
    for (std::size_t i = deviation.back(); i < last.edges.size(); ++i) {
      const NodeId spur = nodes[i];
      const std::span<const EdgeId> root(last.edges.data(), i);

      std::vector<EdgeId> cut;
      for (const Path& p : accepted) {
        if (p.edges.size() > i && std::equal(root.begin(), root.end(), p.edges.begin())) {
          cut.push_back(p.edges[i]);
        }
      }
      for (EdgeId e : cut) blocked_edges[e] = 1;
      for (std::size_t j = 0; j < i; ++j) blocked_nodes[nodes[j]] = 1;

      auto spur_path = shortest_path(g, spur, target, blocked_nodes, blocked_edges);

      for (EdgeId e : cut) blocked_edges[e] = 0;
      for (std::size_t j = 0; j < i; ++j) blocked_nodes[nodes[j]] = 0;

      if (!spur_path) continue;
      Candidate c;
      c.path.edges.assign(root.begin(), root.end());
      c.path.edges.insert(c.path.edges.end(), spur_path->edges.begin(),
                          spur_path->edges.end());
      c.path.weight = path_weight(g, c.path.edges);
      c.deviation = i;
      if (known.insert(c.path.edges).second) pending.insert(std::move(c));
    }
    if (pending.empty()) break;
    auto best = pending.extract(pending.begin());
    deviation.push_back(best.value().deviation);
    accepted.push_back(std::move(best.value().path));
  }
  return accepted;
}

}  // namespace vterm

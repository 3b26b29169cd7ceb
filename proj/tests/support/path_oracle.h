#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "vterm/graph.h"

namespace vterm::testing {

/// Every simple source-target path by depth-first enumeration, sorted by
/// weight then edge sequence.
inline std::vector<Path> all_simple_paths(const Digraph& g, NodeId s, NodeId t) {
  std::vector<Path> out;
  if (s == t) return out;
  std::vector<char> on(g.node_count(), 0);
  std::vector<EdgeId> stack;
  std::function<void(NodeId)> dfs = [&](NodeId u) {
    if (u == t) {
      out.push_back({stack, path_weight(g, stack)});
      return;
    }
    on[u] = 1;
    for (EdgeId e : g.out_edges(u)) {
      const NodeId v = g.edge(e).to;
      if (on[v]) continue;
      stack.push_back(e);
      dfs(v);
      stack.pop_back();
    }
    on[u] = 0;
  };
  dfs(s);
  std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
    return std::tie(a.weight, a.edges) < std::tie(b.weight, b.edges);
  });
  return out;
}

/// Random simple digraph with continuous weights in [1, 100).
inline Digraph random_digraph(std::mt19937& rng, int max_nodes, double density) {
  std::uniform_int_distribution<int> nodes(2, max_nodes);
  std::uniform_real_distribution<double> w(1.0, 100.0), coin(0.0, 1.0);
  Digraph g;
  const int n = nodes(rng);
  for (int i = 0; i < n; ++i) g.add_node();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b && coin(rng) < density) {
        g.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b), w(rng));
      }
    }
  }
  return g;
}

}  // namespace vterm::testing

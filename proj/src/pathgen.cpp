#include "atp/pathgen.hpp"

#include <algorithm>
#include <string>

namespace atp {
namespace {

struct PathSearch {
  const GridGraph& g;
  const TurnTable& turns;
  const std::vector<std::int32_t>& dist;
  int lambda;
  std::size_t cap;
  std::vector<NodeId> stack;
  std::vector<bool> on_stack;
  std::vector<std::vector<NodeId>>& out;

  // iota counts the edges of the partial path; prev is its last edge.
  void run(NodeId node, EdgeId prev, int iota) {
    if (node == g.runway) {
      if (out.size() >= cap)
        throw PathLimitError("path enumeration exceeded the cap of " + std::to_string(cap));
      out.push_back(stack);
      return;
    }
    for (NodeId next : g.out[node]) {
      if (on_stack[next]) continue;
      if (iota + dist[next] >= lambda - 1) continue;
      if (prev >= 0) {
        const auto& banned = turns.banned_next[prev];
        if (std::binary_search(banned.begin(), banned.end(), next)) continue;
      }
      stack.push_back(next);
      on_stack[next] = true;
      run(next, g.eid(node, next), iota + 1);
      on_stack[next] = false;
      stack.pop_back();
    }
  }
};

}  // namespace

std::vector<std::vector<NodeId>> find_all_paths(const GridGraph& g, const TurnTable& turns,
                                                const std::vector<std::int32_t>& dist,
                                                NodeId start, int lambda, std::size_t cap) {
  std::vector<std::vector<NodeId>> result;
  if (!g.on_grid(start) || !g.present[start] || lambda < 1) return result;
  PathSearch search{g, turns, dist, lambda, cap, {start}, {}, result};
  search.on_stack.assign(g.node_count(), false);
  search.on_stack[start] = true;
  search.run(start, -1, 0);
  return result;
}

PathCatalog build_catalog(const GridGraph& g, const TurnTable& turns, int lambda,
                          std::size_t cap) {
  PathCatalog cat;
  cat.by_entry.resize(g.entries.size());
  cat.through_node.resize(g.node_count());
  cat.through_edge.resize(g.edges.size());
  const auto dist = reverse_bfs_distances(g);
  for (std::size_t b = 0; b < g.entries.size(); ++b) {
    auto node_paths = find_all_paths(g, turns, dist, g.entries[b], lambda,
                                     cap - cat.paths.size());
    for (auto& nodes : node_paths) {
      Path p;
      p.id = static_cast<PathId>(cat.paths.size());
      p.entry_idx = static_cast<int>(b);
      p.nodes = std::move(nodes);
      p.edge_ids.reserve(p.nodes.size() - 1);
      for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
        const EdgeId e = g.eid(p.nodes[i], p.nodes[i + 1]);
        p.edge_ids.push_back(e);
        p.length += g.edge_len[e];
      }
      cat.by_entry[b].push_back(p.id);
      for (NodeId v : p.nodes) cat.through_node[v].push_back(p.id);
      for (EdgeId e : p.edge_ids) cat.through_edge[e].push_back(p.id);
      cat.paths.push_back(std::move(p));
    }
  }
  return cat;
}

}  // namespace atp

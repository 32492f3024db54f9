#pragma once

#include <cstddef>
#include <vector>

#include "atp/grid.hpp"

namespace atp {

using PathId = std::int32_t;

struct Path {
  PathId id = -1;
  int entry_idx = -1;            // position in GridGraph::entries
  std::vector<NodeId> nodes;     // entry ... runway
  std::vector<EdgeId> edge_ids;  // nodes.size() - 1 entries
  double length = 0.0;           // physical length
  int hops() const { return static_cast<int>(edge_ids.size()); }
};

struct PathCatalog {
  std::vector<Path> paths;                        // id == index; grouped by entry
  std::vector<std::vector<PathId>> by_entry;      // aligned with GridGraph::entries
  std::vector<std::vector<PathId>> through_node;  // paths visiting a node
  std::vector<std::vector<PathId>> through_edge;  // paths using an edge
};

inline constexpr std::size_t kDefaultPathCap = 200000;

// Depth-first enumeration of the simple paths from start to the runway with
// at most lambda nodes, honouring the turn table. Successors are visited in
// ascending node id, so the output order is reproducible. Unreachable
// branches are pruned with the hop distances from reverse_bfs_distances.
std::vector<std::vector<NodeId>> find_all_paths(const GridGraph& g, const TurnTable& turns,
                                                const std::vector<std::int32_t>& dist,
                                                NodeId start, int lambda,
                                                std::size_t cap = kDefaultPathCap);

// Runs find_all_paths for every entry and assembles the lookup structures.
// Path ids are assigned per entry in entry-list order, then DFS order.
PathCatalog build_catalog(const GridGraph& g, const TurnTable& turns, int lambda,
                          std::size_t cap = kDefaultPathCap);

}  // namespace atp

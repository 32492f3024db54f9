#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "atp/errors.hpp"

namespace atp {

using NodeId = std::int32_t;  // row-major: node = row * cols + col
using EdgeId = std::int32_t;  // index into GridGraph::edges
using Minute = std::int32_t;  // minutes since the scenario origin

// Sentinel hop distance for nodes that cannot reach the runway. Large enough
// to fail every pruning comparison, small enough not to overflow when added
// to an edge count.
inline constexpr std::int32_t kUnreachable = 1 << 29;

struct Edge {
  NodeId from = -1;
  NodeId to = -1;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::int64_t edge_key(NodeId from, NodeId to) {
  return (static_cast<std::int64_t>(from) << 32) | static_cast<std::uint32_t>(to);
}

struct GridSpec {
  int rows = 0;
  int cols = 0;
  double pixel_side = 1.0;  // physical length of an orthogonal edge
  std::vector<NodeId> entries;
  NodeId runway = -1;
  std::vector<NodeId> obstacles;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Bi-directed 8-neighbour grid graph with the terminal-area degree exceptions:
// no edge enters an entry point, no edge leaves the runway, obstacle nodes are
// deleted outright.
struct GridGraph {
  int rows = 0;
  int cols = 0;
  double pixel_side = 1.0;
  std::vector<NodeId> entries;  // order preserved from the spec
  NodeId runway = -1;
  std::vector<bool> present;    // node exists (false for obstacles)
  std::vector<bool> entry_mask; // per node

  std::vector<Edge> edges;      // deterministic: by from asc, then to asc
  std::vector<double> edge_len; // physical length per edge
  std::vector<std::vector<NodeId>> out;  // successors, ascending
  std::vector<std::vector<NodeId>> in;   // predecessors, ascending
  std::unordered_map<std::int64_t, EdgeId> edge_ids;

  int node_count() const { return rows * cols; }
  int row_of(NodeId n) const { return n / cols; }
  int col_of(NodeId n) const { return n % cols; }
  NodeId at(int r, int c) const { return static_cast<NodeId>(r * cols + c); }
  bool on_grid(NodeId n) const { return n >= 0 && n < node_count(); }
  bool is_entry(NodeId n) const { return on_grid(n) && entry_mask[n]; }
  bool is_runway(NodeId n) const { return n == runway; }

  EdgeId eid(NodeId from, NodeId to) const {
    auto it = edge_ids.find(edge_key(from, to));
    return it == edge_ids.end() ? -1 : it->second;
  }
  bool has_edge(NodeId from, NodeId to) const { return eid(from, to) >= 0; }
};

GridGraph build_grid(const GridSpec& spec);

// Interior angle (degrees) between two chained edges, measured at the shared
// node: 180 means straight-through, 0 means full reversal.
double edge_angle(const GridGraph& g, const Edge& a, const Edge& b);

// Turn restrictions for a minimum interior angle gamma_deg. For each edge e,
// banned_next[e] lists the successor nodes whose continuation would turn
// sharper than gamma, and banned_edges[e] the corresponding continuation
// edges (used by the compact model's curvature rows).
struct TurnTable {
  double gamma_deg = 0.0;
  std::vector<std::vector<NodeId>> banned_next;
  std::vector<std::vector<EdgeId>> banned_edges;
};

TurnTable build_turn_table(const GridGraph& g, double gamma_deg);

// Minimum hop count from every node to the runway (edge directions
// respected); kUnreachable where no route exists.
std::vector<std::int32_t> reverse_bfs_distances(const GridGraph& g);

// One unit square per anchor node (anchor not in the last row/column).  Each
// applicable no-crossing pattern is materialised as the list of existing
// diagonal edges that may not be used together; squares that touch the runway
// match no pattern and contribute no rows.
struct CrossQuad {
  NodeId anchor = -1;
  enum class Variant { interior, entry_at_a, entry_at_b, entry_at_c, entry_at_d };
  struct Row {
    Variant variant;
    std::vector<EdgeId> edges;  // >= 2 entries
  };
  std::vector<Row> rows;
};

std::vector<CrossQuad> crossing_quads(const GridGraph& g);

}  // namespace atp

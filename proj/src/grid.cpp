#include "atp/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>
#include <string>

namespace atp {
namespace {

const std::array<std::pair<int, int>, 8> kNeighbourSteps = {{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1},
}};

// Direction octant 0..7 in 45-degree steps for a king move (dr, dc).
int octant(int dr, int dc) {
  static const int lut[3][3] = {
      // dc: -1   0   1        dr:
      {3, 2, 1},   // -1
      {4, -1, 0},  //  0
      {5, 6, 7},   //  1
  };
  return lut[dr + 1][dc + 1];
}

}  // namespace

GridGraph build_grid(const GridSpec& spec) {
  if (spec.rows < 2 || spec.cols < 2)
    throw InvalidGridError("grid must be at least 2x2, got " + std::to_string(spec.rows) +
                           "x" + std::to_string(spec.cols));
  if (!(spec.pixel_side > 0.0))
    throw InvalidGridError("pixel side must be positive");

  GridGraph g;
  g.rows = spec.rows;
  g.cols = spec.cols;
  g.pixel_side = spec.pixel_side;
  g.entries = spec.entries;
  g.runway = spec.runway;
  const int n = g.node_count();
  g.present.assign(n, true);
  g.entry_mask.assign(n, false);

  if (!g.on_grid(spec.runway)) throw BadEntryError("runway node is off the grid");
  for (NodeId ob : spec.obstacles) {
    if (!g.on_grid(ob)) throw BadEntryError("obstacle node is off the grid");
    g.present[ob] = false;
  }
  std::set<NodeId> seen;
  for (NodeId e : spec.entries) {
    if (!g.on_grid(e)) throw BadEntryError("entry node is off the grid");
    if (!seen.insert(e).second) throw BadEntryError("duplicate entry node");
    if (e == spec.runway) throw BadEntryError("entry coincides with the runway");
    if (!g.present[e]) throw BadEntryError("entry coincides with an obstacle");
    g.entry_mask[e] = true;
  }
  if (!g.present[spec.runway]) throw BadEntryError("runway coincides with an obstacle");

  g.out.assign(n, {});
  g.in.assign(n, {});
  const double diag = std::sqrt(2.0) * g.pixel_side;
  for (NodeId from = 0; from < n; ++from) {
    if (!g.present[from] || from == g.runway) continue;
    const int r = g.row_of(from), c = g.col_of(from);
    for (const auto& [dr, dc] : kNeighbourSteps) {
      const int rr = r + dr, cc = c + dc;
      if (rr < 0 || rr >= g.rows || cc < 0 || cc >= g.cols) continue;
      const NodeId to = g.at(rr, cc);
      if (!g.present[to] || g.entry_mask[to]) continue;
      const EdgeId id = static_cast<EdgeId>(g.edges.size());
      g.edges.push_back({from, to});
      g.edge_len.push_back(dr != 0 && dc != 0 ? diag : g.pixel_side);
      g.edge_ids.emplace(edge_key(from, to), id);
      g.out[from].push_back(to);
      g.in[to].push_back(from);
    }
  }
  for (auto& v : g.out) std::sort(v.begin(), v.end());
  for (auto& v : g.in) std::sort(v.begin(), v.end());
  return g;
}

double edge_angle(const GridGraph& g, const Edge& a, const Edge& b) {
  const int o1 = octant(g.row_of(a.to) - g.row_of(a.from), g.col_of(a.to) - g.col_of(a.from));
  const int o2 = octant(g.row_of(b.to) - g.row_of(b.from), g.col_of(b.to) - g.col_of(b.from));
  int diff = std::abs(o2 - o1) % 8;
  diff = std::min(diff, 8 - diff);
  return 180.0 - 45.0 * diff;
}

TurnTable build_turn_table(const GridGraph& g, double gamma_deg) {
  if (gamma_deg < 0.0 || gamma_deg > 180.0)
    throw InvalidGridError("gamma must lie in [0, 180] degrees");
  TurnTable t;
  t.gamma_deg = gamma_deg;
  t.banned_next.resize(g.edges.size());
  t.banned_edges.resize(g.edges.size());
  for (EdgeId e = 0; e < static_cast<EdgeId>(g.edges.size()); ++e) {
    const NodeId mid = g.edges[e].to;
    for (NodeId succ : g.out[mid]) {
      if (edge_angle(g, g.edges[e], {mid, succ}) < gamma_deg) {
        t.banned_next[e].push_back(succ);
        t.banned_edges[e].push_back(g.eid(mid, succ));
      }
    }
  }
  return t;
}

std::vector<std::int32_t> reverse_bfs_distances(const GridGraph& g) {
  std::vector<std::int32_t> dist(g.node_count(), kUnreachable);
  std::deque<NodeId> queue;
  dist[g.runway] = 0;
  queue.push_back(g.runway);
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : g.in[v]) {
      if (dist[u] == kUnreachable) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

std::vector<CrossQuad> crossing_quads(const GridGraph& g) {
  std::vector<CrossQuad> quads;
  using Variant = CrossQuad::Variant;
  for (int r = 0; r + 1 < g.rows; ++r) {
    for (int c = 0; c + 1 < g.cols; ++c) {
      CrossQuad q;
      q.anchor = g.at(r, c);
      const NodeId a = q.anchor;           // top-left
      const NodeId b = a + 1;              // top-right
      const NodeId cn = a + g.cols;        // bottom-left
      const NodeId d = a + g.cols + 1;     // bottom-right
      const auto special = [&](NodeId v) { return g.is_entry(v) || g.is_runway(v); };

      const EdgeId ad = g.eid(a, d), da = g.eid(d, a);
      const EdgeId cb = g.eid(cn, b), bc = g.eid(b, cn);

      auto add = [&](Variant variant, std::initializer_list<EdgeId> ids) {
        CrossQuad::Row row{variant, {}};
        for (EdgeId id : ids)
          if (id >= 0) row.edges.push_back(id);
        if (row.edges.size() < 2) return;
        for (const auto& prev : q.rows)
          if (prev.edges == row.edges) return;
        q.rows.push_back(std::move(row));
      };

      if (!special(a) && !special(b) && !special(cn) && !special(d))
        add(Variant::interior, {ad, da, cb, bc});
      if (g.is_entry(a)) add(Variant::entry_at_a, {ad, cb, bc});
      if (g.is_entry(b)) add(Variant::entry_at_b, {ad, da, bc});
      if (g.is_entry(cn)) add(Variant::entry_at_c, {ad, da, cb});
      if (g.is_entry(d)) add(Variant::entry_at_d, {da, cb, bc});

      quads.push_back(std::move(q));
    }
  }
  return quads;
}

}  // namespace atp

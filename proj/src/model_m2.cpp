#include "atp/model_m2.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "atp/errors.hpp"

namespace atp {
namespace {

using Terms = std::vector<std::pair<int, double>>;

std::string shift_suffix(int s) {
  return s < 0 ? "m" + std::to_string(-s) : "p" + std::to_string(s);
}

// Canonical image of a row body, used to suppress exact duplicates before
// they reach the model: sorted by column, repeats merged, zeros dropped.
Terms canonical(Terms t) {
  std::sort(t.begin(), t.end());
  Terms out;
  out.reserve(t.size());
  for (const auto& [var, coef] : t) {
    if (!out.empty() && out.back().first == var) {
      out.back().second += coef;
    } else {
      out.emplace_back(var, coef);
    }
  }
  std::erase_if(out, [](const auto& p) { return p.second == 0.0; });
  return out;
}

const char* cross_tag(CrossQuad::Variant v) {
  switch (v) {
    case CrossQuad::Variant::interior:
      return "m2.cross.int";
    case CrossQuad::Variant::entry_at_a:
      return "m2.cross.a";
    case CrossQuad::Variant::entry_at_b:
      return "m2.cross.b";
    case CrossQuad::Variant::entry_at_c:
      return "m2.cross.c";
    case CrossQuad::Variant::entry_at_d:
      return "m2.cross.d";
  }
  return "m2.cross";
}

std::vector<std::vector<int>> aircraft_by_category(const Scenario& sc) {
  std::vector<std::vector<int>> by_cat(sc.separation.count());
  for (int a = 0; a < static_cast<int>(sc.aircraft.size()); ++a)
    by_cat[sc.aircraft[a].category].push_back(a);
  return by_cat;
}

struct Builder {
  const GridGraph& g;
  const PathCatalog& cat;
  const OccupancyIndex& idx;
  const Scenario& sc;
  M2Model m;
  int mu = 0;
  std::vector<std::vector<int>> by_cat;

  Builder(const GridGraph& g_, const PathCatalog& cat_, const OccupancyIndex& idx_,
          const Scenario& sc_)
      : g(g_), cat(cat_), idx(idx_), sc(sc_) {}

  void check_inputs() {
    if (cat.by_entry.size() != g.entries.size() || cat.through_edge.size() != g.edges.size())
      throw IndexMismatchError("path catalog does not match the grid");
    for (std::size_t b = 0; b < cat.by_entry.size(); ++b)
      if (cat.by_entry[b].empty())
        throw EmptyCatalogError("entry " + std::to_string(b) + " (node " +
                                std::to_string(g.entries[b]) + ") has no admissible path");
    if (idx.mu != effective_mu(sc))
      throw IndexMismatchError("occupancy index built for mu=" + std::to_string(idx.mu) +
                               ", model needs mu=" + std::to_string(effective_mu(sc)));
    if (idx.horizon != sc.horizon)
      throw IndexMismatchError("occupancy index horizon " + std::to_string(idx.horizon) +
                               " differs from scenario horizon " + std::to_string(sc.horizon));
    if (idx.xi.size() != sc.aircraft.size())
      throw IndexMismatchError("occupancy index covers " + std::to_string(idx.xi.size()) +
                               " aircraft, scenario has " + std::to_string(sc.aircraft.size()));
    if (sc.options.single_category && !sc.separation.uniform())
      throw InvalidScenarioError(
          "the shared-sigma formulation needs a uniform separation matrix");
  }

  void add_vars() {
    const double beta = sc.options.beta;
    m.edges = g.edges;
    m.x_var.reserve(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      m.x_var.push_back(m.mip.add_binary(
          "x_" + std::to_string(g.edges[e].from) + "_" + std::to_string(g.edges[e].to),
          beta * g.edge_len[e]));

    std::vector<int> fleet(g.entries.size(), 0);
    for (const Aircraft& ac : sc.aircraft) ++fleet[ac.entry_idx];
    m.rho_var.reserve(cat.paths.size());
    for (const Path& p : cat.paths)
      m.rho_var.push_back(m.mip.add_binary("r_" + std::to_string(p.id),
                                           (1.0 - beta) * fleet[p.entry_idx] * p.length));

    m.tau_var.resize(sc.aircraft.size());
    if (!m.uses_tau) return;
    for (int a = 0; a < static_cast<int>(sc.aircraft.size()); ++a) {
      for (PathId pid : cat.by_entry[sc.aircraft[a].entry_idx]) {
        auto it = idx.shifts[a].find(pid);
        if (it == idx.shifts[a].end()) continue;
        for (int s = it->second.first; s <= it->second.second; ++s)
          m.tau_var[a][{pid, s}] = m.mip.add_binary(
              "t_" + std::to_string(a) + "_" + std::to_string(pid) + "_" + shift_suffix(s));
      }
    }
  }

  void add_degree_rows() {
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (!g.present[i] || g.is_entry(i) || g.is_runway(i)) continue;
      if (!g.in[i].empty()) {
        Terms t;
        for (NodeId u : g.in[i]) t.emplace_back(m.x_var[g.eid(u, i)], 1.0);
        m.mip.add_le("m2.indeg", std::move(t), 2.0);
      }
      if (!g.out[i].empty()) {
        Terms t;
        for (NodeId w : g.out[i]) t.emplace_back(m.x_var[g.eid(i, w)], 1.0);
        m.mip.add_le("m2.outdeg", std::move(t), 1.0);
      }
    }
    // Exactly one final-approach edge: routes may not stay merged short of the
    // runway, nor land on it from two directions.
    Terms t;
    for (NodeId u : g.in[g.runway]) t.emplace_back(m.x_var[g.eid(u, g.runway)], 1.0);
    m.mip.add_eq("m2.runway", std::move(t), 1.0);
  }

  void add_crossing_rows() {
    for (const CrossQuad& q : crossing_quads(g))
      for (const CrossQuad::Row& row : q.rows) {
        Terms t;
        for (EdgeId e : row.edges) t.emplace_back(m.x_var[e], 1.0);
        m.mip.add_le(cross_tag(row.variant), std::move(t), 1.0);
      }
  }

  void add_path_rows() {
    for (std::size_t b = 0; b < cat.by_entry.size(); ++b) {
      Terms t;
      for (PathId pid : cat.by_entry[b]) t.emplace_back(m.rho_var[pid], 1.0);
      m.mip.add_eq("m2.onepath", std::move(t), 1.0);
    }
    for (const Path& p : cat.paths)
      for (EdgeId e : p.edge_ids)
        m.mip.add_le("m2.link", {{m.rho_var[p.id], 1.0}, {m.x_var[e], -1.0}}, 0.0);
  }

  void add_trajectory_rows() {
    for (int a = 0; a < static_cast<int>(sc.aircraft.size()); ++a) {
      Terms all;
      for (const auto& [key, var] : m.tau_var[a]) all.emplace_back(var, 1.0);
      m.mip.add_eq("m2.onetraj", std::move(all), 1.0);
      for (PathId pid : cat.by_entry[sc.aircraft[a].entry_idx]) {
        Terms t;
        auto it = idx.shifts[a].find(pid);
        if (it != idx.shifts[a].end())
          for (int s = it->second.first; s <= it->second.second; ++s)
            t.emplace_back(m.tau_var[a].at({pid, s}), 1.0);
        t.emplace_back(m.rho_var[pid], -1.0);
        m.mip.add_eq("m2.traj", std::move(t), 0.0);
      }
    }
  }

  // Fixed entry times leave no trajectory layer, so a path an aircraft cannot
  // finish inside the horizon must be banned from its entry outright.
  void add_fit_rows() {
    std::set<PathId> done;
    for (int a = 0; a < static_cast<int>(sc.aircraft.size()); ++a)
      for (PathId pid : cat.by_entry[sc.aircraft[a].entry_idx])
        if (!idx.shift_valid(a, pid, 0) && done.insert(pid).second)
          m.mip.add_eq("m2.fit", {{m.rho_var[pid], 1.0}}, 0.0);
  }

  // Trajectory variables of aircraft a whose actual time at node i equals t.
  void collect_exact(int a, NodeId i, Minute t, double coef, Terms& out) const {
    const auto& mp = m.tau_var[a];
    for (int s = -mu; s <= mu; ++s) {
      const auto* pids = idx.at(a, i, t - s);
      if (!pids) continue;
      for (PathId pid : *pids) {
        auto it = mp.find({pid, s});
        if (it != mp.end()) out.emplace_back(it->second, coef);
      }
    }
  }

  // Same, for an actual time anywhere in [t, t + sigma - 1].
  void collect_window(int a, NodeId i, Minute t, int sigma, double coef, Terms& out) const {
    for (int dt = 0; dt < sigma; ++dt) collect_exact(a, i, t + dt, coef, out);
  }

  // Big-M rows: whenever a leader of category k1 occupies node i at time t, no
  // follower of category k2 may touch i before sigma(k1,k2) minutes have
  // passed.  Rows where either side is empty are implied by the one-trajectory
  // rows and are skipped; so are exact duplicates at the same node.
  void add_separation_full() {
    const int T = sc.horizon;
    const double omega = sc.separation.max_sigma();
    const int C = sc.separation.count();
    Terms leader, trailer, row;
    for (int k1 = 0; k1 < C; ++k1) {
      for (int k2 = 0; k2 < C; ++k2) {
        if (k1 == k2 || by_cat[k1].empty() || by_cat[k2].empty()) continue;
        const int sigma = sc.separation.sigma[k1][k2];
        for (NodeId i = 0; i < g.node_count(); ++i) {
          if (!g.present[i]) continue;
          std::set<Terms> seen;
          for (Minute t = 0; t <= T; ++t) {
            leader.clear();
            for (int a : by_cat[k1]) collect_exact(a, i, t, omega, leader);
            if (leader.empty()) continue;
            trailer.clear();
            for (int a : by_cat[k2]) collect_window(a, i, t, sigma, 1.0, trailer);
            if (trailer.empty()) continue;
            row = trailer;
            row.insert(row.end(), leader.begin(), leader.end());
            row = canonical(std::move(row));
            if (seen.insert(row).second) m.mip.add_le("m2.sep.diff", row, omega);
          }
        }
      }
    }
    for (int k = 0; k < C; ++k) {
      if (by_cat[k].size() < 2) continue;
      const int sigma = sc.separation.sigma[k][k];
      for (int lead : by_cat[k]) {
        for (NodeId i = 0; i < g.node_count(); ++i) {
          if (!g.present[i]) continue;
          std::set<Terms> seen;
          for (Minute t = 0; t <= T; ++t) {
            leader.clear();
            collect_exact(lead, i, t, omega, leader);
            if (leader.empty()) continue;
            trailer.clear();
            for (int a : by_cat[k])
              if (a != lead) collect_window(a, i, t, sigma, 1.0, trailer);
            if (trailer.empty()) continue;
            row = trailer;
            row.insert(row.end(), leader.begin(), leader.end());
            row = canonical(std::move(row));
            if (seen.insert(row).second) m.mip.add_le("m2.sep.same", row, omega);
          }
        }
      }
    }
  }

  // Uniform sigma turns every pair rule into plain node capacity: at most one
  // aircraft may touch node i inside any sigma-minute window.  Rows covering a
  // single aircraft are implied by its one-trajectory row.
  void add_separation_single() {
    const int sigma = sc.separation.sigma[0][0];
    const int A = static_cast<int>(sc.aircraft.size());
    Terms body;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (!g.present[i]) continue;
      std::set<Terms> seen;
      for (Minute t = 0; t <= sc.horizon; ++t) {
        body.clear();
        int contributors = 0;
        for (int a = 0; a < A; ++a) {
          const std::size_t before = body.size();
          collect_window(a, i, t, sigma, 1.0, body);
          if (body.size() > before) ++contributors;
        }
        if (contributors < 2) continue;
        Terms row = canonical(body);
        if (seen.insert(row).second) m.mip.add_le("m2.sep.single", row, 1.0);
      }
    }
  }

  // Fixed entry times with uniform sigma: occupancy is decided by the path
  // choice alone, so the window rule lands directly on the path variables.  A
  // path hit by two aircraft of its entry inside one window picks up
  // coefficient 2, correctly forcing it out.
  void add_separation_fixed() {
    const int sigma = sc.separation.sigma[0][0];
    const int A = static_cast<int>(sc.aircraft.size());
    Terms body;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (!g.present[i]) continue;
      std::set<Terms> seen;
      for (Minute t = 0; t <= sc.horizon; ++t) {
        body.clear();
        int contributors = 0;
        for (int a = 0; a < A; ++a) {
          const std::size_t before = body.size();
          for (int dt = 0; dt < sigma; ++dt) {
            const auto* pids = idx.at(a, i, t + dt);
            if (!pids) continue;
            for (PathId pid : *pids) body.emplace_back(m.rho_var[pid], 1.0);
          }
          if (body.size() > before) ++contributors;
        }
        if (contributors < 2) continue;
        Terms row = canonical(body);
        if (seen.insert(row).second) m.mip.add_le("m2.sep.fixed", row, 1.0);
      }
    }
  }

  M2Model build() {
    check_inputs();
    mu = idx.mu;
    by_cat = aircraft_by_category(sc);
    m.uses_tau = !(sc.options.single_category && sc.options.fixed_entry);
    m.mip.name = sc.name.empty() ? "m2" : sc.name + ".m2";
    add_vars();
    add_degree_rows();
    add_crossing_rows();
    add_path_rows();
    if (m.uses_tau) {
      add_trajectory_rows();
      if (sc.options.single_category) {
        add_separation_single();
      } else {
        add_separation_full();
      }
    } else {
      add_fit_rows();
      add_separation_fixed();
    }
    return std::move(m);
  }
};

}  // namespace

int effective_mu(const Scenario& sc) { return sc.options.fixed_entry ? 0 : sc.options.mu; }

M2Model build_m2(const GridGraph& g, const PathCatalog& cat, const OccupancyIndex& idx,
                 const Scenario& sc) {
  return Builder(g, cat, idx, sc).build();
}

void add_consistency(M2Model& m, const GridGraph& g, const PathCatalog& cat,
                     const std::vector<Edge>& previous_tree, int u) {
  if (u < 0) throw InvalidScenarioError("tree-change budget must be non-negative");
  std::set<std::pair<NodeId, NodeId>> kept;
  for (const Edge& e : previous_tree) {
    if (!g.has_edge(e.from, e.to))
      throw UnknownEdgeError("previous-tree edge " + std::to_string(e.from) + "->" +
                             std::to_string(e.to) + " is not on the grid");
    kept.insert({e.from, e.to});
  }
  Terms budget;
  budget.reserve(m.edges.size());
  for (EdgeId e = 0; e < static_cast<EdgeId>(m.edges.size()); ++e) {
    const Edge& ed = m.edges[e];
    const int d =
        m.mip.add_binary("d_" + std::to_string(ed.from) + "_" + std::to_string(ed.to));
    budget.emplace_back(d, 1.0);
    if (kept.count({ed.from, ed.to})) {
      // removed edge: d = 1 - x
      m.mip.add_eq("m2.delta.kept", {{d, 1.0}, {m.x_var[e], 1.0}}, 1.0);
    } else {
      // added edge: d = x
      m.mip.add_eq("m2.delta.new", {{d, 1.0}, {m.x_var[e], -1.0}}, 0.0);
    }
  }
  m.mip.add_le("m2.delta.budget", std::move(budget), static_cast<double>(u));
  // An inherited edge may stay in the tree only while some chosen route still
  // flies over it.
  for (EdgeId e = 0; e < static_cast<EdgeId>(m.edges.size()); ++e) {
    if (!kept.count({m.edges[e].from, m.edges[e].to})) continue;
    Terms t{{m.x_var[e], 1.0}};
    for (PathId pid : cat.through_edge[e]) t.emplace_back(m.rho_var[pid], -1.0);
    m.mip.add_le("m2.keep.used", std::move(t), 0.0);
  }
}

void add_carryover(M2Model& m, const GridGraph& g, const PathCatalog& cat,
                   const OccupancyIndex& idx, const Scenario& sc, const CarryoverState& carry) {
  const int A = static_cast<int>(sc.aircraft.size());
  const int mu = idx.mu;
  const auto by_cat = aircraft_by_category(sc);

  auto occupied_at = [&](int a, NodeId i, Minute t, Terms& out) {
    if (m.uses_tau) {
      const auto& mp = m.tau_var[a];
      for (int s = -mu; s <= mu; ++s) {
        const auto* pids = idx.at(a, i, t - s);
        if (!pids) continue;
        for (PathId pid : *pids) {
          auto it = mp.find({pid, s});
          if (it != mp.end()) out.emplace_back(it->second, 1.0);
        }
      }
    } else if (const auto* pids = idx.at(a, i, t)) {
      for (PathId pid : *pids) out.emplace_back(m.rho_var[pid], 1.0);
    }
  };
  auto occupied_window = [&](int a, NodeId i, Minute t, int sigma, Terms& out) {
    for (int dt = 0; dt < sigma; ++dt) occupied_at(a, i, t + dt, out);
  };

  for (const CarryoverNode& cn : carry.nodes) {
    for (int k2 = 0; k2 < sc.separation.count(); ++k2) {
      const int after = sc.separation.sigma[cn.category][k2];
      const int before = sc.separation.sigma[k2][cn.category];
      Terms fwd, bwd;
      for (int a : by_cat[k2]) {
        occupied_window(a, cn.node, cn.t, after, fwd);
        occupied_window(a, cn.node, cn.t - before + 1, before, bwd);
      }
      if (!fwd.empty()) m.mip.add_eq("m2.carry.node.fwd", canonical(std::move(fwd)), 0.0);
      if (!bwd.empty()) m.mip.add_eq("m2.carry.node.bwd", canonical(std::move(bwd)), 0.0);
    }
  }

  // A movement over (from, to) during [t_from, t_to] keeps the opposite
  // direction and, for diagonals, both directions of the crossing diagonal
  // unusable for departures inside that interval.
  auto block_edge = [&](NodeId bf, NodeId bt, Minute t1, Minute t2, const char* tag) {
    const EdgeId e = g.eid(bf, bt);
    if (e < 0) return;
    const auto& through = cat.through_edge[e];
    Terms out;
    for (int a = 0; a < A; ++a) {
      for (Minute t = t1; t <= t2; ++t) {
        if (m.uses_tau) {
          const auto& mp = m.tau_var[a];
          for (int s = -mu; s <= mu; ++s) {
            const auto* pids = idx.at(a, bf, t - s);
            if (!pids) continue;
            for (PathId pid : *pids) {
              if (!std::binary_search(through.begin(), through.end(), pid)) continue;
              auto it = mp.find({pid, s});
              if (it != mp.end()) out.emplace_back(it->second, 1.0);
            }
          }
        } else if (const auto* pids = idx.at(a, bf, t)) {
          for (PathId pid : *pids)
            if (std::binary_search(through.begin(), through.end(), pid))
              out.emplace_back(m.rho_var[pid], 1.0);
        }
      }
    }
    if (!out.empty()) m.mip.add_eq(tag, canonical(std::move(out)), 0.0);
  };

  for (const CarryoverEdge& ce : carry.edges) {
    block_edge(ce.to, ce.from, ce.t_from, ce.t_to, "m2.carry.rev");
    const int r1 = g.row_of(ce.from), c1 = g.col_of(ce.from);
    const int r2 = g.row_of(ce.to), c2 = g.col_of(ce.to);
    if (r1 != r2 && c1 != c2) {
      block_edge(g.at(r1, c2), g.at(r2, c1), ce.t_from, ce.t_to, "m2.carry.cross.fwd");
      block_edge(g.at(r2, c1), g.at(r1, c2), ce.t_from, ce.t_to, "m2.carry.cross.bwd");
    }
  }
}

Solution extract_solution(const M2Model& m, const SolveResult& res, const Scenario& sc,
                          const PathCatalog& cat, const OccupancyIndex& idx) {
  Solution sol;
  sol.status = res.status;
  sol.objective = res.objective;
  sol.gap = res.gap;
  sol.runtime_seconds = res.runtime_seconds;
  if (res.status != SolveStatus::Optimal && res.status != SolveStatus::Feasible) return sol;
  const std::vector<double>& v = res.values;
  if (v.size() != m.mip.vars.size())
    throw DecodeError("assignment has " + std::to_string(v.size()) + " values for " +
                      std::to_string(m.mip.vars.size()) + " columns");

  for (EdgeId e = 0; e < static_cast<EdgeId>(m.edges.size()); ++e)
    if (v[m.x_var[e]] > 0.5) sol.tree.push_back(m.edges[e]);

  sol.routes.assign(cat.by_entry.size(), PathId{-1});
  for (std::size_t b = 0; b < cat.by_entry.size(); ++b) {
    for (PathId pid : cat.by_entry[b]) {
      if (v[m.rho_var[pid]] <= 0.5) continue;
      if (sol.routes[b] >= 0)
        throw DecodeError("entry " + std::to_string(b) + " has two routes selected");
      sol.routes[b] = pid;
    }
    if (sol.routes[b] < 0)
      throw DecodeError("entry " + std::to_string(b) + " has no route selected");
  }

  double deviation = 0.0;
  for (int a = 0; a < static_cast<int>(sc.aircraft.size()); ++a) {
    const Aircraft& ac = sc.aircraft[a];
    PathId pid = -1;
    int shift = 0;
    if (m.uses_tau) {
      bool found = false;
      for (const auto& [key, var] : m.tau_var[a]) {
        if (v[var] <= 0.5) continue;
        if (found) throw DecodeError("aircraft " + ac.id + " has two trajectories selected");
        found = true;
        pid = key.first;
        shift = key.second;
      }
      if (!found) throw DecodeError("aircraft " + ac.id + " has no trajectory selected");
    } else {
      pid = sol.routes[ac.entry_idx];
    }
    auto it = idx.xi[a].find(pid);
    if (it == idx.xi[a].end())
      throw DecodeError("aircraft " + ac.id + " rides a path with no recorded times");
    ScheduleEntry se;
    se.aircraft = ac.id;
    se.entry_idx = ac.entry_idx;
    se.path = pid;
    se.shift = shift;
    se.times = it->second;
    for (Minute& tm : se.times) tm += shift;
    deviation += std::abs(static_cast<double>(shift));
    sol.schedule.push_back(std::move(se));
  }
  sol.avg_deviation = sc.aircraft.empty() ? 0.0 : deviation / sc.aircraft.size();
  return sol;
}

Solution solve_m2(const GridGraph& g, const PathCatalog& cat, const OccupancyIndex& idx,
                  const Scenario& sc, MipBackend& backend, const SolveParams& params) {
  M2Model m = build_m2(g, cat, idx, sc);
  if (sc.options.consistency_u)
    add_consistency(m, g, cat, sc.options.previous_tree, *sc.options.consistency_u);
  if (sc.options.carryover && !sc.options.carryover->empty())
    add_carryover(m, g, cat, idx, sc, *sc.options.carryover);
  const SolveResult res = backend.solve(m.mip, params);
  return extract_solution(m, res, sc, cat, idx);
}

}  // namespace atp

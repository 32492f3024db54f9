#include "atp/validator.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "atp/trajectories.hpp"

namespace atp {

bool ValidationReport::has(const std::string& family) const {
  for (const Violation& v : violations)
    if (v.family == family) return true;
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  if (violations.empty()) {
    out << "clean (avg deviation " << avg_deviation << ")";
    return out.str();
  }
  out << violations.size() << " violation(s):";
  for (const Violation& v : violations) out << "\n  [" << v.family << "] " << v.detail;
  return out.str();
}

std::vector<SeparationConflict> find_separation_conflicts(const std::vector<Visit>& visits,
                                                          const SeparationMatrix& sep) {
  for (const Visit& v : visits)
    if (v.category < 0 || v.category >= sep.count())
      throw InvalidScenarioError("visit carries an unknown category index");

  std::vector<std::size_t> order(visits.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Visit& va = visits[a];
    const Visit& vb = visits[b];
    return std::tie(va.key, va.t, va.aircraft, a) < std::tie(vb.key, vb.t, vb.aircraft, b);
  });

  std::vector<SeparationConflict> out;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi < order.size() && visits[order[hi]].key == visits[order[lo]].key) ++hi;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < hi; ++j) {
        const Visit& lead = visits[order[i]];
        const Visit& trail = visits[order[j]];
        if (lead.aircraft == trail.aircraft) continue;
        const int required = sep.sigma[lead.category][trail.category];
        const int actual = trail.t - lead.t;
        if (actual < required) out.push_back({order[i], order[j], required, actual});
      }
    }
    lo = hi;
  }
  return out;
}

std::vector<std::string> check_separation_labeled(const std::vector<LabeledVisit>& visits,
                                                  const SeparationMatrix& sep) {
  std::vector<Visit> raw;
  raw.reserve(visits.size());
  std::map<std::string, int> aircraft_ids;
  std::map<std::string, std::int64_t> key_ids;
  for (const LabeledVisit& v : visits) {
    const int cat = sep.category_index(v.category);
    if (cat < 0)
      throw InvalidScenarioError("unknown category '" + v.category + "' for " + v.aircraft);
    const int ac = static_cast<int>(aircraft_ids.emplace(v.aircraft, aircraft_ids.size()).first->second);
    const std::int64_t key = key_ids.emplace(v.key, key_ids.size()).first->second;
    raw.push_back({ac, cat, key, v.t});
  }
  std::vector<std::string> out;
  for (const SeparationConflict& c : find_separation_conflicts(raw, sep)) {
    const LabeledVisit& lead = visits[c.leader];
    const LabeledVisit& trail = visits[c.trailer];
    std::ostringstream msg;
    msg << "at " << lead.key << ": " << lead.aircraft << " (t=" << lead.t << ") and "
        << trail.aircraft << " (t=" << trail.t << ") separated by " << c.actual << " < "
        << c.required;
    out.push_back(msg.str());
  }
  return out;
}

double mean_abs_deviation(const std::vector<std::pair<Minute, Minute>>& planned_actual) {
  if (planned_actual.empty()) return 0.0;
  long sum = 0;
  for (const auto& [planned, actual] : planned_actual) sum += std::abs(actual - planned);
  return static_cast<double>(sum) / static_cast<double>(planned_actual.size());
}

namespace {

struct Checker {
  const Scenario& sc;
  const GridGraph& g;
  const TurnTable& turns;
  const PathCatalog& cat;
  const Solution& sol;
  ValidationReport rep;
  std::set<std::pair<NodeId, NodeId>> tree;

  void add(const char* family, const std::string& detail) {
    rep.violations.push_back({family, detail});
  }

  static std::string edge_str(NodeId from, NodeId to) {
    return std::to_string(from) + "->" + std::to_string(to);
  }

  void check_tree() {
    for (const Edge& e : sol.tree) {
      if (!g.has_edge(e.from, e.to)) {
        add("tree-degree", "edge " + edge_str(e.from, e.to) + " does not exist in the grid");
        continue;
      }
      if (!tree.insert({e.from, e.to}).second)
        add("tree-degree", "edge " + edge_str(e.from, e.to) + " listed twice");
    }
    std::unordered_map<NodeId, int> indeg, outdeg;
    for (const auto& [from, to] : tree) {
      ++outdeg[from];
      ++indeg[to];
    }
    for (int v = 0; v < g.node_count(); ++v) {
      const int in = indeg.count(v) ? indeg.at(v) : 0;
      const int out = outdeg.count(v) ? outdeg.at(v) : 0;
      if (g.is_runway(v)) {
        if (in != 1)
          add("tree-degree",
              "runway in-degree is " + std::to_string(in) + ", exactly one approach is allowed");
      } else if (!g.is_entry(v)) {
        if (in > 2) add("tree-degree", "node " + std::to_string(v) + " has in-degree " + std::to_string(in));
        if (out > 1)
          add("tree-degree", "node " + std::to_string(v) + " has out-degree " + std::to_string(out));
      }
    }
  }

  void check_turns() {
    for (const auto& [from, mid] : tree) {
      const EdgeId e = g.eid(from, mid);
      if (e < 0) continue;
      const auto& banned = turns.banned_next[e];
      for (const auto& [from2, to2] : tree) {
        if (from2 != mid) continue;
        if (std::binary_search(banned.begin(), banned.end(), to2))
          add("turn-rule", "edges " + edge_str(from, mid) + " and " + edge_str(mid, to2) +
                               " turn sharper than " + std::to_string(turns.gamma_deg) +
                               " degrees");
      }
    }
  }

  void check_crossings() {
    for (const CrossQuad& quad : crossing_quads(g)) {
      for (const auto& row : quad.rows) {
        int used = 0;
        for (EdgeId e : row.edges) {
          const Edge& edge = g.edges[e];
          used += tree.count({edge.from, edge.to}) ? 1 : 0;
        }
        if (used > 1)
          add("crossing", "square at node " + std::to_string(quad.anchor) + " has " +
                              std::to_string(used) + " crossing diagonals in use");
      }
    }
  }

  // Returns the route path id per entry, or -1 where the routes vector is
  // unusable.
  std::vector<PathId> check_routes() {
    std::vector<PathId> routes(sc.grid.entries.size(), -1);
    if (sol.routes.size() != sc.grid.entries.size()) {
      add("path-membership", "expected " + std::to_string(sc.grid.entries.size()) +
                                 " entry routes, got " + std::to_string(sol.routes.size()));
      return routes;
    }
    for (std::size_t b = 0; b < sol.routes.size(); ++b) {
      const PathId pid = sol.routes[b];
      if (pid < 0 || pid >= static_cast<PathId>(cat.paths.size())) {
        add("path-membership", "entry " + std::to_string(b) + " has no valid route");
        continue;
      }
      if (cat.paths[pid].entry_idx != static_cast<int>(b)) {
        add("path-membership", "route of entry " + std::to_string(b) +
                                   " starts at a different entry point");
        continue;
      }
      routes[b] = pid;
      const Path& p = cat.paths[pid];
      for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) {
        if (!tree.count({p.nodes[k], p.nodes[k + 1]}))
          add("path-membership", "route edge " + edge_str(p.nodes[k], p.nodes[k + 1]) +
                                     " of entry " + std::to_string(b) + " is not in the tree");
      }
    }
    return routes;
  }

  void check_schedule(const std::vector<PathId>& routes) {
    std::unordered_map<std::string, const Aircraft*> fleet;
    for (const Aircraft& a : sc.aircraft) fleet[a.id] = &a;
    std::set<std::string> seen;
    for (const ScheduleEntry& se : sol.schedule) {
      auto it = fleet.find(se.aircraft);
      if (it == fleet.end()) {
        add("path-membership", "schedule names unknown aircraft " + se.aircraft);
        continue;
      }
      if (!seen.insert(se.aircraft).second) {
        add("path-membership", "aircraft " + se.aircraft + " scheduled twice");
        continue;
      }
      check_one(*it->second, se, routes);
    }
    for (const Aircraft& a : sc.aircraft)
      if (!seen.count(a.id)) add("path-membership", "aircraft " + a.id + " missing from schedule");
  }

  void check_one(const Aircraft& ac, const ScheduleEntry& se, const std::vector<PathId>& routes) {
    if (se.entry_idx != ac.entry_idx) {
      add("path-membership", "aircraft " + ac.id + " scheduled from the wrong entry");
      return;
    }
    if (se.path < 0 || se.path >= static_cast<PathId>(cat.paths.size()) ||
        cat.paths[se.path].entry_idx != ac.entry_idx) {
      add("path-membership", "aircraft " + ac.id + " rides an invalid path");
      return;
    }
    if (routes[ac.entry_idx] >= 0 && se.path != routes[ac.entry_idx])
      add("path-membership",
          "aircraft " + ac.id + " does not ride the route chosen for its entry");

    if (sc.options.fixed_entry) {
      if (se.shift != 0)
        add("entry-window", "aircraft " + ac.id + " shifted with entry times fixed");
    } else if (std::abs(se.shift) > sc.options.mu) {
      add("entry-window", "aircraft " + ac.id + " shifted " + std::to_string(se.shift) +
                              " minutes, window is " + std::to_string(sc.options.mu));
    }
    const Minute entry_time = ac.planned + se.shift;
    if (entry_time < 0)
      add("entry-window", "aircraft " + ac.id + " scheduled before the period origin");

    const Path& path = cat.paths[se.path];
    const std::vector<int>* u =
        sc.profiles.find(ac.id, sc.separation.categories[ac.category], path.hops());
    if (!u) {
      add("profile", "no speed profile of length " + std::to_string(path.hops()) +
                         " for aircraft " + ac.id);
      return;
    }
    const std::vector<Minute> expected = node_times(path, *u, entry_time);
    if (se.times != expected) {
      add("profile", "times for aircraft " + ac.id + " do not match its speed profile");
      return;
    }
    if (se.times.back() > sc.horizon)
      add("horizon", "aircraft " + ac.id + " lands at " + std::to_string(se.times.back()) +
                         ", after the horizon " + std::to_string(sc.horizon));
  }

  void check_separation() {
    std::vector<Visit> visits;
    std::vector<const ScheduleEntry*> owner;
    for (const ScheduleEntry& se : sol.schedule) {
      if (se.path < 0 || se.path >= static_cast<PathId>(cat.paths.size())) continue;
      const Path& p = cat.paths[se.path];
      if (se.times.size() != p.nodes.size()) continue;
      const Aircraft* ac = nullptr;
      for (const Aircraft& a : sc.aircraft)
        if (a.id == se.aircraft) ac = &a;
      if (!ac) continue;
      for (std::size_t k = 0; k < p.nodes.size(); ++k) {
        visits.push_back({static_cast<int>(owner.size()), ac->category, p.nodes[k], se.times[k]});
      }
      owner.push_back(&se);
    }
    // Re-key the aircraft field: it was set to the owner slot above.
    for (const SeparationConflict& c : find_separation_conflicts(visits, sc.separation)) {
      const ScheduleEntry* lead = owner[visits[c.leader].aircraft];
      const ScheduleEntry* trail = owner[visits[c.trailer].aircraft];
      add("separation", "node " + std::to_string(visits[c.leader].key) + ": " + lead->aircraft +
                            " (t=" + std::to_string(visits[c.leader].t) + ") and " +
                            trail->aircraft + " (t=" + std::to_string(visits[c.trailer].t) +
                            ") separated by " + std::to_string(c.actual) + " < " +
                            std::to_string(c.required));
    }
  }

  void check_consistency(const std::vector<PathId>& routes) {
    if (!sc.options.consistency_u) return;
    std::set<std::pair<NodeId, NodeId>> prev;
    for (const Edge& e : sc.options.previous_tree) prev.insert({e.from, e.to});
    int changes = 0;
    for (const auto& e : tree)
      if (!prev.count(e)) ++changes;
    for (const auto& e : prev)
      if (!tree.count(e)) ++changes;
    if (changes > *sc.options.consistency_u)
      add("consistency", std::to_string(changes) + " edge changes against the previous tree, " +
                             std::to_string(*sc.options.consistency_u) + " allowed");

    std::set<std::pair<NodeId, NodeId>> used;
    for (PathId pid : routes) {
      if (pid < 0) continue;
      const Path& p = cat.paths[pid];
      for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k)
        used.insert({p.nodes[k], p.nodes[k + 1]});
    }
    for (const auto& e : tree)
      if (prev.count(e) && !used.count(e))
        add("consistency", "kept edge " + edge_str(e.first, e.second) +
                               " from the previous tree carries no route");
  }

  // Blocked directions induced by a carried-over edge traversal: the reverse
  // edge always, plus both crossing diagonals when the edge is skewed.
  std::vector<std::pair<NodeId, NodeId>> blocked_dirs(const CarryoverEdge& ce) const {
    std::vector<std::pair<NodeId, NodeId>> out = {{ce.to, ce.from}};
    const int r1 = g.row_of(ce.from), c1 = g.col_of(ce.from);
    const int r2 = g.row_of(ce.to), c2 = g.col_of(ce.to);
    if (r1 != r2 && c1 != c2) {
      const NodeId a = g.at(r1, c2);
      const NodeId b = g.at(r2, c1);
      out.push_back({a, b});
      out.push_back({b, a});
    }
    return out;
  }

  void check_carryover() {
    if (!sc.options.carryover || sc.options.carryover->empty()) return;
    const CarryoverState& carry = *sc.options.carryover;
    for (const ScheduleEntry& se : sol.schedule) {
      if (se.path < 0 || se.path >= static_cast<PathId>(cat.paths.size())) continue;
      const Path& p = cat.paths[se.path];
      if (se.times.size() != p.nodes.size()) continue;
      const Aircraft* ac = nullptr;
      for (const Aircraft& a : sc.aircraft)
        if (a.id == se.aircraft) ac = &a;
      if (!ac) continue;

      for (const CarryoverNode& cn : carry.nodes) {
        const int fwd = sc.separation.sigma[cn.category][ac->category];
        const int bwd = sc.separation.sigma[ac->category][cn.category];
        for (std::size_t k = 0; k < p.nodes.size(); ++k) {
          if (p.nodes[k] != cn.node) continue;
          const Minute w = se.times[k];
          if (w >= cn.t - bwd + 1 && w <= cn.t + fwd - 1)
            add("carryover", "aircraft " + se.aircraft + " at node " + std::to_string(cn.node) +
                                 " at t=" + std::to_string(w) +
                                 " conflicts with a carried-over aircraft there at t=" +
                                 std::to_string(cn.t));
        }
      }
      for (const CarryoverEdge& ce : carry.edges) {
        for (const auto& [bf, bt] : blocked_dirs(ce)) {
          for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) {
            if (p.nodes[k] != bf || p.nodes[k + 1] != bt) continue;
            const Minute w = se.times[k];
            if (w >= ce.t_from && w <= ce.t_to)
              add("carryover", "aircraft " + se.aircraft + " crosses edge " +
                                   edge_str(ce.from, ce.to) + " occupied until t=" +
                                   std::to_string(ce.t_to) + " (departs " + edge_str(bf, bt) +
                                   " at t=" + std::to_string(w) + ")");
          }
        }
      }
    }
  }

  void compute_deviation() {
    if (sol.schedule.empty()) return;
    long sum = 0;
    for (const ScheduleEntry& se : sol.schedule) sum += std::abs(se.shift);
    rep.avg_deviation = static_cast<double>(sum) / static_cast<double>(sol.schedule.size());
  }

  ValidationReport run() {
    check_tree();
    check_turns();
    check_crossings();
    const std::vector<PathId> routes = check_routes();
    check_schedule(routes);
    check_separation();
    check_consistency(routes);
    check_carryover();
    compute_deviation();
    return std::move(rep);
  }
};

}  // namespace

ValidationReport validate_solution(const Scenario& sc, const GridGraph& g, const TurnTable& turns,
                                   const PathCatalog& cat, const Solution& sol) {
  Checker checker{sc, g, turns, cat, sol, {}, {}};
  return checker.run();
}

}  // namespace atp

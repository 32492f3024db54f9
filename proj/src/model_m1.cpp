#include "atp/model_m1.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "atp/errors.hpp"
#include "atp/model_m2.hpp"

namespace atp {
namespace {

using Terms = std::vector<std::pair<int, double>>;

const char* cross_tag(CrossQuad::Variant v) {
  switch (v) {
    case CrossQuad::Variant::interior:
      return "m1.cross.int";
    case CrossQuad::Variant::entry_at_a:
      return "m1.cross.a";
    case CrossQuad::Variant::entry_at_b:
      return "m1.cross.b";
    case CrossQuad::Variant::entry_at_c:
      return "m1.cross.c";
    case CrossQuad::Variant::entry_at_d:
      return "m1.cross.d";
  }
  return "m1.cross";
}

// One usable speed profile of an aircraft: cum[k] holds the minutes from the
// entry to the (k+1)-st node, and [s_lo, s_hi] the entry minutes that both
// respect the entry window and land inside the horizon.  An empty window
// keeps the profile listed so its selector rows still pin psi to 1.
struct Prof {
  int hops = 0;
  std::vector<int> cum;
  int s_lo = 0;
  int s_hi = -1;
  bool usable() const { return s_lo <= s_hi; }
};

// Occupancy variable y: aircraft a rides profile profs[a][pi] and sits on
// node j at minute t as the k-th node of its route.
struct YRec {
  int a = 0, pi = 0, k = 0;
  NodeId j = -1;
  Minute t = 0;
  int var = -1;
};

// Movement variable z: as above, plus the departure edge towards node k+1.
struct ZRec {
  int a = 0, pi = 0, k = 0;
  EdgeId e = -1;
  Minute t = 0;
  int var = -1;
};

struct Builder {
  const GridGraph& g;
  const TurnTable& turns;
  const Scenario& sc;
  const M1Limits& lim;
  M1Model m;
  int mu = 0;
  int q = 0;      // flow big-M
  int omega = 0;  // separation big-M
  std::vector<int> fleet;                // aircraft count per entry
  std::vector<std::vector<Prof>> profs;  // per aircraft, hops ascending
  std::vector<std::vector<int>> psi_var, phi_var;
  std::vector<YRec> ys;
  std::vector<ZRec> zs;
  std::map<std::tuple<int, int, int, NodeId, Minute>, int> y_of;
  std::map<std::tuple<int, int, int, EdgeId, Minute>, int> z_of;
  std::map<std::pair<NodeId, Minute>, std::vector<int>> occ;  // -> indices into ys

  Builder(const GridGraph& g_, const TurnTable& turns_, const Scenario& sc_,
          const M1Limits& lim_)
      : g(g_), turns(turns_), sc(sc_), lim(lim_) {}

  NodeId entry_node(int a) const { return g.entries[sc.aircraft[a].entry_idx]; }

  void check_inputs() {
    int present = 0;
    for (bool p : g.present) present += p;
    if (present > lim.max_nodes)
      throw M1ScaleError("grid has " + std::to_string(present) + " nodes, gate is " +
                         std::to_string(lim.max_nodes));
    if (static_cast<int>(sc.aircraft.size()) > lim.max_aircraft)
      throw M1ScaleError("scenario has " + std::to_string(sc.aircraft.size()) +
                         " aircraft, gate is " + std::to_string(lim.max_aircraft));
    if (sc.horizon > lim.max_horizon)
      throw M1ScaleError("horizon " + std::to_string(sc.horizon) + " exceeds gate " +
                         std::to_string(lim.max_horizon));
    if (sc.options.consistency_u || !sc.options.previous_tree.empty() ||
        (sc.options.carryover && !sc.options.carryover->empty()))
      throw InvalidScenarioError("the compact model covers the base problem only");
    if (sc.options.single_category && !sc.separation.uniform())
      throw InvalidScenarioError(
          "the shared-sigma formulation needs a uniform separation matrix");
  }

  void collect_profiles() {
    profs.resize(sc.aircraft.size());
    for (int a = 0; a < static_cast<int>(sc.aircraft.size()); ++a) {
      const Aircraft& ac = sc.aircraft[a];
      const std::string& cname = sc.separation.categories[ac.category];
      for (int h = 1; h <= sc.lambda - 1; ++h) {
        const std::vector<int>* segs = sc.profiles.find(ac.id, cname, h);
        if (!segs) continue;
        Prof p;
        p.hops = h;
        p.cum.assign(h + 1, 0);
        for (int i = 0; i < h; ++i) p.cum[i + 1] = p.cum[i] + (*segs)[i];
        p.s_lo = std::max(0, ac.planned - mu);
        p.s_hi = std::min(ac.planned + mu, sc.horizon - p.cum[h]);
        profs[a].push_back(std::move(p));
      }
      if (profs[a].empty())
        throw MissingProfileError("aircraft " + ac.id +
                                  " has no speed profile within the node budget");
    }
  }

  void add_vars() {
    const double beta = sc.options.beta;
    m.edges = g.edges;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      m.x_var.push_back(m.mip.add_binary(
          "x_" + std::to_string(g.edges[e].from) + "_" + std::to_string(g.edges[e].to),
          beta * g.edge_len[e]));
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      m.f_var.push_back(m.mip.add_var(
          "f_" + std::to_string(g.edges[e].from) + "_" + std::to_string(g.edges[e].to), 0.0,
          kInf, false, (1.0 - beta) * g.edge_len[e]));
    m.xep_var.resize(g.entries.size());
    for (std::size_t b = 0; b < g.entries.size(); ++b)
      for (const Edge& ed : g.edges)
        m.xep_var[b].push_back(m.mip.add_binary("xe_" + std::to_string(b) + "_" +
                                                std::to_string(ed.from) + "_" +
                                                std::to_string(ed.to)));
    for (std::size_t b = 0; b < g.entries.size(); ++b)
      m.ell_var.push_back(m.mip.add_var("l_" + std::to_string(b), 0.0, kInf, false, 0.0));

    const int A = static_cast<int>(sc.aircraft.size());
    psi_var.resize(A);
    phi_var.resize(A);
    for (int a = 0; a < A; ++a) {
      for (const Prof& p : profs[a]) {
        const std::string suf = "_" + std::to_string(a) + "_" + std::to_string(p.hops);
        psi_var[a].push_back(m.mip.add_binary("psi" + suf));
        phi_var[a].push_back(m.mip.add_binary("phi" + suf));
      }
    }

    m.start_var.resize(A);
    for (int a = 0; a < A; ++a) {
      for (int pi = 0; pi < static_cast<int>(profs[a].size()); ++pi) {
        const Prof& p = profs[a][pi];
        if (!p.usable()) continue;
        for (int k = 1; k <= p.hops + 1; ++k) {
          for (int s = p.s_lo; s <= p.s_hi; ++s) {
            const Minute t = s + p.cum[k - 1];
            for (NodeId j = 0; j < g.node_count(); ++j) {
              if (k == 1 ? j != entry_node(a) : (!g.present[j] || g.is_entry(j))) continue;
              const int var = m.mip.add_binary(
                  "y_" + std::to_string(a) + "_" + std::to_string(p.hops) + "_" +
                  std::to_string(k) + "_" + std::to_string(j) + "_" + std::to_string(t));
              y_of[{a, pi, k, j, t}] = var;
              occ[{j, t}].push_back(static_cast<int>(ys.size()));
              ys.push_back({a, pi, k, j, t, var});
              if (k == 1) m.start_var[a][{p.hops, s}] = var;
            }
          }
        }
      }
    }

    for (int a = 0; a < A; ++a) {
      for (int pi = 0; pi < static_cast<int>(profs[a].size()); ++pi) {
        const Prof& p = profs[a][pi];
        if (!p.usable()) continue;
        for (int k = 1; k <= p.hops; ++k) {
          for (NodeId j = 0; j < g.node_count(); ++j) {
            if (k == 1 ? j != entry_node(a) : (!g.present[j] || g.is_entry(j))) continue;
            for (NodeId succ : g.out[j]) {
              const EdgeId e = g.eid(j, succ);
              for (int s = p.s_lo; s <= p.s_hi; ++s) {
                const Minute t = s + p.cum[k - 1];
                const int var = m.mip.add_binary(
                    "z_" + std::to_string(a) + "_" + std::to_string(p.hops) + "_" +
                    std::to_string(k) + "_" + std::to_string(j) + "_" + std::to_string(succ) +
                    "_" + std::to_string(t));
                z_of[{a, pi, k, e, t}] = var;
                zs.push_back({a, pi, k, e, t, var});
              }
            }
          }
        }
      }
    }
  }

  void add_flow_rows() {
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (!g.present[i]) continue;
      Terms t;
      for (NodeId u : g.in[i]) t.emplace_back(m.f_var[g.eid(u, i)], 1.0);
      for (NodeId v : g.out[i]) t.emplace_back(m.f_var[g.eid(i, v)], -1.0);
      double rhs = 0.0;
      if (g.is_runway(i)) {
        rhs = static_cast<double>(sc.aircraft.size());
      } else if (g.is_entry(i)) {
        for (std::size_t b = 0; b < g.entries.size(); ++b)
          if (g.entries[b] == i) rhs = -fleet[b];
      }
      if (t.empty() && rhs == 0.0) continue;
      m.mip.add_eq("m1.flow", std::move(t), rhs);
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      m.mip.add_ge("m1.flow.link",
                   {{m.x_var[e], static_cast<double>(q)}, {m.f_var[e], -1.0}}, 0.0);
  }

  void add_degree_rows() {
    for (NodeId i = 0; i < g.node_count(); ++i) {
      if (!g.present[i] || g.is_entry(i) || g.is_runway(i)) continue;
      if (!g.in[i].empty()) {
        Terms t;
        for (NodeId u : g.in[i]) t.emplace_back(m.x_var[g.eid(u, i)], 1.0);
        m.mip.add_le("m1.indeg", std::move(t), 2.0);
      }
      if (!g.out[i].empty()) {
        Terms t;
        for (NodeId v : g.out[i]) t.emplace_back(m.x_var[g.eid(i, v)], 1.0);
        m.mip.add_le("m1.outdeg", std::move(t), 1.0);
      }
    }
    Terms rw;
    for (NodeId u : g.in[g.runway]) rw.emplace_back(m.x_var[g.eid(u, g.runway)], 1.0);
    m.mip.add_eq("m1.runway", std::move(rw), 1.0);
    for (NodeId b : g.entries) {
      Terms t;
      for (NodeId v : g.out[b]) t.emplace_back(m.x_var[g.eid(b, v)], 1.0);
      m.mip.add_eq("m1.entry.out", std::move(t), 1.0);
    }
  }

  void add_turn_rows() {
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto& banned = turns.banned_edges[e];
      if (banned.empty()) continue;
      Terms t{{m.x_var[e], static_cast<double>(banned.size())}};
      for (EdgeId b : banned) t.emplace_back(m.x_var[b], 1.0);
      m.mip.add_le("m1.turn", std::move(t), static_cast<double>(banned.size()));
    }
  }

  void add_crossing_rows() {
    for (const CrossQuad& qd : crossing_quads(g)) {
      for (const CrossQuad::Row& row : qd.rows) {
        Terms t;
        for (EdgeId e : row.edges) t.emplace_back(m.x_var[e], 1.0);
        m.mip.add_le(cross_tag(row.variant), std::move(t), 1.0);
      }
    }
  }

  void add_route_rows() {
    for (std::size_t b = 0; b < g.entries.size(); ++b) {
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        m.mip.add_le("m1.route.link", {{m.xep_var[b][e], 1.0}, {m.x_var[e], -1.0}}, 0.0);
      Terms start;
      for (NodeId v : g.out[g.entries[b]])
        start.emplace_back(m.xep_var[b][g.eid(g.entries[b], v)], 1.0);
      m.mip.add_eq("m1.route.start", std::move(start), 1.0);
      Terms end;
      for (NodeId u : g.in[g.runway]) end.emplace_back(m.xep_var[b][g.eid(u, g.runway)], 1.0);
      m.mip.add_eq("m1.route.end", std::move(end), 1.0);
      for (NodeId j = 0; j < g.node_count(); ++j) {
        if (!g.present[j] || g.is_entry(j) || g.is_runway(j)) continue;
        if (g.in[j].empty() && g.out[j].empty()) continue;
        Terms t;
        for (NodeId u : g.in[j]) t.emplace_back(m.xep_var[b][g.eid(u, j)], 1.0);
        for (NodeId v : g.out[j]) t.emplace_back(m.xep_var[b][g.eid(j, v)], -1.0);
        m.mip.add_eq("m1.route.flow", std::move(t), 0.0);
      }
    }
  }

  void add_entry_choice_rows() {
    for (int a = 0; a < static_cast<int>(sc.aircraft.size()); ++a) {
      Terms t;
      for (const auto& [key, var] : m.start_var[a]) t.emplace_back(var, 1.0);
      m.mip.add_eq("m1.entry.choice", std::move(t), 1.0);
    }
  }

  void add_occupancy_rows() {
    // A non-entry node can host an aircraft only once the tree feeds it.
    for (const YRec& y : ys) {
      if (y.k == 1) continue;
      Terms t{{y.var, 1.0}};
      for (NodeId u : g.in[y.j]) t.emplace_back(m.x_var[g.eid(u, y.j)], -1.0);
      m.mip.add_le("m1.occ.tree", std::move(t), 0.0);
    }
    // At most one profile per aircraft, node, position and minute.
    std::map<std::tuple<int, NodeId, int, Minute>, Terms> groups;
    for (const YRec& y : ys) groups[{y.a, y.j, y.k, y.t}].emplace_back(y.var, 1.0);
    for (auto& [key, t] : groups)
      if (t.size() >= 2) m.mip.add_le("m1.occ.one", std::move(t), 1.0);
  }

  void add_profile_rows() {
    const int A = static_cast<int>(sc.aircraft.size());
    for (int a = 0; a < A; ++a) {
      for (int pi = 0; pi < static_cast<int>(profs[a].size()); ++pi) {
        const Prof& p = profs[a][pi];
        Terms t{{psi_var[a][pi], 1.0}};
        for (int s = p.s_lo; s <= p.s_hi; ++s) t.emplace_back(y_of.at({a, pi, 1, entry_node(a), s}), 1.0);
        m.mip.add_eq("m1.profile.match", std::move(t), 1.0);
      }
    }
    for (std::size_t b = 0; b < g.entries.size(); ++b) {
      Terms t{{m.ell_var[b], 1.0}};
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        t.emplace_back(m.xep_var[b][e], -1.0);
      m.mip.add_eq("m1.length", std::move(t), 0.0);
    }
    // Selector algebra, cleared of fractions: a profile may be deselected
    // (psi = 1) only when its hop count differs from the route length, with
    // phi picking the side of the gap; psi = 0 forces an exact match.
    const double lam = sc.lambda;
    for (int a = 0; a < A; ++a) {
      const int ell = m.ell_var[sc.aircraft[a].entry_idx];
      for (int pi = 0; pi < static_cast<int>(profs[a].size()); ++pi) {
        const double p = profs[a][pi].hops;
        const int psi = psi_var[a][pi], phi = phi_var[a][pi];
        m.mip.add_ge("m1.psi.a", {{ell, 2.0}, {phi, 2.0 * lam * lam}, {psi, 2.0 * lam}},
                     2.0 * p - 1.0);
        m.mip.add_le("m1.psi.b", {{ell, 2.0}, {psi, 2.0}, {phi, -2.0 * lam}}, 2.0 * p + 1.0);
        m.mip.add_le("m1.psi.c", {{psi, 2.0}, {ell, -2.0}, {phi, 2.0 * lam}},
                     2.0 * lam - 2.0 * p + 1.0);
        m.mip.add_le("m1.psi.d", {{ell, 2.0}, {phi, 2.0 * lam * lam}, {psi, -2.0 * lam}},
                     2.0 * lam * lam + 2.0 * p + 1.0);
      }
    }
  }

  // Leader occupancy at (j, t) shuts the node to followers for the next
  // sigma minutes; windows that poke past the horizon are clipped and keep
  // their own tag.
  void add_separation_rows() {
    const int cats = sc.separation.count();
    auto trailer_terms = [&](NodeId j, Minute t, int sig, int cat, int skip_a, Terms& out) {
      bool any = false;
      const Minute cap = std::min<Minute>(t + sig - 1, sc.horizon);
      for (Minute tau = t; tau <= cap; ++tau) {
        auto it = occ.find({j, tau});
        if (it == occ.end()) continue;
        for (int yi : it->second) {
          if (ys[yi].a == skip_a || sc.aircraft[ys[yi].a].category != cat) continue;
          out.emplace_back(ys[yi].var, 1.0);
          any = true;
        }
      }
      return any;
    };

    for (int lead = 0; lead < cats; ++lead) {
      for (int trail = 0; trail < cats; ++trail) {
        if (lead == trail) continue;
        const int sig = sc.separation.sigma[lead][trail];
        for (const auto& [key, bucket] : occ) {
          const auto [j, t] = key;
          Terms terms;
          bool leader = false;
          for (int yi : bucket) {
            if (sc.aircraft[ys[yi].a].category != lead) continue;
            terms.emplace_back(ys[yi].var, static_cast<double>(omega));
            leader = true;
          }
          if (!leader) continue;
          if (!trailer_terms(j, t, sig, trail, -1, terms)) continue;
          m.mip.add_le(t + sig - 1 <= sc.horizon ? "m1.sep.diff" : "m1.sep.diff.tail",
                       std::move(terms), static_cast<double>(omega));
        }
      }
    }
    for (int cat = 0; cat < cats; ++cat) {
      const int sig = sc.separation.sigma[cat][cat];
      for (const auto& [key, bucket] : occ) {
        const auto [j, t] = key;
        for (int yi : bucket) {
          if (sc.aircraft[ys[yi].a].category != cat) continue;
          Terms terms{{ys[yi].var, static_cast<double>(omega)}};
          if (!trailer_terms(j, t, sig, cat, ys[yi].a, terms)) continue;
          m.mip.add_le(t + sig - 1 <= sc.horizon ? "m1.sep.same" : "m1.sep.same.tail",
                       std::move(terms), static_cast<double>(omega));
        }
      }
    }
  }

  void add_movement_rows() {
    for (const ZRec& z : zs) {
      const int b = sc.aircraft[z.a].entry_idx;
      const int y = y_of.at({z.a, z.pi, z.k, m.edges[z.e].from, z.t});
      m.mip.add_le("m1.z.route", {{z.var, 1.0}, {m.xep_var[b][z.e], -1.0}}, 0.0);
      m.mip.add_le("m1.z.occ", {{z.var, 1.0}, {y, -1.0}}, 0.0);
      m.mip.add_ge("m1.z.and", {{z.var, 1.0}, {m.xep_var[b][z.e], -1.0}, {y, -1.0}}, -1.0);
    }
    // Arriving on node j as the k-th stop means having left some predecessor
    // one segment earlier; with no candidate movement the stop is impossible.
    for (const YRec& y : ys) {
      if (y.k == 1) continue;
      const Prof& p = profs[y.a][y.pi];
      const Minute from_t = y.t - (p.cum[y.k - 1] - p.cum[y.k - 2]);
      Terms t;
      for (NodeId u : g.in[y.j]) {
        auto it = z_of.find({y.a, y.pi, y.k - 1, g.eid(u, y.j), from_t});
        if (it != z_of.end()) t.emplace_back(it->second, 1.0);
      }
      t.emplace_back(y.var, -1.0);
      m.mip.add_eq("m1.step", std::move(t), 0.0);
    }
  }

  M1Model build() {
    mu = effective_mu(sc);
    q = static_cast<int>(sc.aircraft.size());
    omega = sc.separation.max_sigma();
    check_inputs();
    collect_profiles();
    fleet.assign(g.entries.size(), 0);
    for (const Aircraft& ac : sc.aircraft) ++fleet[ac.entry_idx];
    m.mip.name = sc.name.empty() ? "m1" : sc.name + ".m1";
    add_vars();
    add_flow_rows();
    add_degree_rows();
    add_turn_rows();
    add_crossing_rows();
    add_route_rows();
    add_entry_choice_rows();
    add_occupancy_rows();
    add_profile_rows();
    add_separation_rows();
    add_movement_rows();
    return std::move(m);
  }
};

}  // namespace

M1Model build_m1(const GridGraph& g, const TurnTable& turns, const Scenario& sc,
                 const M1Limits& limits) {
  return Builder(g, turns, sc, limits).build();
}

Solution extract_m1_solution(const M1Model& m, const SolveResult& res, const Scenario& sc,
                             const PathCatalog& cat) {
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

  std::map<NodeId, std::vector<std::pair<NodeId, EdgeId>>> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(m.edges.size()); ++e) {
    if (v[m.x_var[e]] > 0.5) sol.tree.push_back(m.edges[e]);
    out[m.edges[e].from].emplace_back(m.edges[e].to, e);
  }

  const NodeId runway = sc.grid.runway;
  std::vector<int> route_hops(sc.grid.entries.size(), 0);
  sol.routes.assign(sc.grid.entries.size(), PathId{-1});
  for (std::size_t b = 0; b < sc.grid.entries.size(); ++b) {
    std::vector<NodeId> nodes{sc.grid.entries[b]};
    std::set<NodeId> seen{nodes.front()};
    while (nodes.back() != runway) {
      NodeId next = -1;
      int hits = 0;
      for (const auto& [to, e] : out[nodes.back()]) {
        if (v[m.xep_var[b][e]] <= 0.5) continue;
        ++hits;
        next = to;
      }
      if (hits != 1)
        throw DecodeError("entry " + std::to_string(b) + " path flow leaves node " +
                          std::to_string(nodes.back()) + " " + std::to_string(hits) +
                          " times");
      if (!seen.insert(next).second)
        throw DecodeError("entry " + std::to_string(b) + " path flow revisits node " +
                          std::to_string(next));
      nodes.push_back(next);
    }
    route_hops[b] = static_cast<int>(nodes.size()) - 1;
    if (std::fabs(v[m.ell_var[b]] - route_hops[b]) > 1e-6)
      throw DecodeError("entry " + std::to_string(b) + " hop count " +
                        std::to_string(v[m.ell_var[b]]) + " disagrees with its path flow");
    for (PathId pid : cat.by_entry[b])
      if (cat.paths[pid].nodes == nodes) sol.routes[b] = pid;
    if (sol.routes[b] < 0)
      throw DecodeError("entry " + std::to_string(b) + " route is missing from the catalog");
  }

  double deviation = 0.0;
  for (int a = 0; a < static_cast<int>(sc.aircraft.size()); ++a) {
    const Aircraft& ac = sc.aircraft[a];
    int hops = -1;
    Minute s = 0;
    int picked = 0;
    for (const auto& [key, var] : m.start_var[a]) {
      if (v[var] <= 0.5) continue;
      ++picked;
      hops = key.first;
      s = key.second;
    }
    if (picked != 1)
      throw DecodeError("aircraft " + std::to_string(a) + " selected " +
                        std::to_string(picked) + " entry minutes");
    if (hops != route_hops[ac.entry_idx])
      throw DecodeError("aircraft " + std::to_string(a) + " profile length " +
                        std::to_string(hops) + " differs from its " +
                        std::to_string(route_hops[ac.entry_idx]) + "-hop route");
    const std::vector<int>* segs =
        sc.profiles.find(ac.id, sc.separation.categories[ac.category], hops);
    if (!segs)
      throw DecodeError("aircraft " + std::to_string(a) + " lost its " +
                        std::to_string(hops) + "-hop profile");
    ScheduleEntry entry;
    entry.aircraft = ac.id;
    entry.entry_idx = ac.entry_idx;
    entry.path = sol.routes[ac.entry_idx];
    entry.shift = s - ac.planned;
    entry.times.push_back(s);
    for (int seg : *segs) entry.times.push_back(entry.times.back() + seg);
    deviation += std::abs(entry.shift);
    sol.schedule.push_back(std::move(entry));
  }
  if (!sc.aircraft.empty()) sol.avg_deviation = deviation / sc.aircraft.size();
  return sol;
}

Solution solve_m1(const GridGraph& g, const TurnTable& turns, const Scenario& sc,
                  const PathCatalog& cat, MipBackend& backend, const SolveParams& params,
                  const M1Limits& limits) {
  const M1Model m = build_m1(g, turns, sc, limits);
  const SolveResult res = backend.solve(m.mip, params);
  return extract_m1_solution(m, res, sc, cat);
}

}  // namespace atp

#include "atp/enumerate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "atp/errors.hpp"
#include "atp/model_m2.hpp"
#include "atp/validator.hpp"

namespace atp {

namespace {

// Families that depend on the chosen paths only; one failed probe rules out
// every entry-time tuple of the current path tuple.
bool structurally_broken(const ValidationReport& rep) {
  return rep.has("tree-degree") || rep.has("turn-rule") || rep.has("crossing") ||
         rep.has("consistency");
}

bool advance(std::vector<std::size_t>& pos, const std::vector<std::size_t>& radix) {
  for (std::size_t i = pos.size(); i-- > 0;) {
    if (++pos[i] < radix[i]) return true;
    pos[i] = 0;
  }
  return false;
}

}  // namespace

Solution enumerate_m2(const PathCatalog& cat, const OccupancyIndex& idx, const Scenario& sc,
                      const EnumerateLimits& lim) {
  const auto t0 = std::chrono::steady_clock::now();

  if (static_cast<int>(sc.aircraft.size()) > lim.max_aircraft)
    throw EnumerationGuardError("exhaustive search stops at " + std::to_string(lim.max_aircraft) +
                                " aircraft, the scenario has " +
                                std::to_string(sc.aircraft.size()));
  if (effective_mu(sc) > lim.max_mu)
    throw EnumerationGuardError("exhaustive search stops at an entry window of " +
                                std::to_string(lim.max_mu) + " minutes, the scenario allows " +
                                std::to_string(effective_mu(sc)));
  for (std::size_t b = 0; b < cat.by_entry.size(); ++b) {
    if (cat.by_entry[b].empty())
      throw EmptyCatalogError("entry " + std::to_string(b) + " has no admissible path");
    if (static_cast<int>(cat.by_entry[b].size()) > lim.max_paths_per_entry)
      throw EnumerationGuardError("exhaustive search stops at " +
                                  std::to_string(lim.max_paths_per_entry) +
                                  " paths per entry, entry " + std::to_string(b) + " has " +
                                  std::to_string(cat.by_entry[b].size()));
  }
  if (idx.xi.size() != sc.aircraft.size())
    throw IndexMismatchError("occupancy index covers " + std::to_string(idx.xi.size()) +
                             " aircraft, the scenario has " + std::to_string(sc.aircraft.size()));

  const GridGraph g = build_grid(sc.grid);
  const TurnTable turns = build_turn_table(g, sc.gamma_deg);
  const std::size_t entries = cat.by_entry.size();
  const std::size_t fleet_size = sc.aircraft.size();
  const double beta = sc.options.beta;

  std::vector<int> fleet(entries, 0);
  for (const Aircraft& a : sc.aircraft) ++fleet[a.entry_idx];

  Solution best;
  best.status = SolveStatus::Infeasible;
  bool have_best = false;

  std::vector<std::size_t> pick(entries, 0);
  std::vector<std::size_t> pick_radix(entries);
  for (std::size_t b = 0; b < entries; ++b) pick_radix[b] = cat.by_entry[b].size();

  do {
    std::vector<PathId> pids(entries);
    for (std::size_t b = 0; b < entries; ++b) pids[b] = cat.by_entry[b][pick[b]];

    // Per-aircraft entry-shift menu, nearest-to-plan first. A missing window
    // means this path cannot carry the aircraft inside the horizon at all.
    std::vector<std::vector<int>> menu(fleet_size);
    bool dead = false;
    for (std::size_t a = 0; a < fleet_size && !dead; ++a) {
      const PathId pid = pids[sc.aircraft[a].entry_idx];
      const auto it = idx.shifts[a].find(pid);
      if (it == idx.shifts[a].end()) {
        dead = true;
        break;
      }
      for (int s = it->second.first; s <= it->second.second; ++s) menu[a].push_back(s);
      std::sort(menu[a].begin(), menu[a].end(),
                [](int x, int y) { return std::pair(std::abs(x), x) < std::pair(std::abs(y), y); });
    }
    if (dead) continue;

    std::set<EdgeId> uniq;
    double flow = 0.0;
    for (std::size_t b = 0; b < entries; ++b) {
      const Path& p = cat.paths[pids[b]];
      uniq.insert(p.edge_ids.begin(), p.edge_ids.end());
      flow += fleet[b] * p.length;
    }
    double tree_weight = 0.0;
    for (EdgeId e : uniq) tree_weight += g.edge_len[e];
    const double objective = beta * tree_weight + (1.0 - beta) * flow;
    // Entry times never move the objective, so a tuple that cannot beat the
    // incumbent needs no schedule search; on a tie the earlier tuple stays.
    if (have_best && objective >= best.objective) continue;

    Solution cand;
    cand.status = SolveStatus::Optimal;
    cand.objective = objective;
    cand.routes = pids;
    for (EdgeId e : uniq) cand.tree.push_back(g.edges[e]);
    std::sort(cand.tree.begin(), cand.tree.end());

    std::vector<std::size_t> at(fleet_size, 0);
    std::vector<std::size_t> at_radix(fleet_size);
    for (std::size_t a = 0; a < fleet_size; ++a) at_radix[a] = menu[a].size();

    bool first_probe = true;
    do {
      cand.schedule.clear();
      long dev_sum = 0;
      for (std::size_t a = 0; a < fleet_size; ++a) {
        const Aircraft& ac = sc.aircraft[a];
        const int shift = menu[a][at[a]];
        ScheduleEntry se;
        se.aircraft = ac.id;
        se.entry_idx = ac.entry_idx;
        se.path = pids[ac.entry_idx];
        se.shift = shift;
        se.times = idx.xi[a].at(se.path);
        for (Minute& t : se.times) t += shift;
        cand.schedule.push_back(std::move(se));
        dev_sum += std::abs(shift);
      }
      cand.avg_deviation =
          fleet_size == 0 ? 0.0 : static_cast<double>(dev_sum) / static_cast<double>(fleet_size);

      const ValidationReport rep = validate_solution(sc, g, turns, cat, cand);
      if (first_probe && structurally_broken(rep)) break;
      first_probe = false;
      if (rep.violations.empty()) {
        best = cand;
        have_best = true;
        break;
      }
    } while (advance(at, at_radix));
  } while (advance(pick, pick_radix));

  if (have_best) best.status = SolveStatus::Optimal;
  best.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return best;
}

}  // namespace atp

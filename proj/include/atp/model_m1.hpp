#pragma once

#include <map>
#include <utility>
#include <vector>

#include "atp/backend.hpp"
#include "atp/grid.hpp"
#include "atp/mip.hpp"
#include "atp/pathgen.hpp"
#include "atp/scenario.hpp"
#include "atp/solution.hpp"

namespace atp {

// Size gate for the compact model.  It exists to cross-check the path-based
// model on desk instances and is deliberately not tuned beyond that.
struct M1Limits {
  int max_nodes = 40;     // present grid nodes
  int max_aircraft = 5;
  int max_horizon = 40;   // last modelled minute
};

// The compact formulation works directly on the grid: binary tree edges x,
// continuous per-edge flow f, one unit path flow per entry (xe), a hop count
// per entry (l), and a time-expanded occupancy layer (y chained by z) from
// which profile choice falls out via the psi/phi selectors.
struct M1Model {
  MipModel mip;
  std::vector<Edge> edges;                 // grid edge order
  std::vector<int> x_var;                  // per edge
  std::vector<int> f_var;                  // per edge
  std::vector<std::vector<int>> xep_var;   // [entry][edge]
  std::vector<int> ell_var;                // per entry
  // Entry-layer occupancy per aircraft, keyed (profile hops, entry minute).
  std::vector<std::map<std::pair<int, int>, int>> start_var;
};

M1Model build_m1(const GridGraph& g, const TurnTable& turns, const Scenario& sc,
                 const M1Limits& limits = {});

// Reads a solved assignment back into a Solution.  The catalog only names the
// recovered routes; route nodes, times and shifts come from the assignment
// itself.  Throws DecodeError when the values break a selection rule (no or
// multiple entry minutes per aircraft, a route that is not a simple path, a
// hop count that disagrees with the chosen profile, a route missing from the
// catalog).
Solution extract_m1_solution(const M1Model& m, const SolveResult& res, const Scenario& sc,
                             const PathCatalog& cat);

Solution solve_m1(const GridGraph& g, const TurnTable& turns, const Scenario& sc,
                  const PathCatalog& cat, MipBackend& backend, const SolveParams& params,
                  const M1Limits& limits = {});

}  // namespace atp

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
#include "atp/trajectories.hpp"

namespace atp {

// Entry-time slack actually available to the model; pinned entries mean zero.
int effective_mu(const Scenario& sc);

// Path-based arrival model.  Variable handles are kept so the optional
// constraint blocks and the extractor can refer back into the MIP.
struct M2Model {
  MipModel mip;
  std::vector<Edge> edges;   // grid edge list, indexed by EdgeId
  std::vector<int> x_var;    // per EdgeId
  std::vector<int> rho_var;  // per PathId
  // (path, shift) -> column, one map per aircraft; empty when uses_tau is
  // false (fixed entry times with a single wake category collapse the
  // trajectory layer onto the path variables)
  std::vector<std::map<std::pair<PathId, int>, int>> tau_var;
  bool uses_tau = true;
};

M2Model build_m2(const GridGraph& g, const PathCatalog& cat, const OccupancyIndex& idx,
                 const Scenario& sc);

// Tree-change budget against the tree flown in the previous period.
void add_consistency(M2Model& m, const GridGraph& g, const PathCatalog& cat,
                     const std::vector<Edge>& previous_tree, int u);

// Blocks node/edge capacity still consumed by aircraft of the previous period.
void add_carryover(M2Model& m, const GridGraph& g, const PathCatalog& cat,
                   const OccupancyIndex& idx, const Scenario& sc, const CarryoverState& carry);

Solution extract_solution(const M2Model& m, const SolveResult& res, const Scenario& sc,
                          const PathCatalog& cat, const OccupancyIndex& idx);

// build_m2, the optional blocks requested by sc.options, solve, extract.
Solution solve_m2(const GridGraph& g, const PathCatalog& cat, const OccupancyIndex& idx,
                  const Scenario& sc, MipBackend& backend, const SolveParams& params);

}  // namespace atp

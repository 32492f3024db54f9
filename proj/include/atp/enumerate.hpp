#pragma once

#include "atp/pathgen.hpp"
#include "atp/scenario.hpp"
#include "atp/solution.hpp"
#include "atp/trajectories.hpp"

namespace atp {

struct EnumerateLimits {
  int max_paths_per_entry = 8;
  int max_aircraft = 6;
  int max_mu = 2;
};

// Exhaustive search over (one path per entry) x (one entry minute per
// aircraft). Feasibility of every candidate is decided by the independent
// validator, never by the MIP row machinery, so this is a second opinion on
// the solver pipeline, not a reformulation of it. Ties are broken
// deterministically: earlier path-id tuples win, then entry times closer to
// the plan (earlier on equal deviation).
Solution enumerate_m2(const PathCatalog& cat, const OccupancyIndex& idx, const Scenario& sc,
                      const EnumerateLimits& lim = {});

}  // namespace atp

#pragma once

#include <string>
#include <vector>

#include "atp/backend.hpp"
#include "atp/grid.hpp"
#include "atp/pathgen.hpp"

namespace atp {

// Per-aircraft outcome: which path it rides, how far its entry slid, and the
// minute it passes each node of that path.
struct ScheduleEntry {
  std::string aircraft;
  int entry_idx = -1;
  PathId path = -1;
  int shift = 0;
  std::vector<Minute> times;
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct Solution {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  double gap = 0.0;
  double runtime_seconds = 0.0;
  std::vector<Edge> tree;
  std::vector<PathId> routes;  // chosen path per entry, indexed by entry
  std::vector<ScheduleEntry> schedule;
  double avg_deviation = 0.0;  // mean |shift| over the schedule
  friend bool operator==(const Solution&, const Solution&) = default;
};

}  // namespace atp

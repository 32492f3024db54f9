#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "atp/grid.hpp"
#include "atp/pathgen.hpp"
#include "atp/scenario.hpp"
#include "atp/solution.hpp"

namespace atp {

// Families: tree-degree, turn-rule, crossing, path-membership, entry-window,
// horizon, profile, separation, consistency, carryover.
struct Violation {
  std::string family;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  double avg_deviation = 0.0;  // mean |scheduled entry - planned entry|
  bool ok() const { return violations.empty(); }
  bool has(const std::string& family) const;
  std::string summary() const;
};

// Separation core over opaque location keys, so the same logic serves grid
// nodes and named fixes alike.
struct Visit {
  int aircraft;
  int category;
  std::int64_t key;
  Minute t;
};

struct SeparationConflict {
  std::size_t leader;   // index into the visit vector, earlier of the pair
  std::size_t trailer;
  int required;
  int actual;
};

std::vector<SeparationConflict> find_separation_conflicts(const std::vector<Visit>& visits,
                                                          const SeparationMatrix& sep);

// Convenience wrapper for externally supplied schedules keyed by fix names.
struct LabeledVisit {
  std::string aircraft;
  std::string category;
  std::string key;
  Minute t;
};

std::vector<std::string> check_separation_labeled(const std::vector<LabeledVisit>& visits,
                                                  const SeparationMatrix& sep);

double mean_abs_deviation(const std::vector<std::pair<Minute, Minute>>& planned_actual);

// Full structural + temporal check of a candidate solution.  Violations are
// returned as data; nothing here throws on a bad solution.
ValidationReport validate_solution(const Scenario& sc, const GridGraph& g, const TurnTable& turns,
                                   const PathCatalog& cat, const Solution& sol);

}  // namespace atp

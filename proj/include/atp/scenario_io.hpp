#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "atp/backend.hpp"
#include "atp/pathgen.hpp"
#include "atp/scenario.hpp"
#include "atp/solution.hpp"
#include "atp/validator.hpp"

namespace atp {

// Wall-clock helpers. Files carry hh:mm; everything in memory is minutes
// relative to the scenario origin. Hours up to 47 are accepted so a horizon
// may spill past midnight.
// Status words used in solution files and terminal output; infeasible
// periods print as "---" like the published tables.
const char* status_text(SolveStatus s);

Minute parse_hhmm(const std::string& text);   // "05:03" -> 303
std::string format_hhmm(Minute abs_minutes);  // 303 -> "05:03"

// ---- scenario files ---------------------------------------------------------

// Parses a scenario document. `source` names the input in diagnostics and
// supplies the default scenario name; `base_dir` anchors relative references
// (profile files, previous-tree files, carryover sources). Defaults: origin
// 00:00, lambda 14, gamma 135, beta 0.1, a single two-minute category when no
// separation block is given, and neutral synthetic profiles when no profile
// source is given.
Scenario parse_scenario(const std::string& text, const std::string& source,
                        const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

// Writes the fully resolved scenario (profiles, previous tree and carryover
// inline). parse_scenario(emit_scenario(sc)) reproduces sc field for field.
std::string emit_scenario(const Scenario& sc);

// ---- solution files ---------------------------------------------------------

// Row context that the Solution struct itself does not carry but a solution
// file needs to stand alone: names, category, the planned time and the route
// geometry. Parallel to Solution::schedule.
struct SolutionRow {
  std::string entry_name;
  std::string category;
  Minute planned_abs = 0;       // wall-clock minutes
  std::vector<NodeId> nodes;    // route nodes, entry .. runway
  friend bool operator==(const SolutionRow&, const SolutionRow&) = default;
};

struct SolutionRecord {
  std::string scenario_name;
  Minute origin = 0;  // wall-clock minutes represented by t = 0
  int grid_rows = 0;
  int grid_cols = 0;
  Solution solution;
  std::vector<SolutionRow> rows;  // parallel to solution.schedule
  std::vector<std::pair<NodeId, std::string>> merge_labels;
  friend bool operator==(const SolutionRecord&, const SolutionRecord&) = default;
};

// Merge points of a tree (nodes of indegree two), labelled M1..M3 from the
// runway-farthest merge inward, by hop count along the tree; ties fall back
// to node id. More than three merges yield no labels (grid indices have to
// do), matching the published tables which never label more than three.
std::vector<std::pair<NodeId, std::string>> label_merge_points(const std::vector<Edge>& tree,
                                                               NodeId runway);

SolutionRecord make_record(const Scenario& sc, const PathCatalog& cat, const Solution& sol);
std::string emit_solution(const SolutionRecord& rec);
SolutionRecord parse_solution(const std::string& text, const std::string& source);
SolutionRecord load_solution(const std::string& path);

// ---- published schedule tables ----------------------------------------------

// A schedule transcribed from an external source: per aircraft, the planned
// and scheduled entry times plus the named fixes it passes. Times are wall
// clock; no grid is involved.
struct ScheduleRow {
  std::string entry;
  std::string aircraft;
  std::string category;
  Minute planned = 0;
  Minute scheduled = 0;
  std::vector<std::pair<std::string, Minute>> fixes;  // (label, time) in file order
};

struct ScheduleTable {
  std::string name;
  SeparationMatrix separation;
  std::vector<ScheduleRow> rows;
};

ScheduleTable parse_schedule_table(const std::string& text, const std::string& source);
ScheduleTable load_schedule_table(const std::string& path);

// Flattens a table into labelled visits for the separation checker. Entry
// labels and any fix named in `shared` keep their name; all other fixes get
// `local_prefix` prepended, so tables for different trees can be checked
// jointly without conflating their tree-specific merge labels.
std::vector<LabeledVisit> table_visits(const ScheduleTable& table, const std::string& local_prefix,
                                       const std::vector<std::string>& shared = {"RWY"});

double table_avg_deviation(const ScheduleTable& table);

// ---- solve pipeline ----------------------------------------------------------

struct PeriodResult {
  Scenario scenario;  // as solved, including any chain-injected blocks
  Solution solution;
  ValidationReport report;  // empty unless the solve produced a schedule
  SolutionRecord record;
};

// grid -> turns -> paths -> index -> solve -> validate -> record. Errors from
// any stage are rethrown nested inside a StageError naming the stage.
PeriodResult run_period(const Scenario& sc, MipBackend& backend, const SolveParams& params);

enum class ChainMode { independent, carryover, consistency, both };
ChainMode parse_chain_mode(const std::string& token);  // "a".."d"

// Occupancies an earlier period leaves behind at `boundary_abs`: every
// scheduled aircraft whose landing time is at or past the boundary
// contributes its node visits from the boundary on and every edge traversal
// still in progress or later. Times in the result are relative to the
// boundary; an edge entered before it gets a negative start.
CarryoverState extract_carryover(const SolutionRecord& prev, Minute boundary_abs,
                                 const SeparationMatrix& target_sep);

// Solves the periods in order. Past the first period, mode b/d replaces the
// carryover block with what extract_carryover reads off the previous result
// (boundary = the period's origin) and mode c/d points previous_tree at the
// tree just flown; mode a severs both links. The sink sees every result as
// soon as it exists, so partial output survives a ChainBreakError, which is
// raised for any period that ends without a schedule.
using PeriodSink = std::function<void(std::size_t, const PeriodResult&)>;
std::vector<PeriodResult> run_chain(const std::vector<Scenario>& periods, ChainMode mode,
                                    MipBackend& backend, const SolveParams& params,
                                    const PeriodSink& sink = {});

}  // namespace atp

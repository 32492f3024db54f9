#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atp/grid.hpp"

namespace atp {

// Wake-turbulence separation in whole minutes, sigma[leader][trailer].
struct SeparationMatrix {
  std::vector<std::string> categories;
  std::vector<std::vector<int>> sigma;

  int count() const { return static_cast<int>(categories.size()); }
  int max_sigma() const;  // the big-M constant
  bool uniform() const;   // every entry equal
  void check() const;     // throws InvalidScenarioError
  int category_index(const std::string& name) const;  // -1 if unknown
  friend bool operator==(const SeparationMatrix&, const SeparationMatrix&) = default;
};

struct Aircraft {
  std::string id;
  int entry_idx = -1;  // into GridGraph::entries
  Minute planned = 0;  // announced TMA entry time
  int category = 0;    // into SeparationMatrix::categories
  friend bool operator==(const Aircraft&, const Aircraft&) = default;
};

// Per-segment transit minutes keyed by aircraft id with a category-name
// fallback, per route hop count.
struct ProfileStore {
  std::map<std::pair<std::string, int>, std::vector<int>> table;

  void add(const std::string& key, int hops, std::vector<int> segment_minutes);
  const std::vector<int>* find(const std::string& aircraft_id,
                               const std::string& category_name, int hops) const;
  bool empty() const { return table.empty(); }
  friend bool operator==(const ProfileStore&, const ProfileStore&) = default;
};

// Parameters of the synthetic profile generator: a constant base speed with a
// slow-down over the trailing segments of the descent, plus an optional extra
// minute (or more) on the final approach segment.
struct SyntheticProfileSpec {
  struct Category {
    std::string name;
    int base = 1;                      // minutes per segment
    double tail_fraction = 1.0 / 3.0;  // share of trailing segments slowed
    int tail_add = 1;                  // extra minutes on each slowed segment
    int final_add = 0;                 // extra minutes on the final segment
  };
  std::vector<Category> categories;
};

ProfileStore synthesize_profiles(const SyntheticProfileSpec& spec, int min_hops, int max_hops);

// Occupancies inherited from the previous planning period.
struct CarryoverNode {
  int category = 0;
  NodeId node = -1;
  Minute t = 0;
  friend bool operator==(const CarryoverNode&, const CarryoverNode&) = default;
};
struct CarryoverEdge {
  NodeId from = -1;
  NodeId to = -1;
  Minute t_from = 0;  // time the aircraft was at `from`
  Minute t_to = 0;    // time it reached `to`
  friend bool operator==(const CarryoverEdge&, const CarryoverEdge&) = default;
};
struct CarryoverState {
  std::vector<CarryoverNode> nodes;
  std::vector<CarryoverEdge> edges;
  bool empty() const { return nodes.empty() && edges.empty(); }
  friend bool operator==(const CarryoverState&, const CarryoverState&) = default;
};

struct ModelOptions {
  double beta = 0.1;
  int mu = 5;
  bool single_category = false;  // use the shared-sigma formulation
  bool fixed_entry = false;      // pin every entry time to the plan
  std::optional<int> consistency_u;
  std::vector<Edge> previous_tree;
  std::optional<CarryoverState> carryover;
  friend bool operator==(const ModelOptions&, const ModelOptions&) = default;
};

struct Scenario {
  std::string name;
  GridSpec grid;
  std::vector<std::string> entry_names;  // parallel to grid.entries
  Minute origin = 0;    // minutes after midnight represented by t = 0
  int horizon = 0;      // last modelled minute
  int lambda = 14;      // node budget per path
  double gamma_deg = 135.0;
  ModelOptions options;
  SeparationMatrix separation;
  std::vector<Aircraft> aircraft;
  ProfileStore profiles;

  int entry_index(const std::string& name) const;  // -1 if unknown
  void check() const;                              // semantic validation
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

}  // namespace atp

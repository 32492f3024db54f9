#pragma once

#include <unordered_map>
#include <vector>

#include "atp/pathgen.hpp"
#include "atp/scenario.hpp"

namespace atp {

// One admissible movement of an aircraft: ride `path`, entering `shift`
// minutes away from the announced entry time.
struct Trajectory {
  int aircraft = -1;
  PathId path = -1;
  int shift = 0;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Arrival time at every node of a path when the aircraft enters at
// entry_time and flies the per-segment profile u.
std::vector<Minute> node_times(const Path& path, const std::vector<int>& u, Minute entry_time);

// Node-occupancy bookkeeping for one scenario: baseline node times per
// (aircraft, path) at the announced entry, inverted point lookups, and the
// admissible entry-shift range per trajectory. Shifting the entry by s
// shifts every occupancy time by s, so only the baseline is stored.
struct OccupancyIndex {
  int horizon = 0;
  int mu = 0;

  // All per-aircraft containers are indexed by position in Scenario::aircraft.
  std::vector<std::unordered_map<PathId, std::vector<Minute>>> xi;
  std::vector<std::unordered_map<PathId, std::pair<int, int>>> shifts;  // inclusive range
  std::vector<std::unordered_map<std::int64_t, std::vector<PathId>>> point;
  std::vector<Trajectory> excluded;  // shifts dropped for landing past the horizon

  static std::int64_t key(NodeId node, Minute t) {
    return (static_cast<std::int64_t>(node) << 32) | static_cast<std::uint32_t>(t);
  }

  // Paths of aircraft a that sit on node i exactly at baseline time t.
  const std::vector<PathId>* at(int a, NodeId i, Minute t) const {
    auto it = point[a].find(key(i, t));
    return it == point[a].end() ? nullptr : &it->second;
  }
  // Paths of aircraft a that touch node i within [t, t + sigma - 1].
  std::vector<PathId> window(int a, NodeId i, Minute t, int sigma) const;

  bool shift_valid(int a, PathId p, int shift) const {
    auto it = shifts[a].find(p);
    return it != shifts[a].end() && shift >= it->second.first && shift <= it->second.second;
  }
};

OccupancyIndex build_occupancy_index(const PathCatalog& cat,
                                     const std::vector<Aircraft>& aircraft,
                                     const SeparationMatrix& sep, const ProfileStore& profiles,
                                     int mu, int horizon);

}  // namespace atp

#include "atp/trajectories.hpp"

#include <algorithm>
#include <string>

namespace atp {

std::vector<Minute> node_times(const Path& path, const std::vector<int>& u, Minute entry_time) {
  if (u.size() != path.edge_ids.size())
    throw MissingProfileError("profile length " + std::to_string(u.size()) +
                              " does not match a " + std::to_string(path.edge_ids.size()) +
                              "-hop path");
  std::vector<Minute> t(path.nodes.size());
  t[0] = entry_time;
  for (std::size_t k = 0; k < u.size(); ++k) t[k + 1] = t[k] + u[k];
  return t;
}

std::vector<PathId> OccupancyIndex::window(int a, NodeId i, Minute t, int sigma) const {
  std::vector<PathId> result;
  for (Minute tau = t; tau < t + sigma; ++tau) {
    if (const auto* pids = at(a, i, tau))
      result.insert(result.end(), pids->begin(), pids->end());
  }
  std::sort(result.begin(), result.end());
  return result;
}

OccupancyIndex build_occupancy_index(const PathCatalog& cat,
                                     const std::vector<Aircraft>& aircraft,
                                     const SeparationMatrix& sep, const ProfileStore& profiles,
                                     int mu, int horizon) {
  OccupancyIndex idx;
  idx.horizon = horizon;
  idx.mu = mu;
  const int n = static_cast<int>(aircraft.size());
  idx.xi.resize(n);
  idx.shifts.resize(n);
  idx.point.resize(n);

  for (int a = 0; a < n; ++a) {
    const Aircraft& ac = aircraft[a];
    const std::string& cat_name = sep.categories.at(ac.category);
    for (PathId pid : cat.by_entry.at(ac.entry_idx)) {
      const Path& path = cat.paths[pid];
      const std::vector<int>* u = profiles.find(ac.id, cat_name, path.hops());
      if (!u)
        throw MissingProfileError("aircraft '" + ac.id + "' has no profile for a " +
                                  std::to_string(path.hops()) + "-hop route");
      const auto times = node_times(path, *u, ac.planned);

      const int lo = std::max(-mu, -ac.planned);
      int hi = std::min(mu, horizon - times.back());
      for (int s = std::max(lo, hi + 1); s <= mu; ++s)
        idx.excluded.push_back({a, pid, s});
      if (hi < lo) continue;  // nothing admissible for this path

      idx.shifts[a].emplace(pid, std::make_pair(lo, hi));
      for (std::size_t k = 0; k < times.size(); ++k)
        idx.point[a][OccupancyIndex::key(path.nodes[k], times[k])].push_back(pid);
      idx.xi[a].emplace(pid, std::move(times));
    }
  }
  return idx;
}

}  // namespace atp

#include "atp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace atp {

int SeparationMatrix::max_sigma() const {
  int m = 0;
  for (const auto& row : sigma)
    for (int v : row) m = std::max(m, v);
  return m;
}

bool SeparationMatrix::uniform() const {
  for (const auto& row : sigma)
    for (int v : row)
      if (v != sigma[0][0]) return false;
  return true;
}

void SeparationMatrix::check() const {
  if (categories.empty()) throw InvalidScenarioError("separation: no categories");
  if (sigma.size() != categories.size())
    throw InvalidScenarioError("separation: sigma row count mismatch");
  std::set<std::string> names;
  for (const auto& n : categories)
    if (!names.insert(n).second)
      throw InvalidScenarioError("separation: duplicate category '" + n + "'");
  for (const auto& row : sigma) {
    if (row.size() != categories.size())
      throw InvalidScenarioError("separation: sigma column count mismatch");
    for (int v : row)
      if (v < 1) throw InvalidScenarioError("separation: sigma entries must be >= 1 minute");
  }
}

int SeparationMatrix::category_index(const std::string& name) const {
  for (std::size_t i = 0; i < categories.size(); ++i)
    if (categories[i] == name) return static_cast<int>(i);
  return -1;
}

void ProfileStore::add(const std::string& key, int hops, std::vector<int> segment_minutes) {
  if (hops < 1 || static_cast<int>(segment_minutes.size()) != hops)
    throw InvalidScenarioError("profile for '" + key + "' must list exactly " +
                               std::to_string(hops) + " segment times");
  for (int u : segment_minutes)
    if (u < 1) throw InvalidScenarioError("profile segment times must be >= 1 minute");
  table[{key, hops}] = std::move(segment_minutes);
}

const std::vector<int>* ProfileStore::find(const std::string& aircraft_id,
                                           const std::string& category_name, int hops) const {
  if (auto it = table.find({aircraft_id, hops}); it != table.end()) return &it->second;
  if (auto it = table.find({category_name, hops}); it != table.end()) return &it->second;
  return nullptr;
}

ProfileStore synthesize_profiles(const SyntheticProfileSpec& spec, int min_hops, int max_hops) {
  ProfileStore store;
  for (const auto& cat : spec.categories) {
    if (cat.base < 1 || cat.tail_add < 0 || cat.final_add < 0 || cat.tail_fraction < 0.0 ||
        cat.tail_fraction > 1.0)
      throw InvalidScenarioError("synthetic profile spec out of range for '" + cat.name + "'");
    for (int p = std::max(1, min_hops); p <= max_hops; ++p) {
      const int tail = static_cast<int>(std::ceil(p * cat.tail_fraction - 1e-9));
      std::vector<int> u(p, cat.base);
      for (int k = p - tail; k < p; ++k) u[k] += cat.tail_add;
      u[p - 1] += cat.final_add;
      store.add(cat.name, p, std::move(u));
    }
  }
  return store;
}

int Scenario::entry_index(const std::string& name) const {
  for (std::size_t i = 0; i < entry_names.size(); ++i)
    if (entry_names[i] == name) return static_cast<int>(i);
  return -1;
}

void Scenario::check() const {
  separation.check();
  if (entry_names.size() != grid.entries.size())
    throw InvalidScenarioError("scenario: entry name count does not match the grid");
  if (horizon < 1) throw InvalidScenarioError("scenario: horizon must be positive");
  if (lambda < 2) throw InvalidScenarioError("scenario: lambda must be at least 2");
  if (options.mu < 0) throw InvalidScenarioError("scenario: mu must be non-negative");
  if (options.beta < 0.0 || options.beta > 1.0)
    throw InvalidScenarioError("scenario: beta must lie in [0, 1]");
  std::set<std::string> ids;
  for (const auto& a : aircraft) {
    if (!ids.insert(a.id).second)
      throw InvalidScenarioError("scenario: duplicate aircraft id '" + a.id + "'");
    if (a.entry_idx < 0 || a.entry_idx >= static_cast<int>(grid.entries.size()))
      throw InvalidScenarioError("scenario: aircraft '" + a.id + "' has no valid entry");
    if (a.category < 0 || a.category >= separation.count())
      throw InvalidScenarioError("scenario: aircraft '" + a.id + "' has no valid category");
    if (a.planned < 0 || a.planned > horizon)
      throw InvalidScenarioError("scenario: aircraft '" + a.id +
                                 "' planned entry outside the horizon");
  }
  if (options.consistency_u && *options.consistency_u < 0)
    throw InvalidScenarioError("scenario: consistency budget must be non-negative");
}

}  // namespace atp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "atp/model_m1.hpp"
#include "atp/model_m2.hpp"
#include "atp/validator.hpp"

using namespace atp;

namespace {

const double kShort = 2.0 * std::sqrt(2.0);  // [0,4,8] on a unit 3x3 grid

GridSpec grid3(std::vector<NodeId> entries, std::vector<NodeId> obstacles = {}) {
  GridSpec s;
  s.rows = s.cols = 3;
  s.entries = std::move(entries);
  s.runway = 8;
  s.obstacles = std::move(obstacles);
  return s;
}

SeparationMatrix medium_only(int sigma = 2) {
  SeparationMatrix s;
  s.categories = {"M"};
  s.sigma = {{sigma}};
  return s;
}

SeparationMatrix medium_light() {
  SeparationMatrix s;
  s.categories = {"M", "L"};
  s.sigma = {{2, 3}, {2, 2}};
  return s;
}

struct Inst {
  Scenario sc;
  GridGraph g;
  TurnTable turns;
  PathCatalog cat;
  OccupancyIndex idx;

  PathId path(const std::vector<NodeId>& nodes) const {
    for (const Path& p : cat.paths)
      if (p.nodes == nodes) return p.id;
    return -1;
  }
};

Inst make(const GridSpec& spec, SeparationMatrix sep, std::vector<Aircraft> aircraft,
          ModelOptions opt, int horizon, int lambda = 4) {
  Inst in;
  in.sc.name = "unit";
  in.sc.grid = spec;
  for (std::size_t i = 0; i < spec.entries.size(); ++i)
    in.sc.entry_names.push_back("E" + std::to_string(i));
  in.sc.horizon = horizon;
  in.sc.lambda = lambda;
  in.sc.gamma_deg = 135.0;
  in.sc.options = std::move(opt);
  in.sc.separation = std::move(sep);
  in.sc.aircraft = std::move(aircraft);
  for (const std::string& c : in.sc.separation.categories)
    for (int h = 1; h <= 6; ++h) in.sc.profiles.add(c, h, std::vector<int>(h, 1));

  in.g = build_grid(in.sc.grid);
  in.turns = build_turn_table(in.g, in.sc.gamma_deg);
  in.cat = build_catalog(in.g, in.turns, in.sc.lambda);
  in.idx = build_occupancy_index(in.cat, in.sc.aircraft, in.sc.separation, in.sc.profiles,
                                 effective_mu(in.sc), in.sc.horizon);
  return in;
}

Solution run_m1(const Inst& in, double time_limit = 120.0) {
  auto backend = make_backend("highs");
  SolveParams params;
  params.time_limit_seconds = time_limit;
  return solve_m1(in.g, in.turns, in.sc, in.cat, *backend, params);
}

Solution run_m2(const Inst& in, double time_limit = 120.0) {
  auto backend = make_backend("highs");
  SolveParams params;
  params.time_limit_seconds = time_limit;
  return solve_m2(in.g, in.cat, in.idx, in.sc, *backend, params);
}

std::set<std::string> row_tags(const MipModel& mip) {
  std::set<std::string> tags;
  for (const MipRow& r : mip.rows) tags.insert(r.tag);
  return tags;
}

std::string lp_text(const MipModel& mip) {
  std::ostringstream out;
  mip.write_lp(out);
  return out.str();
}

// Statuses must match; on a solved instance the objectives must, too.
void check_parity(const Inst& in) {
  const Solution a = run_m2(in);
  const Solution b = run_m1(in);
  CHECK(b.status == a.status);
  if (a.status == SolveStatus::Optimal) {
    CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-9));
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, b).ok());
  }
}

}  // namespace

TEST_CASE("a lone aircraft lands over the cheapest tree") {
  // Obstacle on node 3 leaves two routes: [0,1,5,8] and the diagonal [0,4,8].
  ModelOptions opt;
  opt.mu = 0;
  Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
  REQUIRE(in.cat.paths.size() == 2);

  M1Model m = build_m1(in.g, in.turns, in.sc);
  CHECK(m.x_var.size() == in.g.edges.size());
  CHECK(m.f_var.size() == in.g.edges.size());
  REQUIRE(m.xep_var.size() == 1);
  CHECK(m.xep_var[0].size() == in.g.edges.size());
  CHECK(m.ell_var.size() == 1);
  // Pinned entry, so each hop count in the node budget yields one start.
  CHECK(m.start_var[0].size() == 3);

  const auto tags = row_tags(m.mip);
  for (const char* tag :
       {"m1.flow", "m1.flow.link", "m1.indeg", "m1.outdeg", "m1.runway", "m1.entry.out",
        "m1.turn", "m1.route.link", "m1.route.start", "m1.route.end", "m1.route.flow",
        "m1.entry.choice", "m1.occ.tree", "m1.occ.one", "m1.profile.match", "m1.length",
        "m1.psi.a", "m1.psi.b", "m1.psi.c", "m1.psi.d", "m1.z.route", "m1.z.occ", "m1.z.and",
        "m1.step"})
    CHECK_MESSAGE(tags.count(tag), tag);
  CHECK(!tags.count("m1.sep.same"));  // a single aircraft needs no separation
  CHECK(!tags.count("m1.sep.diff"));

  const Solution sol = run_m1(in);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(kShort).epsilon(1e-9));
  CHECK(sol.routes == std::vector<PathId>{in.path({0, 4, 8})});
  CHECK(sol.tree == std::vector<Edge>{{0, 4}, {4, 8}});
  REQUIRE(sol.schedule.size() == 1);
  CHECK(sol.schedule[0].shift == 0);
  CHECK(sol.schedule[0].times == std::vector<Minute>{0, 1, 2});
  CHECK(sol.avg_deviation == 0.0);
  CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
}

TEST_CASE("the compact and path models agree on small instances") {
  const std::vector<std::vector<Aircraft>> fleets = {
      {{"a1", 0, 0, 0}},
      {{"a1", 0, 0, 0}, {"a2", 1, 1, 0}},
      {{"a1", 0, 0, 0}, {"a2", 0, 2, 0}, {"a3", 1, 1, 0}},
      {{"a1", 0, 1, 0}, {"a2", 1, 1, 0}, {"a3", 0, 3, 0}},
  };
  for (const auto& fleet : fleets) {
    for (int mu : {0, 1}) {
      ModelOptions opt;
      opt.mu = mu;
      check_parity(make(grid3({0, 2}), medium_only(), fleet, opt, 12));
    }
  }
}

TEST_CASE("asymmetric wake separation binds in both directions") {
  // A medium leads a light off the same entry: 3 minutes forward, 2 back.
  for (int mu : {1, 2}) {
    ModelOptions opt;
    opt.mu = mu;
    Inst in = make(grid3({0}, {3}), medium_light(), {{"m1", 0, 0, 0}, {"l1", 0, 1, 1}}, opt, 12);
    const Solution sol = run_m1(in);
    CHECK(sol.status == (mu == 1 ? SolveStatus::Infeasible : SolveStatus::Optimal));
    if (mu == 2) CHECK(sol.objective == doctest::Approx(1.9 * kShort).epsilon(1e-9));
    check_parity(in);
  }
}

TEST_CASE("a tight horizon forces early entries") {
  // Landing by minute 4 needs the 2-hop route entered at 1 or 2.
  ModelOptions opt;
  opt.mu = 2;
  Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 3, 0}}, opt, 4);

  const M1Model m = build_m1(in.g, in.turns, in.sc);
  // Entry windows shrink per profile: 3 starts ride 1 hop, 2 ride 2, 1 rides 3.
  CHECK(m.start_var[0].size() == 6);

  const Solution sol = run_m1(in);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(kShort).epsilon(1e-9));
  REQUIRE(sol.schedule.size() == 1);
  CHECK(sol.schedule[0].shift <= -1);
  CHECK(sol.schedule[0].times.back() <= 4);
  CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  check_parity(in);
}

TEST_CASE("beta one prices the tree alone") {
  // With the flow term muted the optimum is the lightest two-entry tree that
  // still funnels into a single final approach: [0,1,5,8] joined by [2,5].
  ModelOptions opt;
  opt.mu = 0;
  opt.beta = 1.0;
  Inst in = make(grid3({0, 2}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
  const Solution a = run_m2(in);
  const Solution b = run_m1(in);
  REQUIRE(a.status == SolveStatus::Optimal);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(a.objective == doctest::Approx(3.0 + std::sqrt(2.0)).epsilon(1e-9));
  CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-9));
}

TEST_CASE("aircraft that cannot reach the runway in time make the model infeasible") {
  ModelOptions opt;
  opt.mu = 0;
  Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 10, 0}}, opt, 5);
  CHECK(run_m1(in).status == SolveStatus::Infeasible);
  CHECK(run_m2(in).status == SolveStatus::Infeasible);
}

TEST_CASE("every constraint family carries its tag") {
  // Two mediums pinned on one entry plus a light on the other, against a
  // 2-minute horizon: every separation variant, including the clipped tails,
  // shows up in the row census.
  ModelOptions opt;
  opt.mu = 0;
  Inst in = make(grid3({0, 2}), medium_light(),
                 {{"m1", 0, 0, 0}, {"m2", 0, 0, 0}, {"l1", 1, 0, 1}}, opt, 2);
  const M1Model m = build_m1(in.g, in.turns, in.sc);
  const std::set<std::string> expected = {
      "m1.flow",       "m1.flow.link",    "m1.indeg",         "m1.outdeg",
      "m1.runway",     "m1.entry.out",    "m1.turn",          "m1.cross.int",
      "m1.cross.a",    "m1.cross.b",      "m1.route.link",    "m1.route.start",
      "m1.route.end",  "m1.route.flow",   "m1.entry.choice",  "m1.occ.tree",
      "m1.occ.one",    "m1.profile.match", "m1.length",       "m1.psi.a",
      "m1.psi.b",      "m1.psi.c",        "m1.psi.d",         "m1.sep.diff",
      "m1.sep.diff.tail", "m1.sep.same",  "m1.sep.same.tail", "m1.z.route",
      "m1.z.occ",      "m1.z.and",        "m1.step"};
  CHECK(row_tags(m.mip) == expected);
  // The pinned mediums collide on their shared entry minute.
  CHECK(run_m1(in).status == SolveStatus::Infeasible);
}

TEST_CASE("the desk-scale gates hold") {
  ModelOptions opt;
  opt.mu = 0;
  SUBCASE("too many nodes") {
    GridSpec spec;
    spec.rows = 7;
    spec.cols = 6;
    spec.entries = {0};
    spec.runway = 41;
    Inst in = make(spec, medium_only(), {}, opt, 10);
    CHECK_THROWS_AS(build_m1(in.g, in.turns, in.sc), M1ScaleError);
  }
  SUBCASE("too many aircraft") {
    std::vector<Aircraft> fleet;
    for (int i = 0; i < 6; ++i) fleet.push_back({"a" + std::to_string(i), 0, i, 0});
    Inst in = make(grid3({0}), medium_only(), fleet, opt, 20);
    CHECK_THROWS_AS(build_m1(in.g, in.turns, in.sc), M1ScaleError);
  }
  SUBCASE("too long a horizon") {
    Inst in = make(grid3({0}), medium_only(), {{"a1", 0, 0, 0}}, opt, 41);
    CHECK_THROWS_AS(build_m1(in.g, in.turns, in.sc), M1ScaleError);
  }
  SUBCASE("gates are configurable") {
    Inst in = make(grid3({0}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    M1Limits tight;
    tight.max_nodes = 8;  // the full 3x3 grid has 9
    CHECK_THROWS_AS(build_m1(in.g, in.turns, in.sc, tight), M1ScaleError);
    tight.max_nodes = 9;
    CHECK(build_m1(in.g, in.turns, in.sc, tight).mip.vars.size() > 0);
  }
}

TEST_CASE("reformulation extras stay out of the compact model") {
  ModelOptions base;
  base.mu = 0;
  SUBCASE("consistency budget") {
    ModelOptions opt = base;
    opt.consistency_u = 2;
    opt.previous_tree = {{0, 4}, {4, 8}};
    Inst in = make(grid3({0}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    CHECK_THROWS_AS(build_m1(in.g, in.turns, in.sc), InvalidScenarioError);
  }
  SUBCASE("carryover state") {
    ModelOptions opt = base;
    CarryoverState carry;
    carry.nodes.push_back({0, 4, 1});
    opt.carryover = carry;
    Inst in = make(grid3({0}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    CHECK_THROWS_AS(build_m1(in.g, in.turns, in.sc), InvalidScenarioError);
  }
  SUBCASE("shared-sigma flag on a mixed matrix") {
    ModelOptions opt = base;
    opt.single_category = true;
    Inst in = make(grid3({0}), medium_light(), {{"a1", 0, 0, 0}}, opt, 10);
    CHECK_THROWS_AS(build_m1(in.g, in.turns, in.sc), InvalidScenarioError);
  }
}

TEST_CASE("solver assignments are decoded strictly") {
  ModelOptions opt;
  opt.mu = 0;
  Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
  const M1Model m = build_m1(in.g, in.turns, in.sc);
  auto backend = make_backend("highs");
  SolveParams params;
  const SolveResult res = backend->solve(m.mip, params);
  REQUIRE(res.status == SolveStatus::Optimal);
  REQUIRE_NOTHROW(extract_m1_solution(m, res, in.sc, in.cat));

  SUBCASE("non-solutions pass through untouched") {
    SolveResult inf;
    inf.status = SolveStatus::Infeasible;
    const Solution sol = extract_m1_solution(m, inf, in.sc, in.cat);
    CHECK(sol.status == SolveStatus::Infeasible);
    CHECK(sol.tree.empty());
    CHECK(sol.schedule.empty());
  }
  SUBCASE("assignment width") {
    SolveResult bad = res;
    bad.values.pop_back();
    CHECK_THROWS_AS(extract_m1_solution(m, bad, in.sc, in.cat), DecodeError);
  }
  SUBCASE("no entry minute") {
    SolveResult bad = res;
    for (const auto& [key, var] : m.start_var[0]) bad.values[var] = 0.0;
    CHECK_THROWS_AS(extract_m1_solution(m, bad, in.sc, in.cat), DecodeError);
  }
  SUBCASE("two entry minutes") {
    SolveResult bad = res;
    for (const auto& [key, var] : m.start_var[0]) bad.values[var] = 1.0;
    CHECK_THROWS_AS(extract_m1_solution(m, bad, in.sc, in.cat), DecodeError);
  }
  SUBCASE("profile length against route length") {
    SolveResult bad = res;
    for (const auto& [key, var] : m.start_var[0]) bad.values[var] = key.first == 1 ? 1.0 : 0.0;
    CHECK_THROWS_AS(extract_m1_solution(m, bad, in.sc, in.cat), DecodeError);
  }
  SUBCASE("a path flow that stalls") {
    SolveResult bad = res;
    for (int var : m.xep_var[0]) bad.values[var] = 0.0;
    CHECK_THROWS_AS(extract_m1_solution(m, bad, in.sc, in.cat), DecodeError);
  }
  SUBCASE("a path flow that loops") {
    SolveResult bad = res;
    for (int var : m.xep_var[0]) bad.values[var] = 0.0;
    bad.values[m.xep_var[0][in.g.eid(0, 1)]] = 1.0;
    bad.values[m.xep_var[0][in.g.eid(1, 4)]] = 1.0;
    bad.values[m.xep_var[0][in.g.eid(4, 1)]] = 1.0;
    CHECK_THROWS_AS(extract_m1_solution(m, bad, in.sc, in.cat), DecodeError);
  }
  SUBCASE("a hop count the path flow cannot carry") {
    SolveResult bad = res;
    bad.values[m.ell_var[0]] += 1.0;
    CHECK_THROWS_AS(extract_m1_solution(m, bad, in.sc, in.cat), DecodeError);
  }
  SUBCASE("a route outside the catalog") {
    SolveResult bad = res;
    for (int var : m.xep_var[0]) bad.values[var] = 0.0;
    for (auto [u, v] : {std::pair<NodeId, NodeId>{0, 1}, {1, 5}, {5, 4}, {4, 8}})
      bad.values[m.xep_var[0][in.g.eid(u, v)]] = 1.0;
    bad.values[m.ell_var[0]] = 4.0;
    CHECK_THROWS_AS(extract_m1_solution(m, bad, in.sc, in.cat), DecodeError);
  }
}

TEST_CASE("identical inputs build identical models") {
  ModelOptions opt;
  opt.mu = 1;
  const GridSpec spec = grid3({0, 2});
  const std::vector<Aircraft> fleet = {{"a1", 0, 0, 0}, {"l1", 1, 1, 1}};
  Inst a = make(spec, medium_light(), fleet, opt, 8);
  Inst b = make(spec, medium_light(), fleet, opt, 8);
  CHECK(lp_text(build_m1(a.g, a.turns, a.sc).mip) == lp_text(build_m1(b.g, b.turns, b.sc).mip));
}

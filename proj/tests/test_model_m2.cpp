#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "atp/model_m2.hpp"
#include "atp/validator.hpp"

using namespace atp;

namespace {

const double kShort = 2.0 * std::sqrt(2.0);  // [0,4,8] on a unit 3x3 grid
const double kLong = 2.0 + std::sqrt(2.0);   // [0,1,5,8] and [0,3,7,8]

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

Solution run(const Inst& in, double time_limit = 60.0) {
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

int rows_tagged(const MipModel& mip, const std::string& tag) {
  int n = 0;
  for (const MipRow& r : mip.rows) n += r.tag == tag;
  return n;
}

std::string lp_text(const MipModel& mip) {
  std::ostringstream out;
  mip.write_lp(out);
  return out.str();
}

}  // namespace

TEST_CASE("a lone aircraft rides the shortest admissible path") {
  // Obstacle on node 3 leaves two routes: [0,1,5,8] and the diagonal [0,4,8].
  ModelOptions opt;
  opt.mu = 0;
  Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
  REQUIRE(in.cat.paths.size() == 2);

  M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
  CHECK(m.uses_tau);
  CHECK(m.mip.vars.size() == in.g.edges.size() + 2 + 2);  // x + rho + tau
  CHECK(m.tau_var[0].size() == 2);

  const auto tags = row_tags(m.mip);
  CHECK(tags.count("m2.indeg"));
  CHECK(tags.count("m2.outdeg"));
  CHECK(tags.count("m2.runway"));
  CHECK(tags.count("m2.onepath"));
  CHECK(tags.count("m2.link"));
  CHECK(tags.count("m2.onetraj"));
  CHECK(tags.count("m2.traj"));
  CHECK(!tags.count("m2.sep.same"));  // a single aircraft needs no separation
  CHECK(!tags.count("m2.sep.diff"));
  CHECK(lp_text(m.mip).find("\\ m2.onepath") != std::string::npos);

  const Solution sol = run(in);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(kShort).epsilon(1e-9));
  CHECK(sol.routes == std::vector<PathId>{in.path({0, 4, 8})});
  REQUIRE(sol.tree.size() == 2);  // a positive tree weight prunes every dangle
  CHECK(sol.tree == std::vector<Edge>{{0, 4}, {4, 8}});
  REQUIRE(sol.schedule.size() == 1);
  CHECK(sol.schedule[0].shift == 0);
  CHECK(sol.schedule[0].times == std::vector<Minute>{0, 1, 2});
  CHECK(sol.avg_deviation == 0.0);
  CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
}

TEST_CASE("objective weights follow beta and the per-entry fleet size") {
  // Entry 1 (node 2) has no traffic: its route costs tree weight only.
  ModelOptions opt;
  opt.mu = 0;
  Inst in = make(grid3({0, 2}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
  REQUIRE(in.cat.by_entry[0].size() == 3);
  REQUIRE(in.cat.by_entry[1].size() == 1);  // only [2,5,8] turns legally

  M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
  const PathId lone = in.path({2, 5, 8});
  const PathId diag = in.path({0, 4, 8});
  CHECK(m.mip.vars[m.rho_var[lone]].obj == doctest::Approx(0.0));
  CHECK(m.mip.vars[m.rho_var[diag]].obj == doctest::Approx(0.9 * kShort).epsilon(1e-12));
  const EdgeId e25 = in.g.eid(2, 5);
  CHECK(m.mip.vars[m.x_var[e25]].obj == doctest::Approx(0.1).epsilon(1e-12));

  // Entry 1 can only end on (5,8), and the runway accepts exactly one
  // final-approach edge, so entry 0 must give up the diagonal and merge at
  // node 5: tree {(0,1),(1,5),(2,5),(5,8)}.
  const Solution sol = run(in);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.1 + std::sqrt(2.0)).epsilon(1e-9));
  CHECK(sol.routes[0] == in.path({0, 1, 5, 8}));
  CHECK(sol.routes[1] == lone);
  CHECK(sol.tree.size() == 4);
  CHECK(sol.schedule.size() == 1);
  CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
}

TEST_CASE("same-entry aircraft a minute apart need entry-time freedom") {
  const std::vector<Aircraft> fleet = {{"a1", 0, 5, 0}, {"a2", 0, 5, 0}};

  SUBCASE("no slack, no plan") {
    ModelOptions opt;
    opt.mu = 0;
    Inst in = make(grid3({0}, {3}), medium_only(), fleet, opt, 15);
    CHECK(run(in).status == SolveStatus::Infeasible);
  }
  SUBCASE("one minute of slack is exactly enough") {
    ModelOptions opt;
    opt.mu = 1;
    Inst in = make(grid3({0}, {3}), medium_only(), fleet, opt, 15);

    M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
    // 25 directed edges, 2 paths, 2 aircraft x 2 paths x 3 shifts
    CHECK(m.mip.vars.size() == 25 + 2 + 12);
    CHECK(row_tags(m.mip).count("m2.sep.same"));

    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    // one route serves both aircraft, so its length is paid once per aircraft
    CHECK(sol.objective == doctest::Approx(1.9 * kShort).epsilon(1e-9));
    // only the shift pair {-1,+1} opens the required 2-minute gap
    CHECK(sol.avg_deviation == doctest::Approx(1.0));
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
}

TEST_CASE("asymmetric wake separation binds in both directions") {
  // M enters at 0, L at 1, one entry: M leading needs 3 minutes, L leading 2.
  const std::vector<Aircraft> fleet = {{"m", 0, 0, 0}, {"l", 0, 1, 1}};

  SUBCASE("mu=1 cannot open either gap") {
    ModelOptions opt;
    opt.mu = 1;
    Inst in = make(grid3({0}, {3}), medium_light(), fleet, opt, 12);
    CHECK(row_tags(build_m2(in.g, in.cat, in.idx, in.sc).mip).count("m2.sep.diff"));
    CHECK(run(in).status == SolveStatus::Infeasible);
  }
  SUBCASE("mu=2 lets the light trail by three") {
    ModelOptions opt;
    opt.mu = 2;
    Inst in = make(grid3({0}, {3}), medium_light(), fleet, opt, 12);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(1.9 * kShort).epsilon(1e-9));
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
}

TEST_CASE("occupancy at the final modelled minute is still separated") {
  // Both routes reach the runway exactly at the horizon; a window anchored
  // any earlier would miss the clash.
  const std::vector<Aircraft> fleet = {{"a1", 0, 2, 0}, {"a2", 1, 2, 0}};

  SUBCASE("full formulation") {
    ModelOptions opt;
    opt.mu = 0;
    Inst in = make(grid3({0, 2}), medium_only(), fleet, opt, 4);
    CHECK(run(in).status == SolveStatus::Infeasible);
  }
  SUBCASE("shared-sigma formulation") {
    ModelOptions opt;
    opt.mu = 0;
    opt.single_category = true;
    Inst in = make(grid3({0, 2}), medium_only(), fleet, opt, 4);
    CHECK(run(in).status == SolveStatus::Infeasible);
  }
  SUBCASE("pinned-entry formulation") {
    ModelOptions opt;
    opt.fixed_entry = true;
    opt.single_category = true;
    Inst in = make(grid3({0, 2}), medium_only(), fleet, opt, 4);
    CHECK(run(in).status == SolveStatus::Infeasible);
  }
  SUBCASE("two minutes of slack resolve it") {
    ModelOptions opt;
    opt.mu = 2;
    Inst in = make(grid3({0, 2}), medium_only(), fleet, opt, 4);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
}

TEST_CASE("horizon clipping trims the trajectory layer") {
  ModelOptions opt;
  opt.mu = 2;
  Inst in = make(grid3({0}), medium_only(), {{"a1", 0, 3, 0}}, opt, 4);
  REQUIRE(in.cat.paths.size() == 3);

  M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
  // 3 paths x 5 shifts = 15 candidates; only [-2] fits the two long routes
  // and [-2,-1] the diagonal, the other 11 land past the horizon.
  CHECK(m.tau_var[0].size() == 4);
  CHECK(in.idx.excluded.size() == 11);

  const Solution sol = run(in);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(kShort).epsilon(1e-9));
  CHECK(sol.schedule[0].shift >= -2);
  CHECK(sol.schedule[0].shift <= -1);
  CHECK(sol.schedule[0].times.back() <= 4);
  CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
}

TEST_CASE("the three formulations agree on small instances") {
  // Same fleet under the full, shared-sigma, and (at pinned entries) path-only
  // builders: statuses and objectives must coincide.
  const std::vector<std::vector<Aircraft>> fleets = {
      {{"a1", 0, 0, 0}, {"a2", 1, 1, 0}},
      {{"a1", 0, 0, 0}, {"a2", 0, 2, 0}, {"a3", 1, 1, 0}},
      {{"a1", 0, 1, 0}, {"a2", 1, 1, 0}, {"a3", 0, 3, 0}},
  };
  for (const auto& fleet : fleets) {
    for (int mu : {0, 1}) {
      ModelOptions full;
      full.mu = mu;
      Inst a = make(grid3({0, 2}), medium_only(), fleet, full, 12);
      const Solution ref = run(a);

      ModelOptions shared = full;
      shared.single_category = true;
      Inst b = make(grid3({0, 2}), medium_only(), fleet, shared, 12);
      const Solution got = run(b);
      CHECK(got.status == ref.status);
      if (ref.status == SolveStatus::Optimal)
        CHECK(got.objective == doctest::Approx(ref.objective).epsilon(1e-9));

      if (mu == 0) {
        ModelOptions pinned = shared;
        pinned.fixed_entry = true;
        Inst c = make(grid3({0, 2}), medium_only(), fleet, pinned, 12);
        const Solution tempo = run(c);
        CHECK(tempo.status == ref.status);
        if (ref.status == SolveStatus::Optimal)
          CHECK(tempo.objective == doctest::Approx(ref.objective).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("pinned entries reduce to a pure path model") {
  ModelOptions opt;
  opt.fixed_entry = true;
  opt.single_category = true;

  SUBCASE("no trajectory columns, conflicts settle on the paths") {
    Inst in = make(grid3({0}, {3}), medium_only(),
                   {{"a1", 0, 5, 0}, {"a2", 0, 7, 0}}, opt, 12);
    M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
    CHECK(!m.uses_tau);
    CHECK(m.mip.vars.size() == 25 + 2);
    CHECK(row_tags(m.mip).count("m2.sep.fixed"));

    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(1.9 * kShort).epsilon(1e-9));
    CHECK(sol.schedule[0].shift == 0);
    CHECK(sol.schedule[1].shift == 0);
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
  SUBCASE("simultaneous arrivals leave no feasible path") {
    Inst in = make(grid3({0}, {3}), medium_only(),
                   {{"a1", 0, 5, 0}, {"a2", 0, 5, 0}}, opt, 12);
    CHECK(run(in).status == SolveStatus::Infeasible);
  }
  SUBCASE("routes the aircraft cannot finish are banned outright") {
    // Horizon 7: [0,1,5,8] lands at 8 and must be fenced off explicitly,
    // since no trajectory row exists to do it.
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 5, 0}}, opt, 7);
    M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
    CHECK(rows_tagged(m.mip, "m2.fit") == 1);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(kShort).epsilon(1e-9));
    CHECK(sol.routes[0] == in.path({0, 4, 8}));
  }
  SUBCASE("a horizon too tight for any route is infeasible") {
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 5, 0}}, opt, 6);
    M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
    CHECK(rows_tagged(m.mip, "m2.fit") == 2);
    CHECK(run(in).status == SolveStatus::Infeasible);
  }
}

TEST_CASE("tree changes against the previous period are budgeted") {
  // Previous period flew the long northern route; switching to the diagonal
  // costs 3 removals + 2 additions = 5 budget units.
  const std::vector<Edge> prev = {{0, 1}, {1, 5}, {5, 8}};
  auto with_budget = [&](int u) {
    ModelOptions opt;
    opt.mu = 0;
    opt.consistency_u = u;
    opt.previous_tree = prev;
    return make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
  };

  SUBCASE("zero budget pins the old tree") {
    Inst in = with_budget(0);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(kLong).epsilon(1e-9));
    CHECK(sol.routes[0] == in.path({0, 1, 5, 8}));
    CHECK(sol.tree == prev);
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
  SUBCASE("a partial budget cannot pay for the switch") {
    for (int u : {1, 4}) {
      Inst in = with_budget(u);
      const Solution sol = run(in);
      REQUIRE(sol.status == SolveStatus::Optimal);
      CHECK(sol.objective == doctest::Approx(kLong).epsilon(1e-9));
    }
  }
  SUBCASE("five changes buy the diagonal") {
    Inst in = with_budget(5);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(kShort).epsilon(1e-9));
    // symmetric difference against the previous tree is exactly the budget
    std::set<std::pair<NodeId, NodeId>> now, old;
    for (const Edge& e : sol.tree) now.insert({e.from, e.to});
    for (const Edge& e : prev) old.insert({e.from, e.to});
    int diff = 0;
    for (const auto& e : now) diff += !old.count(e);
    for (const auto& e : old) diff += !now.count(e);
    CHECK(diff == 5);
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
  SUBCASE("the full edge budget equals the unconstrained model") {
    Inst free = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}},
                     [] {
                       ModelOptions o;
                       o.mu = 0;
                       return o;
                     }(),
                     10);
    Inst in = with_budget(static_cast<int>(free.g.edges.size()));
    CHECK(run(in).objective == doctest::Approx(run(free).objective).epsilon(1e-9));
  }
  SUBCASE("edges outside the grid are rejected") {
    Inst in = with_budget(3);
    M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
    CHECK_THROWS_AS(add_consistency(m, in.g, in.cat, {{0, 8}}, 3), UnknownEdgeError);
    CHECK_THROWS_AS(add_consistency(m, in.g, in.cat, {{4, 0}}, 3), UnknownEdgeError);
  }
  SUBCASE("tag census") {
    Inst in = with_budget(2);
    M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
    add_consistency(m, in.g, in.cat, prev, 2);
    const auto tags = row_tags(m.mip);
    CHECK(tags.count("m2.delta.kept"));
    CHECK(tags.count("m2.delta.new"));
    CHECK(tags.count("m2.delta.budget"));
    CHECK(tags.count("m2.keep.used"));
    CHECK(rows_tagged(m.mip, "m2.delta.kept") == 3);
    CHECK(rows_tagged(m.mip, "m2.delta.budget") == 1);
    CHECK(rows_tagged(m.mip, "m2.keep.used") == 3);
    CHECK(rows_tagged(m.mip, "m2.delta.new") ==
          static_cast<int>(in.g.edges.size()) - 3);
  }
}

TEST_CASE("carried occupancies block nodes and edges") {
  auto base_opts = [] {
    ModelOptions o;
    o.mu = 0;
    return o;
  };

  SUBCASE("an occupied node forces the detour") {
    // Previous-period traffic still holds node 4 at t=1; sigma 2 shadows
    // [1,2] forward and [0,1] backward, killing the diagonal for an
    // aircraft entering at 0.
    ModelOptions opt = base_opts();
    opt.carryover = CarryoverState{{{0, 4, 1}}, {}};
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(kLong).epsilon(1e-9));
    CHECK(sol.routes[0] == in.path({0, 1, 5, 8}));
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
  SUBCASE("a blocked entry leaves nothing to fly") {
    ModelOptions opt = base_opts();
    opt.carryover = CarryoverState{{{0, 0, 0}}, {}};
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    CHECK(run(in).status == SolveStatus::Infeasible);
  }
  SUBCASE("an in-flight diagonal blocks its crossing diagonal") {
    // (5,7) crosses (4,8): while the old movement is mid-air over [0,2],
    // departures over (4,8) fall exactly in that interval.
    ModelOptions opt = base_opts();
    opt.carryover = CarryoverState{{}, {{5, 7, 0, 2}}};
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(kLong).epsilon(1e-9));
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
  SUBCASE("an in-flight edge blocks the opposite direction") {
    ModelOptions opt = base_opts();
    opt.carryover = CarryoverState{{}, {{8, 4, 1, 1}}};
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(kLong).epsilon(1e-9));
  }
  SUBCASE("the same direction stays reusable") {
    // Old traffic flew (4,8) itself.  An edge record guards the reverse and
    // crossing directions only; following in the same direction is the node
    // records' business, and none is given here.
    ModelOptions opt = base_opts();
    opt.carryover = CarryoverState{{}, {{4, 8, -1, 0}}};
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(kShort).epsilon(1e-9));
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
  SUBCASE("empty state leaves the model untouched") {
    ModelOptions opt = base_opts();
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
    const std::size_t nrows = m.mip.rows.size(), nvars = m.mip.vars.size();
    add_carryover(m, in.g, in.cat, in.idx, in.sc, CarryoverState{});
    CHECK(m.mip.rows.size() == nrows);
    CHECK(m.mip.vars.size() == nvars);
  }
  SUBCASE("pinned-entry models are blocked through their path variables") {
    ModelOptions opt = base_opts();
    opt.fixed_entry = true;
    opt.single_category = true;
    opt.carryover = CarryoverState{{{0, 4, 1}}, {}};
    Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
    const Solution sol = run(in);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(kLong).epsilon(1e-9));
    CHECK(validate_solution(in.sc, in.g, in.turns, in.cat, sol).ok());
  }
}

TEST_CASE("solver assignments are decoded strictly") {
  ModelOptions opt;
  opt.mu = 0;
  Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);
  M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);

  SolveResult res;
  res.status = SolveStatus::Optimal;
  res.values.assign(m.mip.vars.size(), 0.0);

  SUBCASE("a failed solve is passed through untouched") {
    res.status = SolveStatus::Infeasible;
    const Solution sol = extract_solution(m, res, in.sc, in.cat, in.idx);
    CHECK(sol.status == SolveStatus::Infeasible);
    CHECK(sol.tree.empty());
    CHECK(sol.schedule.empty());
  }
  SUBCASE("an entry without a route") {
    CHECK_THROWS_AS(extract_solution(m, res, in.sc, in.cat, in.idx), DecodeError);
  }
  SUBCASE("an entry with two routes") {
    res.values[m.rho_var[0]] = 1.0;
    res.values[m.rho_var[1]] = 1.0;
    CHECK_THROWS_AS(extract_solution(m, res, in.sc, in.cat, in.idx), DecodeError);
  }
  SUBCASE("an aircraft without a trajectory") {
    res.values[m.rho_var[0]] = 1.0;
    CHECK_THROWS_AS(extract_solution(m, res, in.sc, in.cat, in.idx), DecodeError);
  }
  SUBCASE("an aircraft with two trajectories") {
    res.values[m.rho_var[0]] = 1.0;
    for (auto& [key, var] : m.tau_var[0]) res.values[var] = 1.0;
    CHECK_THROWS_AS(extract_solution(m, res, in.sc, in.cat, in.idx), DecodeError);
  }
  SUBCASE("a value vector of the wrong width") {
    res.values.pop_back();
    CHECK_THROWS_AS(extract_solution(m, res, in.sc, in.cat, in.idx), DecodeError);
  }
}

TEST_CASE("identical inputs build identical models") {
  ModelOptions opt;
  opt.mu = 1;
  const std::vector<Aircraft> fleet = {{"a1", 0, 5, 0}, {"a2", 0, 5, 0}};
  Inst a = make(grid3({0}, {3}), medium_only(), fleet, opt, 15);
  Inst b = make(grid3({0}, {3}), medium_only(), fleet, opt, 15);
  M2Model ma = build_m2(a.g, a.cat, a.idx, a.sc);
  M2Model mb = build_m2(b.g, b.cat, b.idx, b.sc);
  CHECK(lp_text(ma.mip) == lp_text(mb.mip));

  add_consistency(ma, a.g, a.cat, {{0, 1}, {1, 5}, {5, 8}}, 2);
  add_consistency(mb, b.g, b.cat, {{0, 1}, {1, 5}, {5, 8}}, 2);
  const CarryoverState carry{{{0, 4, 1}}, {{5, 7, 0, 2}}};
  add_carryover(ma, a.g, a.cat, a.idx, a.sc, carry);
  add_carryover(mb, b.g, b.cat, b.idx, b.sc, carry);
  CHECK(lp_text(ma.mip) == lp_text(mb.mip));
}

TEST_CASE("model inputs must belong together") {
  ModelOptions opt;
  opt.mu = 2;
  Inst in = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10);

  SUBCASE("index built with a different mu") {
    OccupancyIndex other = build_occupancy_index(in.cat, in.sc.aircraft, in.sc.separation,
                                                 in.sc.profiles, 1, in.sc.horizon);
    CHECK_THROWS_AS(build_m2(in.g, in.cat, other, in.sc), IndexMismatchError);
  }
  SUBCASE("index built with a different horizon") {
    OccupancyIndex other = build_occupancy_index(in.cat, in.sc.aircraft, in.sc.separation,
                                                 in.sc.profiles, 2, 11);
    CHECK_THROWS_AS(build_m2(in.g, in.cat, other, in.sc), IndexMismatchError);
  }
  SUBCASE("index built for a different fleet") {
    std::vector<Aircraft> more = in.sc.aircraft;
    more.push_back({"a2", 0, 3, 0});
    OccupancyIndex other = build_occupancy_index(in.cat, more, in.sc.separation,
                                                 in.sc.profiles, 2, in.sc.horizon);
    CHECK_THROWS_AS(build_m2(in.g, in.cat, other, in.sc), IndexMismatchError);
  }
  SUBCASE("catalog from a different grid") {
    Inst full = make(grid3({0}), medium_only(), in.sc.aircraft, opt, 10);
    CHECK_THROWS_AS(build_m2(in.g, full.cat, in.idx, in.sc), IndexMismatchError);
  }
  SUBCASE("an entry with no admissible path") {
    Inst bad = make(grid3({0}, {3}), medium_only(), {{"a1", 0, 0, 0}}, opt, 10, 2);
    REQUIRE(bad.cat.by_entry[0].empty());
    CHECK_THROWS_AS(build_m2(bad.g, bad.cat, bad.idx, bad.sc), EmptyCatalogError);
  }
  SUBCASE("the shared-sigma flag needs a uniform matrix") {
    ModelOptions shared = opt;
    shared.single_category = true;
    Inst bad = make(grid3({0}, {3}), medium_light(), {{"a1", 0, 0, 0}}, shared, 10);
    CHECK_THROWS_AS(build_m2(bad.g, bad.cat, bad.idx, bad.sc), InvalidScenarioError);
  }
}

TEST_CASE("every optional block carries its tag family") {
  ModelOptions opt;
  opt.mu = 1;
  opt.consistency_u = 3;
  opt.previous_tree = {{2, 5}, {5, 8}};
  opt.carryover = CarryoverState{
      {{0, 4, 2}},
      {{5, 7, 2, 3}, {7, 5, 2, 3}, {8, 5, 1, 3}},
  };
  Inst in = make(grid3({0, 2}), medium_only(),
                 {{"a1", 0, 1, 0}, {"a2", 1, 1, 0}}, opt, 12);
  M2Model m = build_m2(in.g, in.cat, in.idx, in.sc);
  add_consistency(m, in.g, in.cat, in.sc.options.previous_tree, 3);
  add_carryover(m, in.g, in.cat, in.idx, in.sc, *in.sc.options.carryover);

  const std::set<std::string> expect = {
      "m2.indeg",        "m2.outdeg",          "m2.runway",
      "m2.cross.int",    "m2.cross.a",         "m2.cross.b",
      "m2.onepath",      "m2.link",            "m2.onetraj",
      "m2.traj",         "m2.sep.same",        "m2.delta.kept",
      "m2.delta.new",    "m2.delta.budget",    "m2.keep.used",
      "m2.carry.node.fwd", "m2.carry.node.bwd", "m2.carry.rev",
      "m2.carry.cross.fwd", "m2.carry.cross.bwd",
  };
  CHECK(row_tags(m.mip) == expect);
}

// Command-line front end: paths, solve, chain, validate, render.
//
// Exit codes: 0 success, 1 usage or internal error, 2 validation
// violations, 3 infeasible, 4 chain stopped early.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "atp/model_m2.hpp"
#include "atp/scenario_io.hpp"
#include "atp/svg.hpp"
#include "atp/validator.hpp"

namespace fs = std::filesystem;
using namespace atp;

namespace {

constexpr int kExitViolations = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitChainBreak = 4;

struct Overrides {
  std::optional<int> mu, lambda, consistency_u;
  std::optional<double> beta, gamma;
  bool single_category = false;
  bool fixed_entry = false;
  std::string previous_tree;   // solution file whose tree to keep close to
  std::string carryover_from;  // solution file to carry occupancies from
  std::string boundary;        // hh:mm carryover boundary, default the origin
  std::string backend = "highs";
  double time_limit = 3600.0;
  std::string dump_model;
};

void add_override_flags(CLI::App& cmd, Overrides& ov) {
  cmd.add_option("--mu", ov.mu, "entry window half-width in minutes");
  cmd.add_option("--lambda", ov.lambda, "path length budget in nodes");
  cmd.add_option("--beta", ov.beta, "tree length weight in the objective");
  cmd.add_option("--gamma", ov.gamma, "minimum interior turn angle in degrees");
  cmd.add_flag("--single-category", ov.single_category, "collapse separation to one category");
  cmd.add_flag("--fixed-entry", ov.fixed_entry, "pin entries to the planned times");
  cmd.add_option("--consistency-u", ov.consistency_u, "edge budget against the previous tree");
  cmd.add_option("--previous-tree", ov.previous_tree,
                 "solution file providing the tree to stay close to");
  cmd.add_option("--carryover-from", ov.carryover_from,
                 "solution file whose airborne aircraft block this period");
  cmd.add_option("--boundary", ov.boundary, "carryover boundary hh:mm (default: the origin)");
  cmd.add_option("--backend", ov.backend, "MIP backend name")->capture_default_str();
  cmd.add_option("--time-limit", ov.time_limit, "solver budget in seconds")
      ->capture_default_str();
  cmd.add_option("--dump-model", ov.dump_model, "write the model in LP format before solving");
}

void apply(const Overrides& ov, Scenario& sc) {
  if (ov.mu) sc.options.mu = *ov.mu;
  if (ov.lambda) sc.lambda = *ov.lambda;
  if (ov.beta) sc.options.beta = *ov.beta;
  if (ov.gamma) sc.gamma_deg = *ov.gamma;
  if (ov.single_category) sc.options.single_category = true;
  if (ov.fixed_entry) sc.options.fixed_entry = true;
  if (ov.consistency_u) sc.options.consistency_u = *ov.consistency_u;
  if (!ov.previous_tree.empty()) {
    if (!sc.options.consistency_u)
      throw InvalidScenarioError("--previous-tree needs --consistency-u (or one in the file)");
    sc.options.previous_tree = load_solution(ov.previous_tree).solution.tree;
  }
  if (!ov.carryover_from.empty()) {
    const SolutionRecord prev = load_solution(ov.carryover_from);
    const Minute boundary = ov.boundary.empty() ? sc.origin : parse_hhmm(ov.boundary);
    sc.options.carryover = extract_carryover(prev, boundary, sc.separation);
  }
  sc.check();
}

SolveParams params_of(const Overrides& ov) {
  SolveParams p;
  p.time_limit_seconds = ov.time_limit;
  if (!ov.dump_model.empty()) p.dump_path = ov.dump_model;
  return p;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

std::string summary_line(const Scenario& sc, const Solution& sol) {
  std::string line = sc.name + ": " + status_text(sol.status);
  if (sol.status == SolveStatus::Optimal || sol.status == SolveStatus::Feasible) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  objective %.6f  avg_deviation %.3f  (%.2fs)",
                  sol.objective, sol.avg_deviation, sol.runtime_seconds);
    line += buf;
  }
  return line;
}

int run_solve(const std::string& scenario_path, const Overrides& ov, const std::string& out,
              const std::string& svg_out, const std::string& previous_svg) {
  Scenario sc = load_scenario(scenario_path);
  apply(ov, sc);
  const auto backend = make_backend(ov.backend);
  const PeriodResult res = run_period(sc, *backend, params_of(ov));
  std::cout << summary_line(sc, res.solution) << "\n";
  for (const auto& v : res.report.violations) std::cout << "  violation: " << v.family << ": " << v.detail << "\n";
  if (!out.empty()) write_file(out, emit_solution(res.record));
  if (!svg_out.empty()) {
    SvgOptions opts;
    opts.entry_names = sc.entry_names;
    opts.node_labels = res.record.merge_labels;
    if (!previous_svg.empty()) opts.previous_tree = load_solution(previous_svg).solution.tree;
    else opts.previous_tree = sc.options.previous_tree;
    write_file(svg_out, emit_svg(build_grid(sc.grid), res.solution, opts));
  }
  if (!res.report.ok()) return kExitViolations;
  if (res.solution.status == SolveStatus::Infeasible) return kExitInfeasible;
  if (res.solution.status == SolveStatus::TimeLimit || res.solution.status == SolveStatus::Error)
    return 1;
  return 0;
}

int run_chain_cmd(const std::vector<std::string>& scenario_paths, const std::string& mode_name,
                  const Overrides& ov, const std::string& out_dir) {
  std::vector<Scenario> periods;
  for (const std::string& p : scenario_paths) {
    periods.push_back(load_scenario(p));
    apply(ov, periods.back());
  }
  const ChainMode mode = parse_chain_mode(mode_name);
  if (!out_dir.empty()) fs::create_directories(out_dir);
  const PeriodSink sink = [&](std::size_t k, const PeriodResult& res) {
    std::cout << summary_line(res.scenario, res.solution) << "\n";
    for (const auto& v : res.report.violations)
      std::cout << "  violation: " << v.family << ": " << v.detail << "\n";
    if (!out_dir.empty()) {
      char prefix[8];
      std::snprintf(prefix, sizeof prefix, "%02zu_", k + 1);
      const fs::path file = fs::path(out_dir) / (prefix + res.scenario.name + ".json");
      write_file(file.string(), emit_solution(res.record));
    }
  };
  const auto backend = make_backend(ov.backend);
  try {
    run_chain(periods, mode, *backend, params_of(ov), sink);
  } catch (const ChainBreakError& e) {
    std::cout << e.what() << "\n";
    return kExitChainBreak;
  }
  return 0;
}

int run_paths(const std::string& scenario_path, const Overrides& ov, const std::string& out) {
  Scenario sc = load_scenario(scenario_path);
  if (ov.lambda) sc.lambda = *ov.lambda;
  if (ov.gamma) sc.gamma_deg = *ov.gamma;
  const GridGraph g = build_grid(sc.grid);
  const TurnTable turns = build_turn_table(g, sc.gamma_deg);
  const PathCatalog cat = build_catalog(g, turns, sc.lambda);
  std::cout << sc.name << ": lambda " << sc.lambda << ", gamma " << sc.gamma_deg << "\n";
  for (std::size_t e = 0; e < cat.by_entry.size(); ++e)
    std::cout << "  " << sc.entry_names[e] << ": " << cat.by_entry[e].size() << " paths\n";
  std::cout << "  total: " << cat.paths.size() << "\n";
  if (!out.empty()) {
    std::string text = "{\n  \"scenario\": \"" + sc.name + "\",\n  \"lambda\": " +
                       std::to_string(sc.lambda) + ",\n  \"paths\": [\n";
    for (std::size_t i = 0; i < cat.paths.size(); ++i) {
      text += "    [";
      const auto& nodes = cat.paths[i].nodes;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k) text += ", ";
        text += std::to_string(nodes[k]);
      }
      text += i + 1 < cat.paths.size() ? "],\n" : "]\n";
    }
    text += "  ]\n}\n";
    write_file(out, text);
  }
  return 0;
}

int run_validate(const std::string& scenario_path, const std::string& solution_path,
                 const std::vector<std::string>& table_paths) {
  if (!table_paths.empty()) {
    // published-table mode: join all tables over shared entry/runway keys
    std::vector<LabeledVisit> visits;
    SeparationMatrix sep;
    for (std::size_t i = 0; i < table_paths.size(); ++i) {
      const ScheduleTable table = load_schedule_table(table_paths[i]);
      if (i == 0) sep = table.separation;
      else if (!(table.separation == sep))
        throw InvalidScenarioError("tables use different separation matrices");
      const auto local = table_visits(table, table.name + ".");
      visits.insert(visits.end(), local.begin(), local.end());
      std::printf("%s: %zu rows, avg_deviation %.4f\n", table.name.c_str(), table.rows.size(),
                  table_avg_deviation(table));
    }
    const auto conflicts = check_separation_labeled(visits, sep);
    for (const auto& c : conflicts) std::cout << "  violation: " << c << "\n";
    std::cout << (conflicts.empty() ? "separation clean" : "separation violated") << "\n";
    return conflicts.empty() ? 0 : kExitViolations;
  }

  const Scenario sc = load_scenario(scenario_path);
  const SolutionRecord rec = load_solution(solution_path);
  const GridGraph g = build_grid(sc.grid);
  const TurnTable turns = build_turn_table(g, sc.gamma_deg);
  const PathCatalog cat = build_catalog(g, turns, sc.lambda);
  const ValidationReport report = validate_solution(sc, g, turns, cat, rec.solution);
  for (const auto& v : report.violations) std::cout << "violation: " << v.family << ": " << v.detail << "\n";
  std::cout << (report.ok() ? "valid" : "invalid") << "\n";
  return report.ok() ? 0 : kExitViolations;
}

int run_render(const std::string& scenario_path, const std::string& solution_path,
               const std::string& out, const std::string& previous_path) {
  const Scenario sc = load_scenario(scenario_path);
  const SolutionRecord rec = load_solution(solution_path);
  SvgOptions opts;
  opts.entry_names = sc.entry_names;
  opts.node_labels = rec.merge_labels;
  if (!previous_path.empty()) opts.previous_tree = load_solution(previous_path).solution.tree;
  write_file(out, emit_svg(build_grid(sc.grid), rec.solution, opts));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arrival tree and schedule optimizer"};
  app.require_subcommand(1);

  Overrides ov;
  std::string scenario, out, svg_out, previous, solution, mode = "a", out_dir;
  std::vector<std::string> scenarios, tables;

  CLI::App* paths = app.add_subcommand("paths", "enumerate the admissible paths");
  paths->add_option("--scenario", scenario, "scenario file")->required();
  paths->add_option("--lambda", ov.lambda, "path length budget in nodes");
  paths->add_option("--gamma", ov.gamma, "minimum interior turn angle in degrees");
  paths->add_option("--out", out, "write the node lists as JSON");

  CLI::App* solve = app.add_subcommand("solve", "solve one period");
  solve->add_option("--scenario", scenario, "scenario file")->required();
  solve->add_option("--out", out, "solution file to write");
  solve->add_option("--svg", svg_out, "tree drawing to write");
  solve->add_option("--previous-svg", previous, "solution whose tree to overlay dashed");
  add_override_flags(*solve, ov);

  CLI::App* chain = app.add_subcommand("chain", "solve consecutive periods");
  chain->add_option("--scenario", scenarios, "scenario files in period order")
      ->required()
      ->expected(-1);
  chain->add_option("--mode", mode, "a independent, b carryover, c consistency, d both")
      ->capture_default_str();
  chain->add_option("--out-dir", out_dir, "directory for per-period solution files");
  add_override_flags(*chain, ov);

  CLI::App* validate = app.add_subcommand("validate", "check a solution or schedule tables");
  validate->add_option("--scenario", scenario, "scenario file");
  validate->add_option("--solution", solution, "solution file to check");
  validate->add_option("--table", tables, "schedule table(s) to check jointly");

  CLI::App* render = app.add_subcommand("render", "draw a solved tree as SVG");
  render->add_option("--scenario", scenario, "scenario file")->required();
  render->add_option("--solution", solution, "solution file")->required();
  render->add_option("--out", out, "SVG file to write")->required();
  render->add_option("--previous", previous, "solution whose tree to overlay dashed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (paths->parsed()) return run_paths(scenario, ov, out);
    if (solve->parsed()) return run_solve(scenario, ov, out, svg_out, previous);
    if (chain->parsed()) return run_chain_cmd(scenarios, mode, ov, out_dir);
    if (validate->parsed()) {
      if (tables.empty() && (scenario.empty() || solution.empty())) {
        std::cerr << "validate needs --scenario with --solution, or --table files\n";
        return 1;
      }
      return run_validate(scenario, solution, tables);
    }
    if (render->parsed()) return run_render(scenario, solution, out, previous);
  } catch (const StageError& e) {
    std::cerr << "error in stage '" << e.stage() << "': " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

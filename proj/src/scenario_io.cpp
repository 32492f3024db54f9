#include "atp/scenario_io.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include "json.hpp"

#include "atp/grid.hpp"
#include "atp/model_m2.hpp"
#include "atp/trajectories.hpp"

namespace atp {

const char* status_text(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "---";  // the published tables mark these rows ---
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::Error: break;
  }
  return "error";
}

namespace {

using ojson = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_of(const std::string& source) {
  const std::string s = std::filesystem::path(source).stem().string();
  return s.empty() ? "scenario" : s;
}

ojson parse_json(const std::string& text, const std::string& source) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min(text.size(), e.byte);
    const std::size_t line = 1 + static_cast<std::size_t>(
        std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseError(source + ":" + std::to_string(line) + ": " + e.what());
  }
}

// A JSON node plus where it sits, so every complaint names the field. Any
// object may carry a free-form "comment" member; it is never interpreted.
struct Field {
  const ojson* node;
  std::string source;
  std::string path;

  const ojson& j() const { return *node; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source + ": " + (path.empty() ? std::string("document") : path) + ": " + what);
  }

  Field sub(const std::string& key) const {
    if (!j().is_object()) fail("expected an object");
    auto it = j().find(key);
    if (it == j().end() || it->is_null()) fail("missing field '" + key + "'");
    return {&*it, source, path.empty() ? key : path + "." + key};
  }

  std::optional<Field> maybe(const std::string& key) const {
    if (!j().is_object()) fail("expected an object");
    auto it = j().find(key);
    if (it == j().end() || it->is_null()) return std::nullopt;
    return Field{&*it, source, path.empty() ? key : path + "." + key};
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    if (!j().is_object()) fail("expected an object");
    for (const auto& item : j().items()) {
      const std::string& k = item.key();
      if (k == "comment") continue;
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail("unknown field '" + k + "'");
    }
  }

  std::size_t size() const {
    if (!j().is_array()) fail("expected an array");
    return j().size();
  }

  Field at(std::size_t i) const {
    return {&j()[i], source, path + "[" + std::to_string(i) + "]"};
  }

  std::string str() const {
    if (!j().is_string()) fail("expected a string");
    return j().get<std::string>();
  }

  bool boolean() const {
    if (!j().is_boolean()) fail("expected a boolean");
    return j().get<bool>();
  }

  int integer() const {
    if (!j().is_number_integer()) fail("expected an integer");
    return j().get<int>();
  }

  double number() const {
    if (!j().is_number()) fail("expected a number");
    return j().get<double>();
  }

  Minute time() const {
    const std::string s = str();
    try {
      return parse_hhmm(s);
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }
};

NodeId rc_node(const Field& f, int rows, int cols) {
  if (!f.j().is_array() || f.j().size() != 2) f.fail("expected [row, col]");
  const int r = f.at(0).integer();
  const int c = f.at(1).integer();
  if (r < 0 || r >= rows || c < 0 || c >= cols)
    f.fail("[" + std::to_string(r) + ", " + std::to_string(c) + "] is off the grid");
  return static_cast<NodeId>(r * cols + c);
}

Edge rc_edge(const Field& f, int rows, int cols) {
  if (!f.j().is_array() || f.j().size() != 2) f.fail("expected [[row, col], [row, col]]");
  return {rc_node(f.at(0), rows, cols), rc_node(f.at(1), rows, cols)};
}

ojson rc_json(NodeId n, int cols) { return ojson::array({n / cols, n % cols}); }

ojson edge_json(const Edge& e, int cols) {
  return ojson::array({rc_json(e.from, cols), rc_json(e.to, cols)});
}

SolveStatus status_from(const Field& f) {
  const std::string s = f.str();
  if (s == "optimal") return SolveStatus::Optimal;
  if (s == "feasible") return SolveStatus::Feasible;
  if (s == "---") return SolveStatus::Infeasible;
  if (s == "time-limit") return SolveStatus::TimeLimit;
  if (s == "error") return SolveStatus::Error;
  f.fail("unknown status '" + s + "'");
}

SeparationMatrix parse_separation(const Field& f) {
  f.allow({"categories", "sigma"});
  SeparationMatrix sep;
  const Field cats = f.sub("categories");
  for (std::size_t i = 0; i < cats.size(); ++i) sep.categories.push_back(cats.at(i).str());
  const Field sigma = f.sub("sigma");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Field row = sigma.at(i);
    std::vector<int> vals;
    for (std::size_t k = 0; k < row.size(); ++k) vals.push_back(row.at(k).integer());
    sep.sigma.push_back(std::move(vals));
  }
  try {
    sep.check();
  } catch (const Error& e) {
    f.fail(e.what());
  }
  return sep;
}

ojson separation_json(const SeparationMatrix& sep) {
  ojson out = ojson::object();
  out["categories"] = sep.categories;
  out["sigma"] = sep.sigma;
  return out;
}

ProfileStore parse_profile_rows(const Field& rows) {
  ProfileStore store;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Field row = rows.at(i);
    row.allow({"key", "hops", "u"});
    const std::string key = row.sub("key").str();
    const int hops = row.sub("hops").integer();
    const Field uf = row.sub("u");
    std::vector<int> u;
    for (std::size_t k = 0; k < uf.size(); ++k) u.push_back(uf.at(k).integer());
    try {
      store.add(key, hops, std::move(u));
    } catch (const Error& e) {
      row.fail(e.what());
    }
  }
  return store;
}

SyntheticProfileSpec::Category parse_synthetic_category(const Field& f) {
  f.allow({"name", "base", "tail_fraction", "tail_add", "final_add"});
  SyntheticProfileSpec::Category cat;
  cat.name = f.sub("name").str();
  if (auto v = f.maybe("base")) cat.base = v->integer();
  if (auto v = f.maybe("tail_fraction")) cat.tail_fraction = v->number();
  if (auto v = f.maybe("tail_add")) cat.tail_add = v->integer();
  if (auto v = f.maybe("final_add")) cat.final_add = v->integer();
  return cat;
}

// The three accepted profile sources: a file reference, inline rows, or a
// synthetic generator block. Routes have at most lambda nodes, hence the
// default hop range 1..lambda-1.
ProfileStore resolve_profiles(const std::optional<Field>& f, const Scenario& sc,
                              const std::string& base_dir) {
  const int max_hops = std::max(1, sc.lambda - 1);
  if (!f) {
    SyntheticProfileSpec spec;
    for (const std::string& name : sc.separation.categories)
      spec.categories.push_back({name, 1, 1.0 / 3.0, 1, 0});
    return synthesize_profiles(spec, 1, max_hops);
  }
  if (f->j().is_string()) {
    const std::string ref = (std::filesystem::path(base_dir) / f->str()).string();
    const ojson doc = parse_json(slurp(ref), ref);
    Field root{&doc, ref, ""};
    if (root.j().is_array()) return parse_profile_rows(root);
    root.allow({"name", "profiles"});
    return parse_profile_rows(root.sub("profiles"));
  }
  if (f->j().is_array()) return parse_profile_rows(*f);
  f->allow({"synthetic", "rows"});
  const Field syn = f->sub("synthetic");
  syn.allow({"min_hops", "max_hops", "categories"});
  SyntheticProfileSpec spec;
  const Field cats = syn.sub("categories");
  for (std::size_t i = 0; i < cats.size(); ++i)
    spec.categories.push_back(parse_synthetic_category(cats.at(i)));
  const int lo = syn.maybe("min_hops") ? syn.sub("min_hops").integer() : 1;
  const int hi = syn.maybe("max_hops") ? syn.sub("max_hops").integer() : max_hops;
  if (lo < 1 || hi < lo) syn.fail("hop range must satisfy 1 <= min_hops <= max_hops");
  ProfileStore store;
  try {
    store = synthesize_profiles(spec, lo, hi);
  } catch (const Error& e) {
    syn.fail(e.what());
  }
  // Explicit rows layered on top let one aircraft or one hop count deviate
  // from the generated category profiles.
  if (auto rows = f->maybe("rows")) {
    ProfileStore extra = parse_profile_rows(*rows);
    for (auto& [key, u] : extra.table) store.table[key] = std::move(u);
  }
  return store;
}

}  // namespace

Minute parse_hhmm(const std::string& text) {
  const auto colon = text.find(':');
  const bool shape = colon != std::string::npos && colon >= 1 && colon <= 2 &&
                     text.size() == colon + 3;
  bool digits = shape;
  if (shape)
    for (std::size_t i = 0; i < text.size(); ++i)
      if (i != colon && (text[i] < '0' || text[i] > '9')) digits = false;
  if (!digits) throw ParseError("expected a time as hh:mm, got '" + text + "'");
  const int h = std::stoi(text.substr(0, colon));
  const int m = std::stoi(text.substr(colon + 1));
  if (h > 47 || m > 59) throw ParseError("time '" + text + "' out of range");
  return h * 60 + m;
}

std::string format_hhmm(Minute abs_minutes) {
  if (abs_minutes < 0 || abs_minutes >= 48 * 60)
    throw InvalidScenarioError("cannot format " + std::to_string(abs_minutes) +
                               " minutes as a clock time");
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d:%02d", abs_minutes / 60, abs_minutes % 60);
  return buf;
}

Scenario parse_scenario(const std::string& text, const std::string& source,
                        const std::string& base_dir) {
  const ojson doc = parse_json(text, source);
  Field root{&doc, source, ""};
  root.allow({"name", "grid", "origin", "horizon", "lambda", "gamma_deg", "beta", "mu",
              "single_category", "fixed_entry", "separation", "profiles", "aircraft",
              "consistency_u", "previous_tree", "carryover"});

  Scenario sc;
  sc.name = root.maybe("name") ? root.sub("name").str() : stem_of(source);

  const Field grid = root.sub("grid");
  grid.allow({"rows", "cols", "pixel_side", "entries", "runway", "obstacles"});
  sc.grid.rows = grid.sub("rows").integer();
  sc.grid.cols = grid.sub("cols").integer();
  if (sc.grid.rows < 1 || sc.grid.cols < 1) grid.fail("grid dimensions must be positive");
  if (auto v = grid.maybe("pixel_side")) sc.grid.pixel_side = v->number();
  const Field entries = grid.sub("entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Field e = entries.at(i);
    e.allow({"name", "node"});
    const std::string name = e.sub("name").str();
    if (std::find(sc.entry_names.begin(), sc.entry_names.end(), name) != sc.entry_names.end())
      e.fail("duplicate entry name '" + name + "'");
    sc.entry_names.push_back(name);
    sc.grid.entries.push_back(rc_node(e.sub("node"), sc.grid.rows, sc.grid.cols));
  }
  sc.grid.runway = rc_node(grid.sub("runway"), sc.grid.rows, sc.grid.cols);
  if (auto obs = grid.maybe("obstacles"))
    for (std::size_t i = 0; i < obs->size(); ++i)
      sc.grid.obstacles.push_back(rc_node(obs->at(i), sc.grid.rows, sc.grid.cols));

  sc.origin = root.maybe("origin") ? root.sub("origin").time() : 0;
  if (auto v = root.maybe("lambda")) sc.lambda = v->integer();
  if (auto v = root.maybe("gamma_deg")) sc.gamma_deg = v->number();
  if (auto v = root.maybe("beta")) sc.options.beta = v->number();
  if (auto v = root.maybe("mu")) sc.options.mu = v->integer();
  if (auto v = root.maybe("single_category")) sc.options.single_category = v->boolean();
  if (auto v = root.maybe("fixed_entry")) sc.options.fixed_entry = v->boolean();

  if (auto v = root.maybe("separation")) {
    sc.separation = parse_separation(*v);
  } else {
    sc.separation.categories = {"ALL"};
    sc.separation.sigma = {{2}};
  }

  const Field aircraft = root.sub("aircraft");
  for (std::size_t i = 0; i < aircraft.size(); ++i) {
    const Field row = aircraft.at(i);
    row.allow({"id", "entry", "planned", "category"});
    Aircraft a;
    a.id = row.sub("id").str();
    const std::string entry = row.sub("entry").str();
    a.entry_idx = sc.entry_index(entry);
    if (a.entry_idx < 0)
      throw ReferenceError(source + ": " + row.path + ": unknown entry point '" + entry + "'");
    const Minute planned_abs = row.sub("planned").time();
    if (planned_abs < sc.origin)
      row.fail("planned time " + format_hhmm(planned_abs) + " precedes the origin " +
               format_hhmm(sc.origin));
    a.planned = planned_abs - sc.origin;
    if (auto cat = row.maybe("category")) {
      const std::string name = cat->str();
      a.category = sc.separation.category_index(name);
      if (a.category < 0)
        throw ReferenceError(source + ": " + cat->path + ": unknown category '" + name + "'");
    } else if (sc.separation.count() == 1) {
      a.category = 0;
    } else {
      row.fail("category is required when several categories exist");
    }
    sc.aircraft.push_back(std::move(a));
  }

  if (auto v = root.maybe("horizon")) {
    const Minute h = v->time();
    if (h <= sc.origin) v->fail("horizon must lie after the origin");
    sc.horizon = h - sc.origin;
  } else {
    Minute last = 0;
    for (const Aircraft& a : sc.aircraft) last = std::max(last, a.planned);
    sc.horizon = last + sc.options.mu + 60;
  }

  if (auto v = root.maybe("consistency_u")) sc.options.consistency_u = v->integer();
  if (auto v = root.maybe("previous_tree")) {
    if (v->j().is_string()) {
      const std::string ref = (std::filesystem::path(base_dir) / v->str()).string();
      sc.options.previous_tree = load_solution(ref).solution.tree;
    } else {
      for (std::size_t i = 0; i < v->size(); ++i)
        sc.options.previous_tree.push_back(rc_edge(v->at(i), sc.grid.rows, sc.grid.cols));
    }
    if (!sc.options.consistency_u)
      v->fail("previous_tree without consistency_u would not constrain anything");
  }

  if (auto v = root.maybe("carryover")) {
    if (v->maybe("from_solution")) {
      v->allow({"from_solution", "boundary"});
      const std::string ref =
          (std::filesystem::path(base_dir) / v->sub("from_solution").str()).string();
      const SolutionRecord prev = load_solution(ref);
      if (prev.grid_rows != sc.grid.rows || prev.grid_cols != sc.grid.cols)
        v->fail("carryover source was solved on a " + std::to_string(prev.grid_rows) + "x" +
                std::to_string(prev.grid_cols) + " grid, not " + std::to_string(sc.grid.rows) +
                "x" + std::to_string(sc.grid.cols));
      const Minute boundary = v->maybe("boundary") ? v->sub("boundary").time() : sc.origin;
      sc.options.carryover = extract_carryover(prev, boundary, sc.separation);
    } else {
      v->allow({"nodes", "edges"});
      CarryoverState carry;
      if (auto nodes = v->maybe("nodes")) {
        for (std::size_t i = 0; i < nodes->size(); ++i) {
          const Field n = nodes->at(i);
          n.allow({"category", "node", "t"});
          CarryoverNode cn;
          const std::string name = n.sub("category").str();
          cn.category = sc.separation.category_index(name);
          if (cn.category < 0)
            throw ReferenceError(source + ": " + n.path + ": unknown category '" + name + "'");
          cn.node = rc_node(n.sub("node"), sc.grid.rows, sc.grid.cols);
          cn.t = n.sub("t").time() - sc.origin;
          if (cn.t < 0) n.fail("carryover node time precedes the origin");
          carry.nodes.push_back(cn);
        }
      }
      if (auto edges = v->maybe("edges")) {
        for (std::size_t i = 0; i < edges->size(); ++i) {
          const Field ef = edges->at(i);
          ef.allow({"from", "to", "enter", "exit"});
          CarryoverEdge ce;
          ce.from = rc_node(ef.sub("from"), sc.grid.rows, sc.grid.cols);
          ce.to = rc_node(ef.sub("to"), sc.grid.rows, sc.grid.cols);
          ce.t_from = ef.sub("enter").time() - sc.origin;
          ce.t_to = ef.sub("exit").time() - sc.origin;
          if (ce.t_from > ce.t_to) ef.fail("edge entered after it was left");
          carry.edges.push_back(ce);
        }
      }
      sc.options.carryover = std::move(carry);
    }
  }

  sc.profiles = resolve_profiles(root.maybe("profiles"), sc, base_dir);
  sc.check();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_scenario(slurp(path), path, dir.empty() ? "." : dir);
}

std::string emit_scenario(const Scenario& sc) {
  const int cols = sc.grid.cols;
  ojson out = ojson::object();
  out["name"] = sc.name;
  ojson grid = ojson::object();
  grid["rows"] = sc.grid.rows;
  grid["cols"] = cols;
  grid["pixel_side"] = sc.grid.pixel_side;
  ojson entries = ojson::array();
  for (std::size_t i = 0; i < sc.grid.entries.size(); ++i) {
    ojson e = ojson::object();
    e["name"] = i < sc.entry_names.size() ? sc.entry_names[i] : "E" + std::to_string(i);
    e["node"] = rc_json(sc.grid.entries[i], cols);
    entries.push_back(std::move(e));
  }
  grid["entries"] = std::move(entries);
  grid["runway"] = rc_json(sc.grid.runway, cols);
  if (!sc.grid.obstacles.empty()) {
    ojson obs = ojson::array();
    for (NodeId n : sc.grid.obstacles) obs.push_back(rc_json(n, cols));
    grid["obstacles"] = std::move(obs);
  }
  out["grid"] = std::move(grid);
  out["origin"] = format_hhmm(sc.origin);
  out["horizon"] = format_hhmm(sc.origin + sc.horizon);
  out["lambda"] = sc.lambda;
  out["gamma_deg"] = sc.gamma_deg;
  out["beta"] = sc.options.beta;
  out["mu"] = sc.options.mu;
  out["single_category"] = sc.options.single_category;
  out["fixed_entry"] = sc.options.fixed_entry;
  out["separation"] = separation_json(sc.separation);
  ojson profiles = ojson::array();
  for (const auto& [key, u] : sc.profiles.table) {
    ojson row = ojson::object();
    row["key"] = key.first;
    row["hops"] = key.second;
    row["u"] = u;
    profiles.push_back(std::move(row));
  }
  out["profiles"] = std::move(profiles);
  ojson aircraft = ojson::array();
  for (const Aircraft& a : sc.aircraft) {
    ojson row = ojson::object();
    row["id"] = a.id;
    row["entry"] = sc.entry_names.at(a.entry_idx);
    row["planned"] = format_hhmm(sc.origin + a.planned);
    row["category"] = sc.separation.categories.at(a.category);
    aircraft.push_back(std::move(row));
  }
  out["aircraft"] = std::move(aircraft);
  if (sc.options.consistency_u) out["consistency_u"] = *sc.options.consistency_u;
  if (!sc.options.previous_tree.empty()) {
    ojson tree = ojson::array();
    for (const Edge& e : sc.options.previous_tree) tree.push_back(edge_json(e, cols));
    out["previous_tree"] = std::move(tree);
  }
  if (sc.options.carryover) {
    ojson carry = ojson::object();
    ojson nodes = ojson::array();
    for (const CarryoverNode& cn : sc.options.carryover->nodes) {
      ojson n = ojson::object();
      n["category"] = sc.separation.categories.at(cn.category);
      n["node"] = rc_json(cn.node, cols);
      n["t"] = format_hhmm(sc.origin + cn.t);
      nodes.push_back(std::move(n));
    }
    carry["nodes"] = std::move(nodes);
    ojson edges = ojson::array();
    for (const CarryoverEdge& ce : sc.options.carryover->edges) {
      ojson e = ojson::object();
      e["from"] = rc_json(ce.from, cols);
      e["to"] = rc_json(ce.to, cols);
      e["enter"] = format_hhmm(sc.origin + ce.t_from);
      e["exit"] = format_hhmm(sc.origin + ce.t_to);
      edges.push_back(std::move(e));
    }
    carry["edges"] = std::move(edges);
    out["carryover"] = std::move(carry);
  }
  return out.dump(2) + "\n";
}

std::vector<std::pair<NodeId, std::string>> label_merge_points(const std::vector<Edge>& tree,
                                                               NodeId runway) {
  std::map<NodeId, int> indeg;
  std::map<NodeId, NodeId> next;
  for (const Edge& e : tree) {
    ++indeg[e.to];
    if (next.count(e.from)) return {};  // outdegree two: not a tree, skip labels
    next[e.from] = e.to;
  }
  std::vector<NodeId> merges;
  for (const auto& [node, d] : indeg)
    if (d == 2 && node != runway) merges.push_back(node);
  if (merges.empty() || merges.size() > 3) return {};
  std::vector<std::pair<int, NodeId>> order;  // (-hops to runway, node)
  for (NodeId m : merges) {
    int hops = 0;
    NodeId cur = m;
    while (cur != runway) {
      auto it = next.find(cur);
      if (it == next.end() || ++hops > static_cast<int>(tree.size())) return {};
      cur = it->second;
    }
    order.emplace_back(-hops, m);
  }
  std::sort(order.begin(), order.end());
  std::vector<std::pair<NodeId, std::string>> labels;
  for (std::size_t i = 0; i < order.size(); ++i)
    labels.emplace_back(order[i].second, "M" + std::to_string(i + 1));
  return labels;
}

SolutionRecord make_record(const Scenario& sc, const PathCatalog& cat, const Solution& sol) {
  SolutionRecord rec;
  rec.scenario_name = sc.name;
  rec.origin = sc.origin;
  rec.grid_rows = sc.grid.rows;
  rec.grid_cols = sc.grid.cols;
  rec.solution = sol;
  for (const ScheduleEntry& e : sol.schedule) {
    SolutionRow row;
    row.entry_name = sc.entry_names.at(e.entry_idx);
    const auto ac = std::find_if(sc.aircraft.begin(), sc.aircraft.end(),
                                 [&](const Aircraft& a) { return a.id == e.aircraft; });
    if (ac == sc.aircraft.end())
      throw InvalidScenarioError("schedule names aircraft '" + e.aircraft +
                                 "' that the scenario lacks");
    row.category = sc.separation.categories.at(ac->category);
    row.planned_abs = sc.origin + ac->planned;
    row.nodes = cat.paths.at(e.path).nodes;
    rec.rows.push_back(std::move(row));
  }
  rec.merge_labels = label_merge_points(sol.tree, sc.grid.runway);
  return rec;
}

std::string emit_solution(const SolutionRecord& rec) {
  const int cols = rec.grid_cols;
  const Solution& sol = rec.solution;
  if (rec.rows.size() != sol.schedule.size())
    throw InvalidScenarioError("solution record rows do not match its schedule");
  ojson out = ojson::object();
  out["scenario"] = rec.scenario_name;
  out["origin"] = format_hhmm(rec.origin);
  ojson grid = ojson::object();
  grid["rows"] = rec.grid_rows;
  grid["cols"] = rec.grid_cols;
  out["grid"] = std::move(grid);
  out["status"] = status_text(sol.status);
  out["objective"] = sol.objective;
  out["gap"] = sol.gap;
  out["runtime_seconds"] = sol.runtime_seconds;
  out["avg_deviation"] = sol.avg_deviation;
  ojson tree = ojson::array();
  for (const Edge& e : sol.tree) tree.push_back(edge_json(e, cols));
  out["tree"] = std::move(tree);
  ojson merges = ojson::array();
  for (const auto& [node, label] : rec.merge_labels) {
    ojson m = ojson::object();
    m["label"] = label;
    m["node"] = rc_json(node, cols);
    merges.push_back(std::move(m));
  }
  out["merge_points"] = std::move(merges);
  out["routes"] = sol.routes;
  ojson schedule = ojson::array();
  for (std::size_t i = 0; i < sol.schedule.size(); ++i) {
    const ScheduleEntry& e = sol.schedule[i];
    const SolutionRow& extra = rec.rows[i];
    ojson row = ojson::object();
    row["aircraft"] = e.aircraft;
    row["entry"] = extra.entry_name;
    row["entry_idx"] = e.entry_idx;
    row["category"] = extra.category;
    row["path"] = e.path;
    row["shift"] = e.shift;
    row["planned"] = format_hhmm(extra.planned_abs);
    if (!e.times.empty()) {
      row["scheduled"] = format_hhmm(rec.origin + e.times.front());
      row["runway"] = format_hhmm(rec.origin + e.times.back());
    }
    ojson nodes = ojson::array();
    for (NodeId n : extra.nodes) nodes.push_back(rc_json(n, cols));
    row["nodes"] = std::move(nodes);
    ojson times = ojson::array();
    for (Minute t : e.times) times.push_back(format_hhmm(rec.origin + t));
    row["times"] = std::move(times);
    if (!rec.merge_labels.empty()) {
      ojson mt = ojson::object();
      for (const auto& [node, label] : rec.merge_labels)
        for (std::size_t k = 0; k < extra.nodes.size(); ++k)
          if (extra.nodes[k] == node && k < e.times.size())
            mt[label] = format_hhmm(rec.origin + e.times[k]);
      row["merges"] = std::move(mt);
    }
    schedule.push_back(std::move(row));
  }
  out["schedule"] = std::move(schedule);
  return out.dump(2) + "\n";
}

SolutionRecord parse_solution(const std::string& text, const std::string& source) {
  const ojson doc = parse_json(text, source);
  Field root{&doc, source, ""};
  root.allow({"scenario", "origin", "grid", "status", "objective", "gap", "runtime_seconds",
              "avg_deviation", "tree", "merge_points", "routes", "schedule"});
  SolutionRecord rec;
  rec.scenario_name = root.sub("scenario").str();
  rec.origin = root.sub("origin").time();
  const Field grid = root.sub("grid");
  grid.allow({"rows", "cols"});
  rec.grid_rows = grid.sub("rows").integer();
  rec.grid_cols = grid.sub("cols").integer();
  if (rec.grid_rows < 1 || rec.grid_cols < 1) grid.fail("grid dimensions must be positive");
  Solution& sol = rec.solution;
  sol.status = status_from(root.sub("status"));
  sol.objective = root.sub("objective").number();
  sol.gap = root.sub("gap").number();
  sol.runtime_seconds = root.sub("runtime_seconds").number();
  sol.avg_deviation = root.sub("avg_deviation").number();
  const Field tree = root.sub("tree");
  for (std::size_t i = 0; i < tree.size(); ++i)
    sol.tree.push_back(rc_edge(tree.at(i), rec.grid_rows, rec.grid_cols));
  const Field merges = root.sub("merge_points");
  for (std::size_t i = 0; i < merges.size(); ++i) {
    const Field m = merges.at(i);
    m.allow({"label", "node"});
    rec.merge_labels.emplace_back(rc_node(m.sub("node"), rec.grid_rows, rec.grid_cols),
                                  m.sub("label").str());
  }
  const Field routes = root.sub("routes");
  for (std::size_t i = 0; i < routes.size(); ++i)
    sol.routes.push_back(static_cast<PathId>(routes.at(i).integer()));
  const Field schedule = root.sub("schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const Field row = schedule.at(i);
    row.allow({"aircraft", "entry", "entry_idx", "category", "path", "shift", "planned",
               "scheduled", "runway", "nodes", "times", "merges"});
    ScheduleEntry e;
    SolutionRow extra;
    e.aircraft = row.sub("aircraft").str();
    extra.entry_name = row.sub("entry").str();
    e.entry_idx = row.sub("entry_idx").integer();
    extra.category = row.sub("category").str();
    e.path = static_cast<PathId>(row.sub("path").integer());
    e.shift = row.sub("shift").integer();
    extra.planned_abs = row.sub("planned").time();
    const Field nodes = row.sub("nodes");
    for (std::size_t k = 0; k < nodes.size(); ++k)
      extra.nodes.push_back(rc_node(nodes.at(k), rec.grid_rows, rec.grid_cols));
    const Field times = row.sub("times");
    for (std::size_t k = 0; k < times.size(); ++k)
      e.times.push_back(times.at(k).time() - rec.origin);
    if (extra.nodes.size() != e.times.size()) row.fail("nodes and times differ in length");
    sol.schedule.push_back(std::move(e));
    rec.rows.push_back(std::move(extra));
  }
  return rec;
}

SolutionRecord load_solution(const std::string& path) { return parse_solution(slurp(path), path); }

ScheduleTable parse_schedule_table(const std::string& text, const std::string& source) {
  const ojson doc = parse_json(text, source);
  Field root{&doc, source, ""};
  root.allow({"name", "separation", "rows"});
  ScheduleTable table;
  table.name = root.maybe("name") ? root.sub("name").str() : stem_of(source);
  table.separation = parse_separation(root.sub("separation"));
  const Field rows = root.sub("rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Field rf = rows.at(i);
    rf.allow({"entry", "aircraft", "category", "planned", "scheduled", "fixes"});
    ScheduleRow row;
    row.entry = rf.sub("entry").str();
    row.aircraft = rf.sub("aircraft").str();
    row.category = rf.sub("category").str();
    if (table.separation.category_index(row.category) < 0)
      throw ReferenceError(source + ": " + rf.path + ": unknown category '" + row.category + "'");
    row.planned = rf.sub("planned").time();
    row.scheduled = rf.sub("scheduled").time();
    const Field fixes = rf.sub("fixes");
    for (std::size_t k = 0; k < fixes.size(); ++k) {
      const Field fx = fixes.at(k);
      if (!fx.j().is_array() || fx.j().size() != 2) fx.fail("expected [label, hh:mm]");
      const std::string label = fx.at(0).str();
      if (label.empty()) fx.fail("fix label must not be empty");
      row.fixes.emplace_back(label, fx.at(1).time());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ScheduleTable load_schedule_table(const std::string& path) {
  return parse_schedule_table(slurp(path), path);
}

std::vector<LabeledVisit> table_visits(const ScheduleTable& table, const std::string& local_prefix,
                                       const std::vector<std::string>& shared) {
  std::vector<LabeledVisit> visits;
  for (const ScheduleRow& row : table.rows) {
    visits.push_back({row.aircraft, row.category, row.entry, row.scheduled});
    for (const auto& [label, t] : row.fixes) {
      const bool keep = std::find(shared.begin(), shared.end(), label) != shared.end();
      visits.push_back({row.aircraft, row.category, keep ? label : local_prefix + label, t});
    }
  }
  return visits;
}

double table_avg_deviation(const ScheduleTable& table) {
  std::vector<std::pair<Minute, Minute>> pairs;
  pairs.reserve(table.rows.size());
  for (const ScheduleRow& row : table.rows) pairs.emplace_back(row.planned, row.scheduled);
  return mean_abs_deviation(pairs);
}

namespace {

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    std::throw_with_nested(StageError(name, e.what()));
  }
}

bool has_schedule(SolveStatus s) {
  return s == SolveStatus::Optimal || s == SolveStatus::Feasible;
}

}  // namespace

PeriodResult run_period(const Scenario& sc, MipBackend& backend, const SolveParams& params) {
  PeriodResult out;
  out.scenario = sc;
  stage("scenario", [&] { sc.check(); return 0; });
  const GridGraph g = stage("grid", [&] { return build_grid(sc.grid); });
  const TurnTable turns = stage("turns", [&] { return build_turn_table(g, sc.gamma_deg); });
  const PathCatalog cat = stage("paths", [&] { return build_catalog(g, turns, sc.lambda); });
  const OccupancyIndex idx = stage("index", [&] {
    return build_occupancy_index(cat, sc.aircraft, sc.separation, sc.profiles, effective_mu(sc),
                                 sc.horizon);
  });
  out.solution = stage("solve", [&] { return solve_m2(g, cat, idx, sc, backend, params); });
  if (has_schedule(out.solution.status))
    out.report = stage("validate", [&] { return validate_solution(sc, g, turns, cat, out.solution); });
  out.record = make_record(sc, cat, out.solution);
  return out;
}

ChainMode parse_chain_mode(const std::string& token) {
  if (token == "a") return ChainMode::independent;
  if (token == "b") return ChainMode::carryover;
  if (token == "c") return ChainMode::consistency;
  if (token == "d") return ChainMode::both;
  throw ParseError("unknown chain mode '" + token + "' (use a, b, c or d)");
}

CarryoverState extract_carryover(const SolutionRecord& prev, Minute boundary_abs,
                                 const SeparationMatrix& target_sep) {
  CarryoverState carry;
  for (std::size_t i = 0; i < prev.solution.schedule.size(); ++i) {
    const ScheduleEntry& e = prev.solution.schedule[i];
    const SolutionRow& row = prev.rows.at(i);
    if (e.times.empty()) continue;
    if (prev.origin + e.times.back() < boundary_abs) continue;  // landed before the boundary
    const int cat = target_sep.category_index(row.category);
    if (cat < 0)
      throw ReferenceError("carryover aircraft '" + e.aircraft + "' has category '" +
                           row.category + "' unknown to the target scenario");
    if (row.nodes.size() != e.times.size())
      throw InvalidScenarioError("carryover source row for '" + e.aircraft + "' is inconsistent");
    for (std::size_t k = 0; k < row.nodes.size(); ++k) {
      const Minute t_abs = prev.origin + e.times[k];
      if (t_abs >= boundary_abs)
        carry.nodes.push_back({cat, row.nodes[k], t_abs - boundary_abs});
      if (k + 1 < row.nodes.size()) {
        const Minute leave_abs = prev.origin + e.times[k + 1];
        if (leave_abs >= boundary_abs)
          carry.edges.push_back({row.nodes[k], row.nodes[k + 1], t_abs - boundary_abs,
                                 leave_abs - boundary_abs});
      }
    }
  }
  return carry;
}

std::vector<PeriodResult> run_chain(const std::vector<Scenario>& periods, ChainMode mode,
                                    MipBackend& backend, const SolveParams& params,
                                    const PeriodSink& sink) {
  if (periods.empty()) throw InvalidScenarioError("chain: no periods given");
  for (std::size_t k = 1; k < periods.size(); ++k) {
    if (!(periods[k].grid == periods[0].grid))
      throw InvalidScenarioError("chain: period '" + periods[k].name +
                                 "' uses a different grid than the first period");
    if (!(periods[k].separation == periods[0].separation))
      throw InvalidScenarioError("chain: period '" + periods[k].name +
                                 "' uses a different separation matrix than the first period");
    if (periods[k].origin < periods[k - 1].origin)
      throw InvalidScenarioError("chain: period origins must not decrease");
  }
  std::vector<PeriodResult> results;
  for (std::size_t k = 0; k < periods.size(); ++k) {
    Scenario sc = periods[k];
    if (k > 0) {
      const bool carry = mode == ChainMode::carryover || mode == ChainMode::both;
      const bool consist = mode == ChainMode::consistency || mode == ChainMode::both;
      if (carry)
        sc.options.carryover = extract_carryover(results.back().record, sc.origin, sc.separation);
      else
        sc.options.carryover.reset();
      if (consist) {
        if (!sc.options.consistency_u)
          throw InvalidScenarioError("chain: period '" + sc.name +
                                     "' needs consistency_u for this mode");
        sc.options.previous_tree = results.back().solution.tree;
      } else {
        sc.options.previous_tree.clear();
        sc.options.consistency_u.reset();
      }
    }
    results.push_back(run_period(sc, backend, params));
    if (sink) sink(k, results.back());
    if (!has_schedule(results.back().solution.status))
      throw ChainBreakError("chain stopped: period " + std::to_string(k + 1) + " ('" + sc.name +
                            "') ended " + status_text(results.back().solution.status));
  }
  return results;
}

}  // namespace atp

#include "atp/mip.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace atp {

int MipModel::add_var(std::string var_name, double lo, double hi, bool integer, double obj) {
  if (lo > hi) throw BackendError("variable " + var_name + " has empty bound interval");
  vars.push_back({std::move(var_name), lo, hi, integer, obj});
  return static_cast<int>(vars.size()) - 1;
}

int MipModel::add_binary(std::string var_name, double obj) {
  return add_var(std::move(var_name), 0.0, 1.0, true, obj);
}

int MipModel::add_row(std::string tag, double lo, double hi,
                      std::vector<std::pair<int, double>> terms) {
  std::sort(terms.begin(), terms.end());
  std::vector<std::pair<int, double>> merged;
  merged.reserve(terms.size());
  for (const auto& [idx, coef] : terms) {
    if (idx < 0 || idx >= static_cast<int>(vars.size()))
      throw BackendError("row " + tag + " references unknown variable index");
    if (!merged.empty() && merged.back().first == idx) {
      merged.back().second += coef;
    } else {
      merged.emplace_back(idx, coef);
    }
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
  rows.push_back({std::move(tag), lo, hi, std::move(merged)});
  return static_cast<int>(rows.size()) - 1;
}

int MipModel::add_le(std::string tag, std::vector<std::pair<int, double>> terms, double rhs) {
  return add_row(std::move(tag), -kInf, rhs, std::move(terms));
}

int MipModel::add_ge(std::string tag, std::vector<std::pair<int, double>> terms, double rhs) {
  return add_row(std::move(tag), rhs, kInf, std::move(terms));
}

int MipModel::add_eq(std::string tag, std::vector<std::pair<int, double>> terms, double rhs) {
  return add_row(std::move(tag), rhs, rhs, std::move(terms));
}

double MipModel::objective_value(const std::vector<double>& values) const {
  double obj = 0.0;
  for (size_t i = 0; i < vars.size(); ++i) obj += vars[i].obj * values[i];
  return obj;
}

double MipModel::row_activity(const MipRow& row, const std::vector<double>& values) const {
  double act = 0.0;
  for (const auto& [idx, coef] : row.terms) act += coef * values[idx];
  return act;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_terms(std::ostream& out, const std::vector<std::pair<int, double>>& terms,
                 const std::vector<MipVar>& vars) {
  bool first = true;
  for (const auto& [idx, coef] : terms) {
    if (coef >= 0.0) {
      out << (first ? "" : " + ");
    } else {
      out << (first ? "-" : " - ");
    }
    const double mag = std::fabs(coef);
    if (mag != 1.0) out << num(mag) << ' ';
    out << vars[idx].name;
    first = false;
  }
  if (first) out << "0 " << vars.front().name;
}

}  // namespace

void MipModel::write_lp(std::ostream& out) const {
  if (vars.empty()) throw BackendError("cannot write a model with no variables");
  out << "\\ " << name << "\n";
  out << "Minimize\n obj:";
  bool first = true;
  for (const auto& v : vars) {
    if (v.obj == 0.0) continue;
    out << (v.obj >= 0.0 ? (first ? " " : " + ") : (first ? " -" : " - "));
    out << num(std::fabs(v.obj)) << ' ' << v.name;
    first = false;
  }
  if (first) out << " 0 " << vars.front().name;
  out << "\nSubject To\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    const MipRow& row = rows[r];
    if (!row.tag.empty()) out << "\\ " << row.tag << "\n";
    const std::string base = "c" + std::to_string(r);
    const bool has_lo = row.lo > -kInf;
    const bool has_hi = row.hi < kInf;
    if (has_lo && has_hi && row.lo == row.hi) {
      out << ' ' << base << ": ";
      write_terms(out, row.terms, vars);
      out << " = " << num(row.hi) << "\n";
      continue;
    }
    if (has_hi) {
      out << ' ' << base << (has_lo ? "u" : "") << ": ";
      write_terms(out, row.terms, vars);
      out << " <= " << num(row.hi) << "\n";
    }
    if (has_lo) {
      out << ' ' << base << (has_hi ? "l" : "") << ": ";
      write_terms(out, row.terms, vars);
      out << " >= " << num(row.lo) << "\n";
    }
  }
  out << "Bounds\n";
  for (const auto& v : vars) {
    const bool free_lo = v.lo <= -kInf;
    const bool free_hi = v.hi >= kInf;
    if (free_lo && free_hi) {
      out << ' ' << v.name << " free\n";
    } else if (free_lo) {
      out << " -inf <= " << v.name << " <= " << num(v.hi) << "\n";
    } else if (free_hi) {
      out << ' ' << v.name << " >= " << num(v.lo) << "\n";
    } else {
      out << ' ' << num(v.lo) << " <= " << v.name << " <= " << num(v.hi) << "\n";
    }
  }
  bool any_int = false;
  for (const auto& v : vars) any_int |= v.integer;
  if (any_int) {
    out << "General\n";
    for (const auto& v : vars)
      if (v.integer) out << ' ' << v.name << "\n";
  }
  out << "End\n";
}

void MipModel::write_lp_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw BackendError("cannot open " + path + " for writing");
  write_lp(out);
  if (!out.good()) throw BackendError("write to " + path + " failed");
}

}  // namespace atp

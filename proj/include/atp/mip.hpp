#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "atp/errors.hpp"

namespace atp {

// Bound magnitude treated as "no bound" by the LP writer and the solver
// adapters.
constexpr double kInf = 1e30;

struct MipVar {
  std::string name;
  double lo = 0.0;
  double hi = kInf;
  bool integer = false;
  double obj = 0.0;
};

// One linear constraint, lo <= sum(coef * var) <= hi.  The tag names the
// model equation the row came from; dumps keep it as a comment so a row in
// the LP file can be traced back to its constraint family.
struct MipRow {
  std::string tag;
  double lo = -kInf;
  double hi = kInf;
  std::vector<std::pair<int, double>> terms;
};

class MipModel {
 public:
  std::string name = "model";
  std::vector<MipVar> vars;
  std::vector<MipRow> rows;

  int add_var(std::string var_name, double lo, double hi, bool integer, double obj = 0.0);
  int add_binary(std::string var_name, double obj = 0.0);

  // Terms are canonicalised: sorted by variable index, repeated indices
  // accumulated, zero coefficients dropped.
  int add_row(std::string tag, double lo, double hi, std::vector<std::pair<int, double>> terms);
  int add_le(std::string tag, std::vector<std::pair<int, double>> terms, double rhs);
  int add_ge(std::string tag, std::vector<std::pair<int, double>> terms, double rhs);
  int add_eq(std::string tag, std::vector<std::pair<int, double>> terms, double rhs);

  double objective_value(const std::vector<double>& values) const;
  double row_activity(const MipRow& row, const std::vector<double>& values) const;

  void write_lp(std::ostream& out) const;
  void write_lp_file(const std::string& path) const;
};

}  // namespace atp

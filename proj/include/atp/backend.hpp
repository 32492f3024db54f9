#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "atp/mip.hpp"

namespace atp {

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit, Error };

std::string to_string(SolveStatus s);

struct SolveParams {
  double time_limit_seconds = 3600.0;
  // When set, an LP-format copy of the model (with tag comments) is written
  // here before the solve starts.
  std::optional<std::string> dump_path;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  double gap = 0.0;  // relative gap, nonzero only for Feasible
  std::vector<double> values;
  double runtime_seconds = 0.0;
  std::string message;
};

class MipBackend {
 public:
  virtual ~MipBackend() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve(const MipModel& model, const SolveParams& params) = 0;
};

// Known names: "highs".  Throws BackendError for anything else.
std::unique_ptr<MipBackend> make_backend(const std::string& name);

// Shared post-solve hygiene: checks every integer variable sits within 1e-6
// of an integer (then snaps it) and every row activity violates its bounds by
// at most 1e-4.  Throws NumericalFailure otherwise.
void check_and_snap(const MipModel& model, std::vector<double>& values);

}  // namespace atp

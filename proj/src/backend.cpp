#include "atp/backend.hpp"

#include <chrono>
#include <cmath>

#include "Highs.h"

namespace atp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

void check_and_snap(const MipModel& model, std::vector<double>& values) {
  if (values.size() != model.vars.size())
    throw NumericalFailure("solution length does not match variable count");
  constexpr double kIntTol = 1e-6;
  constexpr double kRowTol = 1e-4;
  for (size_t i = 0; i < model.vars.size(); ++i) {
    const MipVar& v = model.vars[i];
    if (!v.integer) continue;
    const double snapped = std::round(values[i]);
    if (std::fabs(values[i] - snapped) > kIntTol)
      throw NumericalFailure("variable " + v.name + " is fractional: " +
                             std::to_string(values[i]));
    values[i] = snapped;
  }
  for (const MipRow& row : model.rows) {
    const double act = model.row_activity(row, values);
    if (act < row.lo - kRowTol || act > row.hi + kRowTol)
      throw NumericalFailure("row " + row.tag + " violated: activity " + std::to_string(act));
  }
}

namespace {

class HighsBackend final : public MipBackend {
 public:
  std::string name() const override { return "highs"; }

  SolveResult solve(const MipModel& model, const SolveParams& params) override {
    if (model.vars.empty()) throw BackendError("model has no variables");
    if (params.dump_path) model.write_lp_file(*params.dump_path);

    HighsLp lp;
    lp.num_col_ = static_cast<HighsInt>(model.vars.size());
    lp.num_row_ = static_cast<HighsInt>(model.rows.size());
    lp.sense_ = ObjSense::kMinimize;
    lp.offset_ = 0.0;
    lp.col_cost_.reserve(model.vars.size());
    bool any_int = false;
    for (const MipVar& v : model.vars) {
      lp.col_cost_.push_back(v.obj);
      lp.col_lower_.push_back(v.lo <= -kInf ? -kHighsInf : v.lo);
      lp.col_upper_.push_back(v.hi >= kInf ? kHighsInf : v.hi);
      lp.integrality_.push_back(v.integer ? HighsVarType::kInteger : HighsVarType::kContinuous);
      any_int |= v.integer;
    }
    if (!any_int) lp.integrality_.clear();
    lp.a_matrix_.format_ = MatrixFormat::kRowwise;
    lp.a_matrix_.start_.assign(1, 0);
    for (const MipRow& row : model.rows) {
      lp.row_lower_.push_back(row.lo <= -kInf ? -kHighsInf : row.lo);
      lp.row_upper_.push_back(row.hi >= kInf ? kHighsInf : row.hi);
      for (const auto& [idx, coef] : row.terms) {
        lp.a_matrix_.index_.push_back(static_cast<HighsInt>(idx));
        lp.a_matrix_.value_.push_back(coef);
      }
      lp.a_matrix_.start_.push_back(static_cast<HighsInt>(lp.a_matrix_.index_.size()));
    }

    Highs highs;
    highs.setOptionValue("output_flag", false);
    highs.setOptionValue("threads", 1);
    highs.setOptionValue("random_seed", 0);
    highs.setOptionValue("time_limit", params.time_limit_seconds);
    // Exact optima: the oracle comparisons work at 1e-6, so the solver must
    // not stop at its default relative gap.
    highs.setOptionValue("mip_rel_gap", 0.0);
    highs.setOptionValue("mip_abs_gap", 0.0);
    if (highs.passModel(std::move(lp)) != HighsStatus::kOk)
      throw BackendError("engine rejected the model");

    const auto t0 = std::chrono::steady_clock::now();
    const HighsStatus run_status = highs.run();
    const auto t1 = std::chrono::steady_clock::now();

    SolveResult res;
    res.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
    if (run_status == HighsStatus::kError) {
      res.status = SolveStatus::Error;
      res.message = highs.modelStatusToString(highs.getModelStatus());
      return res;
    }

    const HighsModelStatus ms = highs.getModelStatus();
    const bool has_solution =
        highs.getInfo().primal_solution_status == kSolutionStatusFeasible &&
        highs.getSolution().value_valid;
    switch (ms) {
      case HighsModelStatus::kOptimal:
        res.status = SolveStatus::Optimal;
        break;
      case HighsModelStatus::kInfeasible:
        res.status = SolveStatus::Infeasible;
        return res;
      case HighsModelStatus::kTimeLimit:
        res.status = has_solution ? SolveStatus::Feasible : SolveStatus::TimeLimit;
        if (!has_solution) return res;
        break;
      default:
        res.status = SolveStatus::Error;
        res.message = highs.modelStatusToString(ms);
        return res;
    }
    if (!has_solution) {
      res.status = SolveStatus::Error;
      res.message = "engine reported " + highs.modelStatusToString(ms) + " without a solution";
      return res;
    }

    res.values = highs.getSolution().col_value;
    check_and_snap(model, res.values);
    res.objective = model.objective_value(res.values);
    if (res.status == SolveStatus::Feasible) {
      double g = 0.0;
      highs.getInfoValue("mip_gap", g);
      res.gap = g;
    }
    return res;
  }
};

}  // namespace

std::unique_ptr<MipBackend> make_backend(const std::string& name) {
  if (name == "highs") return std::make_unique<HighsBackend>();
  throw BackendError("unknown backend: " + name);
}

}  // namespace atp

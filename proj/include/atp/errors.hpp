#pragma once

#include <stdexcept>
#include <string>

namespace atp {

// Base class for all domain errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ATP_DEFINE_ERROR(NAME)                                 \
  class NAME : public Error {                                  \
  public:                                                      \
    explicit NAME(const std::string& what) : Error(what) {}    \
  }

ATP_DEFINE_ERROR(InvalidGridError);      // bad dimensions or pixel size
ATP_DEFINE_ERROR(BadEntryError);         // entry/runway/obstacle placement conflicts
ATP_DEFINE_ERROR(PathLimitError);        // enumeration exceeded the path cap
ATP_DEFINE_ERROR(MissingProfileError);   // no speed profile for an (aircraft, length)
ATP_DEFINE_ERROR(IndexMismatchError);    // occupancy index lacks a referenced trajectory
ATP_DEFINE_ERROR(M1ScaleError);          // compact model requested beyond its size gate
ATP_DEFINE_ERROR(EnumerationGuardError); // exhaustive search beyond its size gate
ATP_DEFINE_ERROR(NumericalFailure);      // solver returned out-of-tolerance values
ATP_DEFINE_ERROR(InvalidScenarioError);  // malformed scenario/solution file
ATP_DEFINE_ERROR(ParseError);            // file syntax or field errors (message carries file:line / field)
ATP_DEFINE_ERROR(ReferenceError);        // a file names an entry/category/label that does not exist
ATP_DEFINE_ERROR(ChainBreakError);       // a chained period was infeasible
ATP_DEFINE_ERROR(BackendError);          // unknown backend or solver malfunction
ATP_DEFINE_ERROR(EmptyCatalogError);     // an entry point has no admissible path
ATP_DEFINE_ERROR(UnknownEdgeError);      // previous-tree edge absent from the grid
ATP_DEFINE_ERROR(DecodeError);           // solver assignment breaks a selection rule

#undef ATP_DEFINE_ERROR

// Pipeline failure wrapper: names the stage (grid, paths, profiles, index,
// model, solve, validate) that failed. Thrown with std::throw_with_nested, so
// the original error type stays recoverable via std::rethrow_if_nested.
class StageError : public Error {
public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace atp

#pragma once

// The thirteen acceptance checks. Each produces one pass/fail line plus a
// JSON block with the measured values.

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace coulomb::app {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// reported but not counted as a failure (solver-quality diagnostics)
  bool diagnostic = false;
  std::string summary;
  Json details = Json::object();
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// n capped at 100 and smaller grids / chains
  bool quick = false;
  /// empty runs all
  std::vector<int> only;
  /// progress lines as each check finishes, or null
  std::ostream* progress = nullptr;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

std::string format_line(const CriterionResult& r);
bool all_passed(const std::vector<CriterionResult>& rs);
/// timing is left out so the JSON is reproducible
Json to_json(const std::vector<CriterionResult>& rs);

}  // namespace coulomb::app

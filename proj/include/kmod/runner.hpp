#pragma once

#include "kmod/gallery.hpp"
#include "kmod/serialize.hpp"

namespace kmod {

struct CheckResult {
  std::string check;
  bool pass = false;
  json details;
};

struct RunReport {
  json scenario_echo;
  std::uint64_t seed = 0;
  std::vector<CheckResult> results;
  bool pass = false;
  std::string tool_version;
};

// Executes every check named in the scenario. Numerical breakdowns
// (DefectSingular, NoPseudoInverse, NotFredholm, IndexNonzero) propagate to
// the caller; a false `pass` only ever means a property failed its tolerance.
RunReport run_scenario(const Scenario& s);

json run_report_to_json(const RunReport& r);

}  // namespace kmod

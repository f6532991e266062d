#pragma once

#include "kmod/gallery.hpp"
#include "kmod/runner.hpp"

namespace kmod {

struct SuiteInstance {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string note;
  json replay;  // scenario serialization for the failing instance
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<SuiteInstance> instances;
  bool pass = false;
};

const std::vector<std::string>& suite_names();

// Runs one named suite over the gallery plus seeded random instances.
// Throws std::out_of_range for an unknown suite name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

}  // namespace kmod

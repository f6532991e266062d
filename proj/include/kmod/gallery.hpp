#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kmod/serialize.hpp"

namespace kmod {

// Built-in towers with their expected verdicts. The expectations are pinned
// and re-verified by the test suite on every build.
struct GalleryEntry {
  std::string name;
  std::string description;
  Generator generator = Generator::diagonal(Symbol::constant(0.0));
  std::vector<Index> levels;
  Index d = 2;
  bool expect_fredholm = false;
  std::optional<long> expect_index;
  bool unbounded = false;

  OperatorTower tower() const { return OperatorTower(generator, levels, d); }
  json scenario_json() const;
};

const std::vector<GalleryEntry>& builtin_gallery();

// Lookup by name; throws std::out_of_range for unknown names.
const GalleryEntry& gallery_entry(const std::string& name);

}  // namespace kmod

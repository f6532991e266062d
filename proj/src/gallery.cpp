#include "kmod/gallery.hpp"

#include <stdexcept>

namespace kmod {

json GalleryEntry::scenario_json() const {
  json j{{"name", name},
         {"d", d},
         {"levels", levels},
         {"generator", generator_to_json(generator)},
         {"checks", json::array({"fredholm"})},
         {"expect", json::object()}};
  j["expect"]["is_fredholm"] = expect_fredholm;
  if (expect_index) j["expect"]["index"] = *expect_index;
  return j;
}

namespace {

std::vector<GalleryEntry> make_gallery() {
  std::vector<GalleryEntry> g;

  for (int k : {1, 2, 3}) {
    GalleryEntry e;
    e.name = "shift-" + std::to_string(k);
    e.description = "unit-weight shift by " + std::to_string(k) +
                    "; injective with a " + std::to_string(k) + "-dimensional cokernel";
    e.generator = Generator::weighted_shift(k, Symbol::constant(1.0));
    e.levels = {16, 32};
    e.expect_fredholm = true;
    e.expect_index = -k;
    g.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.name = "diagonal-n";
    e.description = "diagonal with symbol n; unbounded, kernel and cokernel "
                    "both the n=0 coordinate";
    e.generator = Generator::diagonal(Symbol::polynomial({0.0, 1.0}));
    e.levels = {16, 32};
    e.expect_fredholm = true;
    e.expect_index = 0;
    e.unbounded = true;
    g.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.name = "diagonal-decay";
    e.description = "diagonal with symbol 1/(n+1); injective dense range that "
                    "is not closed";
    e.generator = Generator::diagonal(Symbol::reciprocal({1.0, 1.0}));
    e.levels = {16, 32, 64};
    e.expect_fredholm = false;
    g.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.name = "finite-rank-perturbed-shift";
    e.description = "unit shift plus a fixed 3x3 corner block; the "
                    "perturbation moves the cokernel but not the index";
    ComplexMatrix block = ComplexMatrix::Zero(3, 3);
    block(0, 2) = 0.5;
    e.generator = Generator::sum({Generator::weighted_shift(1, Symbol::constant(1.0)),
                                  Generator::finite_rank(block)});
    e.levels = {16, 32};
    e.expect_fredholm = true;
    e.expect_index = -1;
    g.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.name = "weighted-shift-n";
    e.description = "shift with weight symbol n; unbounded, transform is the "
                    "shift with weights n/sqrt(1+n^2)";
    e.generator = Generator::weighted_shift(1, Symbol::polynomial({0.0, 1.0}));
    e.levels = {16, 32};
    e.expect_fredholm = true;
    e.expect_index = -1;
    e.unbounded = true;
    g.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.name = "scalar-3";
    e.description = "constant diagonal 3; invertible, transform is 3/sqrt(10)";
    e.generator = Generator::diagonal(Symbol::constant(3.0));
    e.levels = {16, 32};
    e.expect_fredholm = true;
    e.expect_index = 0;
    g.push_back(std::move(e));
  }

  return g;
}

}  // namespace

const std::vector<GalleryEntry>& builtin_gallery() {
  static const std::vector<GalleryEntry> g = make_gallery();
  return g;
}

const GalleryEntry& gallery_entry(const std::string& name) {
  for (const auto& e : builtin_gallery()) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no gallery entry named '" + name + "'");
}

}  // namespace kmod

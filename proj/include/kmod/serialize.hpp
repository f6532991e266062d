#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kmod/fredholm.hpp"

namespace kmod {

using nlohmann::json;

// Raised on any scenario/schema violation; `field` names the offending entry
// (dotted path, e.g. "tolerances.tol_rank").
struct SchemaError : std::runtime_error {
  std::string field;
  SchemaError(std::string field_, const std::string& message)
      : std::runtime_error(field_ + ": " + message), field(std::move(field_)) {}
};

// Matrices serialize as {"rows", "cols", "re": [[..]], "im": [[..]]},
// row-major IEEE doubles.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& field);

json module_vector_to_json(const ModuleVector& x);
ModuleVector module_vector_from_json(const json& j, const std::string& field = "vector");

json compact_element_to_json(const CompactElement& a);
CompactElement compact_element_from_json(const json& j, const std::string& field = "element");

json adjointable_to_json(const AdjointableOp& t);
AdjointableOp adjointable_from_json(const json& j, const std::string& field = "operator");

json generator_to_json(const Generator& g);
Generator generator_from_json(const json& j, const std::string& field = "generator");

struct Tolerances {
  double tol_rank = 1e-8;
  double tol_residual = 1e-10;
};

// One CLI work item: a generator, the levels to instantiate, tolerances and
// the checks to run against it.
struct Scenario {
  std::string name = "scenario";
  Index d = 2;
  std::vector<Index> levels = {16, 32};
  Generator generator = Generator::diagonal(Symbol::constant(0.0));
  json generator_echo;
  Tolerances tolerances;
  std::vector<std::string> checks = {"fredholm"};
  std::optional<bool> expect_fredholm;
  std::optional<long> expect_index;
  std::optional<std::uint64_t> seed;
  std::string direction = "roundtrip";  // used by the transform command

  OperatorTower tower() const { return OperatorTower(generator, levels, d); }
};

Scenario scenario_from_json(const json& j);
json scenario_to_json(const Scenario& s);

json fredholm_report_to_json(const FredholmReport& r);
json regular_report_to_json(const RegularFredholmReport& r);
json lemma42_report_to_json(const Lemma42Report& r);
json transform_result_to_json(const BoundedTransformResult& r);
json decomposition_to_json(const CompactPlusInvertible& r);

}  // namespace kmod

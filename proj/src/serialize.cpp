#include "kmod/serialize.hpp"

#include <cmath>

namespace kmod {

namespace {

json real_part_rows(const ComplexMatrix& m, bool imag) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double require_finite_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw SchemaError(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SchemaError(field, "value must be finite");
  return x;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"re", real_part_rows(m, false)},
              {"im", real_part_rows(m, true)}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) throw SchemaError(field, "expected a matrix object");
  for (const char* key : {"rows", "cols", "re", "im"}) {
    if (!j.contains(key)) throw SchemaError(field + "." + key, "missing");
  }
  const auto rows = j.at("rows");
  const auto cols = j.at("cols");
  if (!rows.is_number_integer() || rows.get<long>() < 1) {
    throw SchemaError(field + ".rows", "expected a positive integer");
  }
  if (!cols.is_number_integer() || cols.get<long>() < 1) {
    throw SchemaError(field + ".cols", "expected a positive integer");
  }
  const Index r = rows.get<Index>();
  const Index c = cols.get<Index>();
  ComplexMatrix m(r, c);
  for (const char* key : {"re", "im"}) {
    const json& part = j.at(key);
    if (!part.is_array() || static_cast<Index>(part.size()) != r) {
      throw SchemaError(field + "." + key, "expected rows x cols nested arrays");
    }
    for (Index i = 0; i < r; ++i) {
      const json& row = part[static_cast<size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != c) {
        throw SchemaError(field + "." + key, "expected rows x cols nested arrays");
      }
      for (Index k = 0; k < c; ++k) {
        const double x =
            require_finite_number(row[static_cast<size_t>(k)], field + "." + key);
        if (key[0] == 'r') {
          m(i, k) = Complex(x, 0.0);
        } else {
          m(i, k) += Complex(0.0, x);
        }
      }
    }
  }
  return m;
}

json module_vector_to_json(const ModuleVector& x) { return matrix_to_json(x.matrix); }

ModuleVector module_vector_from_json(const json& j, const std::string& field) {
  return ModuleVector(matrix_from_json(j, field));
}

json compact_element_to_json(const CompactElement& a) { return matrix_to_json(a.matrix); }

CompactElement compact_element_from_json(const json& j, const std::string& field) {
  ComplexMatrix m = matrix_from_json(j, field);
  if (m.rows() != m.cols()) throw SchemaError(field, "compact element must be square");
  return CompactElement(std::move(m));
}

json adjointable_to_json(const AdjointableOp& t) {
  return json{{"d", t.d}, {"m", t.m}, {"right_mult", matrix_to_json(t.right_mult)}};
}

AdjointableOp adjointable_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) throw SchemaError(field, "expected an operator object");
  for (const char* key : {"d", "m", "right_mult"}) {
    if (!j.contains(key)) throw SchemaError(field + "." + key, "missing");
  }
  if (!j.at("d").is_number_integer() || j.at("d").get<long>() < 1) {
    throw SchemaError(field + ".d", "expected a positive integer");
  }
  ComplexMatrix r = matrix_from_json(j.at("right_mult"), field + ".right_mult");
  if (r.rows() != r.cols()) {
    throw SchemaError(field + ".right_mult", "multiplier must be square");
  }
  if (j.at("m").get<Index>() != r.rows()) {
    throw SchemaError(field + ".m", "does not match right_mult dimensions");
  }
  return AdjointableOp(j.at("d").get<Index>(), std::move(r));
}

namespace {

Symbol symbol_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return Symbol::constant(j.get<double>());
  if (j.is_string()) {
    try {
      return Symbol::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(field, e.what());
    }
  }
  throw SchemaError(field, "expected a weight symbol string or number");
}

std::vector<double> list_from_json(const json& j, const std::string& field) {
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(require_finite_number(j[i], field));
  }
  return out;
}

json symbol_or_list_to_json(const std::optional<Symbol>& sym,
                            const std::optional<std::vector<double>>& list) {
  if (sym) return sym->to_string();
  return json(*list);
}

}  // namespace

json generator_to_json(const Generator& g) {
  switch (g.kind()) {
    case Generator::Kind::WeightedShift:
      return json{{"kind", "weighted_shift"},
                  {"step", g.step()},
                  {"weights", symbol_or_list_to_json(g.symbol(), g.weight_list())}};
    case Generator::Kind::Diagonal:
      return json{{"kind", "diagonal"},
                  {"values", symbol_or_list_to_json(g.symbol(), g.weight_list())}};
    case Generator::Kind::FiniteRank:
      return json{{"kind", "finite_rank"}, {"values", matrix_to_json(g.finite_block())}};
    case Generator::Kind::Sum:
    case Generator::Kind::Product: {
      json terms = json::array();
      for (const auto& t : g.terms()) terms.push_back(generator_to_json(t));
      return json{{"kind", g.kind() == Generator::Kind::Sum ? "sum" : "product"},
                  {"terms", std::move(terms)}};
    }
  }
  return json();
}

Generator generator_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) throw SchemaError(field, "expected a generator object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw SchemaError(field + ".kind", "missing or not a string");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "weighted_shift") {
    if (!j.contains("step") || !j.at("step").is_number_integer()) {
      throw SchemaError(field + ".step", "missing integer step");
    }
    const int step = j.at("step").get<int>();
    if (step == 0) throw SchemaError(field + ".step", "step must be nonzero");
    if (!j.contains("weights")) throw SchemaError(field + ".weights", "missing");
    const json& w = j.at("weights");
    if (w.is_array()) {
      return Generator::weighted_shift(step, list_from_json(w, field + ".weights"));
    }
    return Generator::weighted_shift(step, symbol_from_json(w, field + ".weights"));
  }
  if (kind == "diagonal") {
    const char* key = j.contains("values") ? "values" : "weights";
    if (!j.contains(key)) throw SchemaError(field + ".values", "missing");
    const json& v = j.at(key);
    if (v.is_array()) {
      return Generator::diagonal(list_from_json(v, field + ".values"));
    }
    return Generator::diagonal(symbol_from_json(v, field + ".values"));
  }
  if (kind == "finite_rank") {
    if (!j.contains("values")) throw SchemaError(field + ".values", "missing");
    return Generator::finite_rank(matrix_from_json(j.at("values"), field + ".values"));
  }
  if (kind == "sum" || kind == "product" || kind == "adjoint") {
    if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty()) {
      throw SchemaError(field + ".terms", "expected a nonempty array");
    }
    std::vector<Generator> terms;
    for (size_t i = 0; i < j.at("terms").size(); ++i) {
      terms.push_back(generator_from_json(j.at("terms")[i],
                                          field + ".terms[" + std::to_string(i) + "]"));
    }
    if (kind == "adjoint") {
      if (terms.size() != 1) {
        throw SchemaError(field + ".terms", "adjoint takes exactly one term");
      }
      return terms.front().adjoint();
    }
    return kind == "sum" ? Generator::sum(std::move(terms))
                         : Generator::product(std::move(terms));
  }
  throw SchemaError(field + ".kind", "unknown generator kind '" + kind + "'");
}

namespace {

const std::vector<std::string> kKnownChecks = {"fredholm", "transform", "lemma42",
                                               "psi", "decompose"};

}  // namespace

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("scenario", "expected a JSON object");
  Scenario s;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw SchemaError("name", "expected a string");
    s.name = j.at("name").get<std::string>();
  }
  if (j.contains("d")) {
    if (!j.at("d").is_number_integer() || j.at("d").get<long>() < 1) {
      throw SchemaError("d", "expected a positive integer");
    }
    s.d = j.at("d").get<Index>();
  }
  if (j.contains("levels") && j.contains("m")) {
    throw SchemaError("levels", "give either levels or m, not both");
  }
  if (j.contains("m")) {
    if (!j.at("m").is_number_integer() || j.at("m").get<long>() < 2) {
      throw SchemaError("m", "expected an integer >= 2");
    }
    const Index m = j.at("m").get<Index>();
    s.levels = {m, 2 * m};
  } else if (j.contains("levels")) {
    const json& lv = j.at("levels");
    if (!lv.is_array() || lv.empty()) {
      throw SchemaError("levels", "expected a nonempty array of integers");
    }
    s.levels.clear();
    for (size_t i = 0; i < lv.size(); ++i) {
      if (!lv[i].is_number_integer() || lv[i].get<long>() < 2) {
        throw SchemaError("levels", "levels must be integers >= 2");
      }
      s.levels.push_back(lv[i].get<Index>());
    }
    for (size_t i = 1; i < s.levels.size(); ++i) {
      if (s.levels[i] <= s.levels[i - 1]) {
        throw SchemaError("levels", "levels must be strictly increasing");
      }
    }
  }
  if (!j.contains("generator")) throw SchemaError("generator", "missing");
  s.generator = generator_from_json(j.at("generator"), "generator");
  s.generator_echo = j.at("generator");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw SchemaError("tolerances", "expected an object");
    if (t.contains("tol_rank")) {
      const double v = require_finite_number(t.at("tol_rank"), "tolerances.tol_rank");
      if (v < 0.0) throw SchemaError("tolerances.tol_rank", "must be >= 0");
      s.tolerances.tol_rank = v;
    }
    if (t.contains("tol_residual")) {
      const double v =
          require_finite_number(t.at("tol_residual"), "tolerances.tol_residual");
      if (v <= 0.0) throw SchemaError("tolerances.tol_residual", "must be > 0");
      s.tolerances.tol_residual = v;
    }
  }
  if (j.contains("checks")) {
    const json& c = j.at("checks");
    if (!c.is_array() || c.empty()) {
      throw SchemaError("checks", "expected a nonempty array of check names");
    }
    s.checks.clear();
    for (size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_string()) throw SchemaError("checks", "check names must be strings");
      const std::string name = c[i].get<std::string>();
      bool known = false;
      for (const auto& k : kKnownChecks) known = known || k == name;
      if (!known) throw SchemaError("checks", "unknown check '" + name + "'");
      s.checks.push_back(name);
    }
  }
  const bool needs_two_levels =
      std::any_of(s.checks.begin(), s.checks.end(), [](const std::string& c) {
        return c == "fredholm" || c == "lemma42" || c == "decompose";
      });
  if (needs_two_levels && s.levels.size() < 2) {
    throw SchemaError("levels", "tower checks need at least two levels");
  }
  if (j.contains("expect")) {
    const json& e = j.at("expect");
    if (!e.is_object()) throw SchemaError("expect", "expected an object");
    if (e.contains("is_fredholm")) {
      if (!e.at("is_fredholm").is_boolean()) {
        throw SchemaError("expect.is_fredholm", "expected a boolean");
      }
      s.expect_fredholm = e.at("is_fredholm").get<bool>();
    }
    if (e.contains("index")) {
      if (!e.at("index").is_number_integer()) {
        throw SchemaError("expect.index", "expected an integer");
      }
      s.expect_index = e.at("index").get<long>();
    }
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0) {
      throw SchemaError("seed", "expected a nonnegative integer");
    }
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("direction")) {
    if (!j.at("direction").is_string()) throw SchemaError("direction", "expected a string");
    s.direction = j.at("direction").get<std::string>();
    if (s.direction != "roundtrip" && s.direction != "inverse") {
      throw SchemaError("direction", "expected 'roundtrip' or 'inverse'");
    }
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json out{{"name", s.name},
           {"d", s.d},
           {"levels", s.levels},
           {"generator", s.generator_echo.is_null() ? generator_to_json(s.generator)
                                                    : s.generator_echo},
           {"tolerances",
            {{"tol_rank", s.tolerances.tol_rank},
             {"tol_residual", s.tolerances.tol_residual}}},
           {"checks", s.checks}};
  if (s.expect_fredholm || s.expect_index) {
    json e = json::object();
    if (s.expect_fredholm) e["is_fredholm"] = *s.expect_fredholm;
    if (s.expect_index) e["index"] = *s.expect_index;
    out["expect"] = std::move(e);
  }
  if (s.seed) out["seed"] = *s.seed;
  if (s.direction != "roundtrip") out["direction"] = s.direction;
  return out;
}

namespace {

json level_stats_to_json(const LevelStats& s) {
  return json{{"level", s.level},
              {"ker_dim", s.ker_dim},
              {"coker_dim", s.coker_dim},
              {"sigma_gap", s.sigma_gap},
              {"norm", s.norm}};
}

json finite_or_string(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

}  // namespace

json fredholm_report_to_json(const FredholmReport& r) {
  json per_level = json::array();
  for (const auto& s : r.per_level) {
    json j = level_stats_to_json(s);
    j["sigma_gap"] = finite_or_string(s.sigma_gap);
    per_level.push_back(std::move(j));
  }
  return json{{"is_fredholm", r.is_fredholm},
              {"ker_dim", r.ker_dim},
              {"coker_dim", r.coker_dim},
              {"index", r.is_fredholm ? json(r.index) : json()},
              {"closed_range", r.closed_range},
              {"sigma_gap", finite_or_string(r.sigma_gap)},
              {"levels", r.levels},
              {"stabilized", r.stabilized},
              {"tol_rank", r.tol_rank},
              {"normalized", r.normalized},
              {"path", r.path},
              {"pseudo_inverse",
               {{"left_rank", r.pseudo_inverse.left_rank},
                {"right_rank", r.pseudo_inverse.right_rank},
                {"left_residual", r.pseudo_inverse.left_residual},
                {"right_residual", r.pseudo_inverse.right_residual},
                {"g_norms", r.pseudo_inverse.g_norms},
                {"stable", r.pseudo_inverse.stable}}},
              {"per_level", std::move(per_level)}};
}

json regular_report_to_json(const RegularFredholmReport& r) {
  return json{{"is_fredholm", r.is_fredholm},
              {"index", r.is_fredholm ? json(r.index) : json()},
              {"verdict_agree", r.verdict_agree},
              {"index_agree", r.index_agree},
              {"direct", fredholm_report_to_json(r.direct)},
              {"transform", fredholm_report_to_json(r.transform)}};
}

json lemma42_report_to_json(const Lemma42Report& r) {
  json levels = json::array();
  const auto pair_json = [](const SubspacePairCheck& c) {
    return json{{"dim_a", c.dim_a}, {"dim_b", c.dim_b}, {"residual", c.residual}};
  };
  for (const auto& lvl : r.levels) {
    levels.push_back(json{{"level", lvl.level},
                          {"ran_t_vs_ran_f", pair_json(lvl.ran_t_vs_ran_f)},
                          {"ran_tstar_vs_ran_fstar", pair_json(lvl.ran_tstar_vs_ran_fstar)},
                          {"ker_tstar_vs_ran_t_perp", pair_json(lvl.ker_tstar_vs_ran_t_perp)},
                          {"ker_t_vs_ran_tstar_perp", pair_json(lvl.ker_t_vs_ran_tstar_perp)},
                          {"ker_t_vs_ker_f", pair_json(lvl.ker_t_vs_ker_f)},
                          {"ker_tstar_vs_ker_fstar", pair_json(lvl.ker_tstar_vs_ker_fstar)},
                          {"stable_ker_t", lvl.stable_ker_t},
                          {"stable_ker_tstar", lvl.stable_ker_tstar},
                          {"stable_ker_f", lvl.stable_ker_f},
                          {"stable_ker_fstar", lvl.stable_ker_fstar}});
  }
  return json{{"levels", std::move(levels)},
              {"max_residual", r.max_residual},
              {"dims_stable", r.dims_stable},
              {"dims_match", r.dims_match}};
}

json transform_result_to_json(const BoundedTransformResult& r) {
  json levels = json::array();
  for (const auto& lvl : r.levels) {
    levels.push_back(json{{"level", lvl.level},
                          {"f_norm", lvl.f_norm},
                          {"defect_min_eig", lvl.defect_min_eig},
                          {"q_square_residual", lvl.q_square_residual}});
  }
  return json{{"norm_f", r.norm_f}, {"levels", std::move(levels)}};
}

json decomposition_to_json(const CompactPlusInvertible& r) {
  json levels = json::array();
  for (const auto& lvl : r.levels) {
    levels.push_back(json{{"level", lvl.level},
                          {"v_min_sigma", lvl.v_min_sigma},
                          {"k_rank", lvl.k_rank},
                          {"reconstruction_residual", lvl.reconstruction_residual}});
  }
  return json{{"levels", std::move(levels)}, {"k_rank_stable", r.k_rank_stable}};
}

}  // namespace kmod

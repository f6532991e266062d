#include "kmod/suites.hpp"

#include <algorithm>
#include <cmath>

#include "kmod/random_instances.hpp"

namespace kmod {

namespace {

void finish(SuiteResult& result) {
  result.pass = std::all_of(result.instances.begin(), result.instances.end(),
                            [](const SuiteInstance& i) { return i.pass; });
}

json tower_replay(const std::string& name, const OperatorTower& t) {
  return json{{"name", name},
              {"d", t.dim_h},
              {"levels", t.levels},
              {"generator", generator_to_json(t.generator)},
              {"checks", json::array({"fredholm"})}};
}

SuiteResult suite_psi_isomorphism(std::uint64_t seed) {
  SuiteResult result{"psi-isomorphism", seed, {}, false};
  Rng rng(seed);
  constexpr double tol = 1e-10;
  for (int i = 0; i < 200; ++i) {
    const Index m = 2 + static_cast<Index>(i % 15);  // 2..16
    const Index d = 2 + static_cast<Index>(i % 3);
    const AdjointableOp t = random_adjointable(rng, d, m);
    const AdjointableOp s = random_adjointable(rng, d, m);
    const CompactElement e = (i % 2 == 0) ? minimal_projection(d)
                                          : random_minimal_projection(rng, d);
    const ComplexMatrix pt = psi(t, e);
    const ComplexMatrix ps = psi(s, e);
    const double hom = (psi(compose(t, s), e) - pt * ps).norm() /
                       (1.0 + pt.norm() * ps.norm());
    const double star = (psi(adjoint(t), e) - pt.adjoint()).norm() / (1.0 + pt.norm());
    const double isometry = std::abs(operator_norm(pt) - op_norm(t)) / (1.0 + op_norm(t));
    const AdjointableOp back = psi_inverse(pt, e);
    const double roundtrip =
        (back.right_mult - t.right_mult).norm() / (1.0 + t.right_mult.norm());
    SuiteInstance inst;
    inst.name = "random-op-" + std::to_string(i);
    inst.residual = std::max({hom, star, isometry, roundtrip});
    inst.pass = inst.residual <= tol;
    if (!inst.pass) inst.replay = adjointable_to_json(t);
    result.instances.push_back(std::move(inst));
  }
  finish(result);
  return result;
}

SuiteResult suite_bounded_transform(std::uint64_t seed) {
  SuiteResult result{"bounded-transform", seed, {}, false};
  Rng rng(seed);
  constexpr double tol = 1e-10;
  constexpr double roundtrip_tol = 1e-8;

  std::vector<std::pair<std::string, OperatorTower>> towers;
  for (const auto& e : builtin_gallery()) {
    towers.emplace_back(e.name, e.tower());
  }
  for (int i = 0; i < 100; ++i) {
    towers.emplace_back("random-bounded-" + std::to_string(i),
                        OperatorTower(random_bounded_generator(rng), {16, 32}));
  }

  for (const auto& [name, tower] : towers) {
    const BoundedTransformResult bt = bounded_transform(tower);
    const BoundedTransformResult bt_adj = bounded_transform(adjoint_tower(tower));
    double worst = 0.0;
    bool norm_ok = true;
    for (size_t i = 0; i < bt.levels.size(); ++i) {
      const auto& lvl = bt.levels[i];
      norm_ok = norm_ok && lvl.f_norm <= 1.0 + 1e-12;
      const double adj_res = (bt_adj.levels[i].f - lvl.f.adjoint()).norm() /
                             (1.0 + lvl.f.norm());
      const ComplexMatrix a = tower.generator.square(lvl.level);
      const double rt =
          (inverse_transform_matrix(lvl.f) - a).norm() / (1.0 + a.norm());
      worst = std::max({worst, adj_res, lvl.q_square_residual});
      if (rt > roundtrip_tol) norm_ok = false;
    }
    SuiteInstance inst;
    inst.name = name;
    inst.residual = worst;
    inst.pass = norm_ok && worst <= tol;
    if (!inst.pass) inst.replay = tower_replay(name, tower);
    result.instances.push_back(std::move(inst));
  }
  finish(result);
  return result;
}

SuiteResult suite_lemma42(std::uint64_t seed) {
  SuiteResult result{"lemma42", seed, {}, false};
  constexpr double tol = 1e-10;
  for (const auto& e : builtin_gallery()) {
    const Lemma42Report report = verify_lemma_4_2(e.tower());
    SuiteInstance inst;
    inst.name = e.name;
    inst.residual = report.max_residual;
    inst.pass = report.max_residual <= tol && report.dims_stable && report.dims_match;
    if (!inst.pass) inst.replay = e.scenario_json();
    result.instances.push_back(std::move(inst));
  }
  finish(result);
  return result;
}

SuiteResult suite_atkinson_bounded(std::uint64_t seed) {
  SuiteResult result{"atkinson-bounded", seed, {}, false};
  Rng rng(seed);

  std::vector<std::pair<std::string, OperatorTower>> towers;
  for (const auto& e : builtin_gallery()) {
    if (!e.unbounded) towers.emplace_back(e.name, e.tower());
  }
  for (int i = 0; i < 20; ++i) {
    towers.emplace_back("random-bounded-" + std::to_string(i),
                        OperatorTower(random_bounded_generator(rng), {16, 32}));
  }

  for (const auto& [name, tower] : towers) {
    const FredholmReport report = fredholm_check_bounded(tower);
    SuiteInstance inst;
    inst.name = name;
    inst.pass = report.is_fredholm == report.pseudo_inverse.stable;
    inst.note = report.is_fredholm ? "fredholm" : "not fredholm";
    if (!inst.pass) inst.replay = tower_replay(name, tower);
    result.instances.push_back(std::move(inst));
  }
  finish(result);
  return result;
}

SuiteResult suite_atkinson_regular(std::uint64_t seed) {
  SuiteResult result{"atkinson-regular", seed, {}, false};
  for (const auto& e : builtin_gallery()) {
    const RegularFredholmReport report = fredholm_check_regular(e.tower());
    SuiteInstance inst;
    inst.name = e.name;
    const FredholmReport& headline = e.unbounded ? report.transform : report.direct;
    bool pass = report.verdict_agree;
    pass = pass && headline.is_fredholm == headline.pseudo_inverse.stable;
    pass = pass && report.is_fredholm == e.expect_fredholm;
    if (e.expect_index) {
      pass = pass && report.index_agree && report.is_fredholm &&
             report.index == *e.expect_index;
    }
    inst.pass = pass;
    inst.note = report.is_fredholm
                    ? "fredholm, index " + std::to_string(report.index)
                    : "not fredholm";
    if (!inst.pass) inst.replay = e.scenario_json();
    result.instances.push_back(std::move(inst));
  }
  finish(result);
  return result;
}

SuiteResult suite_index_equality(std::uint64_t seed) {
  SuiteResult result{"index-equality", seed, {}, false};
  for (const auto& e : builtin_gallery()) {
    if (!e.expect_index) continue;
    const RegularFredholmReport report = fredholm_check_regular(e.tower());
    SuiteInstance inst;
    inst.name = e.name;
    inst.pass = report.direct.is_fredholm && report.transform.is_fredholm &&
                report.direct.index == *e.expect_index &&
                report.transform.index == *e.expect_index;
    inst.note = "direct " + std::to_string(report.direct.index) + ", transform " +
                std::to_string(report.transform.index) + ", expected " +
                std::to_string(*e.expect_index);
    if (!inst.pass) inst.replay = e.scenario_json();
    result.instances.push_back(std::move(inst));
  }
  finish(result);
  return result;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "psi-isomorphism",  "atkinson-bounded", "atkinson-regular",
      "bounded-transform", "lemma42",          "index-equality"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "psi-isomorphism") return suite_psi_isomorphism(seed);
  if (name == "atkinson-bounded") return suite_atkinson_bounded(seed);
  if (name == "atkinson-regular") return suite_atkinson_regular(seed);
  if (name == "bounded-transform") return suite_bounded_transform(seed);
  if (name == "lemma42") return suite_lemma42(seed);
  if (name == "index-equality") return suite_index_equality(seed);
  throw std::out_of_range("unknown suite '" + name + "'");
}

}  // namespace kmod

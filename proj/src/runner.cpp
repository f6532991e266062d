#include "kmod/runner.hpp"

#include <algorithm>
#include <cmath>

#include "kmod/random_instances.hpp"
#include "kmod/version.hpp"

namespace kmod {

namespace {

CheckResult check_fredholm(const Scenario& s) {
  CheckResult out;
  out.check = "fredholm";
  AnalysisOptions opt;
  opt.tol_rank = s.tolerances.tol_rank;
  const RegularFredholmReport report = fredholm_check_regular(s.tower(), opt);
  bool pass = report.verdict_agree && report.index_agree;
  if (s.expect_fredholm && report.is_fredholm != *s.expect_fredholm) pass = false;
  if (s.expect_index) {
    if (!report.is_fredholm || report.index != *s.expect_index) pass = false;
  }
  out.pass = pass;
  out.details = regular_report_to_json(report);
  if (s.expect_fredholm) out.details["expected_is_fredholm"] = *s.expect_fredholm;
  if (s.expect_index) out.details["expected_index"] = *s.expect_index;
  return out;
}

CheckResult check_transform(const Scenario& s) {
  CheckResult out;
  out.check = "transform";
  const double tol = s.tolerances.tol_residual;
  const double roundtrip_tol = 100.0 * tol;

  const OperatorTower tower = s.tower();
  const BoundedTransformResult bt = bounded_transform(tower);
  const BoundedTransformResult bt_adj = bounded_transform(adjoint_tower(tower));

  double max_adjoint_residual = 0.0;
  double max_q_residual = 0.0;
  double max_roundtrip = 0.0;
  double max_norm = 0.0;
  json levels = json::array();
  for (size_t i = 0; i < bt.levels.size(); ++i) {
    const auto& lvl = bt.levels[i];
    const double adj_res = (bt_adj.levels[i].f - lvl.f.adjoint()).norm() /
                           (1.0 + lvl.f.norm());
    const ComplexMatrix a = tower.generator.square(lvl.level);
    const ComplexMatrix back = inverse_transform_matrix(lvl.f);
    const double rt = (back - a).norm() / (1.0 + a.norm());
    max_adjoint_residual = std::max(max_adjoint_residual, adj_res);
    max_q_residual = std::max(max_q_residual, lvl.q_square_residual);
    max_roundtrip = std::max(max_roundtrip, rt);
    max_norm = std::max(max_norm, lvl.f_norm);
    levels.push_back(json{{"level", lvl.level},
                          {"f_norm", lvl.f_norm},
                          {"adjoint_residual", adj_res},
                          {"q_square_residual", lvl.q_square_residual},
                          {"roundtrip_residual", rt}});
  }
  out.pass = max_norm <= 1.0 + 1e-12 && max_adjoint_residual <= tol &&
             max_q_residual <= tol && max_roundtrip <= roundtrip_tol;
  out.details = json{{"norm_f", max_norm},
                     {"max_adjoint_residual", max_adjoint_residual},
                     {"max_q_square_residual", max_q_residual},
                     {"max_roundtrip_residual", max_roundtrip},
                     {"levels", std::move(levels)}};
  return out;
}

CheckResult check_lemma42(const Scenario& s) {
  CheckResult out;
  out.check = "lemma42";
  const Lemma42Report report = verify_lemma_4_2(s.tower(), s.tolerances.tol_rank);
  out.pass = report.max_residual <= s.tolerances.tol_residual && report.dims_stable &&
             report.dims_match;
  out.details = lemma42_report_to_json(report);
  return out;
}

CheckResult check_psi(const Scenario& s, std::uint64_t seed) {
  CheckResult out;
  out.check = "psi";
  const double tol = s.tolerances.tol_residual;
  const Index m = s.levels.front();
  const Index d = s.d;
  Rng rng(seed);

  const AdjointableOp t = s.tower().instantiate(m);
  const AdjointableOp s_op = random_adjointable(rng, d, m);
  const CompactElement e0 = minimal_projection(d);
  const CompactElement e1 = random_minimal_projection(rng, d);

  double worst = 0.0;
  for (const CompactElement* e : {&e0, &e1}) {
    const ComplexMatrix pt = psi(t, *e);
    const ComplexMatrix ps = psi(s_op, *e);
    const double hom = (psi(compose(t, s_op), *e) - pt * ps).norm() /
                       (1.0 + pt.norm() * ps.norm());
    const double star = (psi(adjoint(t), *e) - pt.adjoint()).norm() / (1.0 + pt.norm());
    const double isometry =
        std::abs(operator_norm(pt) - op_norm(t)) / (1.0 + op_norm(t));
    const AdjointableOp back = psi_inverse(pt, *e);
    const double roundtrip =
        (back.right_mult - t.right_mult).norm() / (1.0 + t.right_mult.norm());
    worst = std::max({worst, hom, star, isometry, roundtrip});
  }
  out.pass = worst <= tol;
  out.details = json{{"m", m}, {"max_residual", worst}};
  return out;
}

CheckResult check_decompose(const Scenario& s) {
  CheckResult out;
  out.check = "decompose";
  AnalysisOptions opt;
  opt.tol_rank = s.tolerances.tol_rank;
  const CompactPlusInvertible dec = compact_plus_invertible(s.tower(), opt);
  double max_recon = 0.0;
  double min_sigma = std::numeric_limits<double>::infinity();
  for (const auto& lvl : dec.levels) {
    max_recon = std::max(max_recon, lvl.reconstruction_residual);
    min_sigma = std::min(min_sigma, lvl.v_min_sigma);
  }
  out.pass = dec.k_rank_stable && max_recon <= 1e-12 && min_sigma > opt.tol_rank;
  out.details = decomposition_to_json(dec);
  return out;
}

}  // namespace

RunReport run_scenario(const Scenario& s) {
  RunReport report;
  report.scenario_echo = scenario_to_json(s);
  report.seed = s.seed.value_or(0);
  report.tool_version = kVersion;
  for (const std::string& check : s.checks) {
    if (check == "fredholm") {
      report.results.push_back(check_fredholm(s));
    } else if (check == "transform") {
      report.results.push_back(check_transform(s));
    } else if (check == "lemma42") {
      report.results.push_back(check_lemma42(s));
    } else if (check == "psi") {
      report.results.push_back(check_psi(s, report.seed));
    } else if (check == "decompose") {
      report.results.push_back(check_decompose(s));
    }
  }
  report.pass = std::all_of(report.results.begin(), report.results.end(),
                            [](const CheckResult& c) { return c.pass; });
  return report;
}

json run_report_to_json(const RunReport& r) {
  json results = json::array();
  for (const auto& c : r.results) {
    results.push_back(json{{"check", c.check}, {"pass", c.pass}, {"details", c.details}});
  }
  return json{{"tool_version", r.tool_version},
              {"seed", r.seed},
              {"scenario", r.scenario_echo},
              {"results", std::move(results)},
              {"pass", r.pass}};
}

}  // namespace kmod

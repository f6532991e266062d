// Command-line front end: scenario analysis, named verification suites, the
// built-in gallery, and bounded-transform round trips.
//
// Exit codes: 0 all checks pass, 1 a check failed its tolerance, 2 schema or
// usage error, 3 numerical breakdown (singular defect, unstable
// pseudo-inverse, index precondition violated).

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kmod/runner.hpp"
#include "kmod/suites.hpp"
#include "kmod/version.hpp"

namespace {

using kmod::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitSchema = 2;
constexpr int kExitBreakdown = 3;

struct CommonFlags {
  double tol_rank = -1.0;
  double tol_residual = -1.0;
  std::vector<long> levels;
  long long seed = -1;
  std::string out;
  bool as_json = false;
  bool timing = false;
  int jobs = 1;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kmod::SchemaError("file", "cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

kmod::Scenario load_scenario(const std::string& path, const CommonFlags& flags) {
  kmod::Scenario s = kmod::scenario_from_json(load_json_file(path));
  if (flags.tol_rank >= 0.0) s.tolerances.tol_rank = flags.tol_rank;
  if (flags.tol_residual > 0.0) s.tolerances.tol_residual = flags.tol_residual;
  if (!flags.levels.empty()) {
    s.levels.assign(flags.levels.begin(), flags.levels.end());
    for (size_t i = 0; i < s.levels.size(); ++i) {
      if (s.levels[i] < 2 || (i > 0 && s.levels[i] <= s.levels[i - 1])) {
        throw kmod::SchemaError("levels", "must be strictly increasing and >= 2");
      }
    }
  }
  if (flags.seed >= 0) s.seed = static_cast<std::uint64_t>(flags.seed);
  return s;
}

void emit(const json& payload, const CommonFlags& flags) {
  if (!flags.out.empty()) {
    std::ofstream out(flags.out);
    if (!out) throw kmod::SchemaError("out", "cannot write '" + flags.out + "'");
    out << payload.dump(2) << "\n";
  } else {
    std::cout << payload.dump(2) << "\n";
  }
}

int run_analyze(const std::vector<std::string>& files, const CommonFlags& flags) {
  const auto start = std::chrono::steady_clock::now();

  std::vector<kmod::Scenario> scenarios;
  for (const auto& f : files) scenarios.push_back(load_scenario(f, flags));

  std::vector<kmod::RunReport> reports(scenarios.size());
  if (flags.jobs > 1 && scenarios.size() > 1) {
    std::vector<std::future<kmod::RunReport>> futures;
    futures.reserve(scenarios.size());
    for (const auto& s : scenarios) {
      futures.push_back(
          std::async(std::launch::async, [&s] { return kmod::run_scenario(s); }));
    }
    for (size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < scenarios.size(); ++i) {
      reports[i] = kmod::run_scenario(scenarios[i]);
    }
  }

  json payload;
  if (reports.size() == 1) {
    payload = kmod::run_report_to_json(reports[0]);
  } else {
    payload = json::array();
    for (const auto& r : reports) payload.push_back(kmod::run_report_to_json(r));
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  if (flags.timing) {
    if (payload.is_array()) {
      payload = json{{"reports", payload}, {"wall_time_ms", elapsed}};
    } else {
      payload["wall_time_ms"] = elapsed;
    }
  }
  emit(payload, flags);

  bool all_pass = true;
  for (size_t i = 0; i < reports.size(); ++i) {
    all_pass = all_pass && reports[i].pass;
    std::cerr << scenarios[i].name << ": " << (reports[i].pass ? "PASS" : "FAIL")
              << "\n";
  }
  std::cerr << "completed in " << elapsed << " ms\n";
  return all_pass ? kExitPass : kExitCheckFailed;
}

int run_verify(const std::string& suite, const CommonFlags& flags) {
  bool known = false;
  for (const auto& n : kmod::suite_names()) known = known || n == suite;
  if (!known) {
    std::cerr << "unknown suite '" << suite << "'; available:";
    for (const auto& n : kmod::suite_names()) std::cerr << " " << n;
    std::cerr << "\n";
    return kExitSchema;
  }
  const std::uint64_t seed = flags.seed >= 0 ? static_cast<std::uint64_t>(flags.seed) : 0;
  const kmod::SuiteResult result = kmod::run_suite(suite, seed);

  if (flags.as_json) {
    json instances = json::array();
    const kmod::SuiteInstance* first_failure = nullptr;
    for (const auto& inst : result.instances) {
      instances.push_back(json{{"instance", inst.name},
                               {"pass", inst.pass},
                               {"residual", inst.residual},
                               {"note", inst.note}});
      if (!inst.pass && first_failure == nullptr) first_failure = &inst;
    }
    json payload{{"suite", result.suite},
                 {"seed", result.seed},
                 {"pass", result.pass},
                 {"instances", std::move(instances)}};
    if (first_failure != nullptr) payload["first_failure"] = first_failure->replay;
    emit(payload, flags);
  } else {
    std::ostringstream table;
    table << "suite,instance,pass,residual,note\n";
    for (const auto& inst : result.instances) {
      table << result.suite << "," << inst.name << "," << (inst.pass ? "pass" : "FAIL")
            << "," << inst.residual << "," << inst.note << "\n";
    }
    if (!flags.out.empty()) {
      std::ofstream out(flags.out);
      out << table.str();
    } else {
      std::cout << table.str();
    }
    for (const auto& inst : result.instances) {
      if (!inst.pass) {
        std::cerr << "first failing instance (replay):\n"
                  << inst.replay.dump(2) << "\n";
        break;
      }
    }
  }
  std::cerr << "suite " << suite << " seed " << seed << ": "
            << (result.pass ? "PASS" : "FAIL") << " (" << result.instances.size()
            << " instances)\n";
  return result.pass ? kExitPass : kExitCheckFailed;
}

int run_gallery(const CommonFlags& flags) {
  if (flags.as_json) {
    json payload = json::array();
    for (const auto& e : kmod::builtin_gallery()) {
      json entry{{"name", e.name},
                 {"description", e.description},
                 {"levels", e.levels},
                 {"generator", kmod::generator_to_json(e.generator)},
                 {"unbounded", e.unbounded},
                 {"expected", json{{"is_fredholm", e.expect_fredholm}}}};
      if (e.expect_index) entry["expected"]["index"] = *e.expect_index;
      payload.push_back(std::move(entry));
    }
    emit(payload, flags);
    return kExitPass;
  }
  for (const auto& e : kmod::builtin_gallery()) {
    std::cout << e.name << "\n  " << e.description << "\n  expected: "
              << (e.expect_fredholm ? "fredholm" : "not fredholm");
    if (e.expect_index) std::cout << ", index " << *e.expect_index;
    std::cout << "\n";
  }
  return kExitPass;
}

int run_transform(const std::string& file, const CommonFlags& flags) {
  const kmod::Scenario s = load_scenario(file, flags);
  const double tol = s.tolerances.tol_residual;
  json levels = json::array();
  bool pass = true;

  if (s.direction == "inverse") {
    // The generator is interpreted as the would-be bounded transform; invert
    // it per level and confirm the round trip back.
    for (kmod::Index n : s.levels) {
      const kmod::ComplexMatrix f = s.generator.square(n);
      const kmod::ComplexMatrix t = kmod::inverse_transform_matrix(f, s.tolerances.tol_rank);
      const double back = (kmod::bounded_transform_matrix(t) - f).norm() / (1.0 + f.norm());
      pass = pass && back <= 100.0 * tol;
      levels.push_back(json{{"level", n}, {"retransform_residual", back}});
    }
  } else {
    const kmod::OperatorTower tower = s.tower();
    const kmod::BoundedTransformResult bt = kmod::bounded_transform(tower);
    for (const auto& lvl : bt.levels) {
      const kmod::ComplexMatrix a = tower.generator.square(lvl.level);
      const kmod::ComplexMatrix back = kmod::inverse_transform_matrix(lvl.f);
      const double rt = (back - a).norm() / (1.0 + a.norm());
      pass = pass && lvl.f_norm <= 1.0 + 1e-12 && rt <= 100.0 * tol &&
             lvl.q_square_residual <= tol;
      levels.push_back(json{{"level", lvl.level},
                            {"f_norm", lvl.f_norm},
                            {"defect_min_eig", lvl.defect_min_eig},
                            {"q_square_residual", lvl.q_square_residual},
                            {"roundtrip_residual", rt}});
    }
  }
  json payload{{"tool_version", kmod::kVersion},
               {"scenario", kmod::scenario_to_json(s)},
               {"direction", s.direction},
               {"levels", std::move(levels)},
               {"pass", pass}};
  emit(payload, flags);
  return pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert-module operator laboratory: Fredholm analysis, "
               "localization, and bounded transforms at matrix truncation"};
  app.set_version_flag("--version", kmod::kVersion);
  app.require_subcommand(1);

  CommonFlags flags;

  auto add_common = [&flags](CLI::App* cmd, bool with_jobs) {
    cmd->add_option("--tol-rank", flags.tol_rank, "rank tolerance override");
    cmd->add_option("--tol-residual", flags.tol_residual, "residual tolerance override");
    cmd->add_option("--levels", flags.levels, "truncation levels override")
        ->delimiter(',');
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--out", flags.out, "write the report to this path");
    cmd->add_flag("--json", flags.as_json, "machine-readable output");
    cmd->add_flag("--timing", flags.timing, "include wall time in the report");
    if (with_jobs) {
      cmd->add_option("--jobs", flags.jobs, "run scenarios in parallel");
    }
  };

  std::vector<std::string> analyze_files;
  CLI::App* analyze = app.add_subcommand("analyze", "run the checks in scenario files");
  analyze->add_option("files", analyze_files, "scenario JSON files")->required();
  add_common(analyze, true);

  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("--suite", suite, "suite name")->required();
  add_common(verify, false);

  CLI::App* gallery = app.add_subcommand("gallery", "list the built-in towers");
  add_common(gallery, false);

  std::string transform_file;
  CLI::App* transform =
      app.add_subcommand("transform", "bounded-transform round trip report");
  transform->add_option("file", transform_file, "scenario JSON file")->required();
  add_common(transform, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitSchema;
  }

  try {
    if (*analyze) return run_analyze(analyze_files, flags);
    if (*verify) return run_verify(suite, flags);
    if (*gallery) return run_gallery(flags);
    if (*transform) return run_transform(transform_file, flags);
  } catch (const kmod::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const json::parse_error& e) {
    std::cerr << "schema error: invalid JSON: " << e.what() << "\n";
    return kExitSchema;
  } catch (const kmod::DefectSingular& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const kmod::NoPseudoInverse& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const kmod::NotFredholm& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const kmod::IndexNonzero& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const kmod::DomainError& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const std::out_of_range& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBreakdown;
  }
  return kExitSchema;
}

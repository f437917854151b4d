// fprw: simulate and analyze nearest-neighbour random walks on free products
// of finite rooted graphs.
//
// Exit codes: 0 success, 1 domain failure (invalid kernel, budget overrun,
// failed acceptance criterion), 2 usage error (bad flags, malformed file,
// unknown scenario or quantity).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fprw/errors.hpp"
#include "fprw/estimate.hpp"
#include "fprw/exit.hpp"
#include "fprw/model.hpp"
#include "fprw/model_io.hpp"
#include "fprw/report.hpp"
#include "fprw/reproduce.hpp"
#include "fprw/scenario.hpp"
#include "fprw/simulate.hpp"
#include "fprw/solve.hpp"
#include "fprw/version.hpp"
#include "fprw/word.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

std::string scenario_names() {
  std::string out;
  for (const auto& s : fprw::scenario_registry()) {
    if (!out.empty()) out += ", ";
    out += s.name;
  }
  return out;
}

// Scenario names shadow file paths on purpose: a file literally named
// "counterexample" needs a ./ prefix.
fprw::ModelSpec resolve_spec(const std::string& ref,
                             const fprw::Scenario** scenario_out) {
  if (const fprw::Scenario* s = fprw::find_scenario(ref)) {
    if (scenario_out != nullptr) *scenario_out = s;
    return s->spec;
  }
  if (scenario_out != nullptr) *scenario_out = nullptr;
  return fprw::load_model(ref);
}

std::string replica_stem(std::size_t replica) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "replica_%03zu", replica);
  return buf;
}

struct SolveJob {
  std::string quantity;
  std::string start;
  std::string target;
  fprw::SolveResult result;
};

int cmd_validate(const std::string& model_ref) {
  const fprw::Scenario* scenario = nullptr;
  const fprw::ModelSpec spec = resolve_spec(model_ref, &scenario);
  const std::vector<fprw::Diagnostic> diags = fprw::validate(spec);
  if (!diags.empty()) {
    for (const auto& d : diags) {
      std::cerr << d.where << ": " << d.message << "\n";
    }
    return kExitDomain;
  }
  const fprw::Model model{spec};
  std::cout << "ok"
            << (scenario != nullptr ? " scenario=" + scenario->name : "")
            << " digest=" << model.digest_hex() << "\n";
  return kExitOk;
}

struct SimulateArgs {
  std::string model_ref;
  std::size_t steps = 100'000;
  std::size_t replicas = 64;
  std::uint64_t seed = 42;
  int margin = fprw::kDefaultCertificationMargin;
  bool include_uncertified = false;
  std::string out_dir;
};

int cmd_simulate(const SimulateArgs& args) {
  const fprw::Scenario* scenario = nullptr;
  const fprw::Model model{resolve_spec(args.model_ref, &scenario)};

  fprw::StudyOptions options;
  options.n_steps = args.steps;
  options.n_replicas = args.replicas;
  options.base_seed = args.seed;
  options.certification_margin = args.margin;
  options.include_uncertified = args.include_uncertified;
  const fprw::StudyResult study = fprw::run_study(model, options);

  const fprw::RangeReport& rp = study.report;
  double final_range_sum = 0.0;
  std::int64_t ok_count = 0;
  for (const auto& rep : study.replicas) {
    if (!rep.error.empty()) {
      std::cerr << "replica " << rep.replica << " failed: " << rep.error
                << "\n";
      continue;
    }
    final_range_sum += static_cast<double>(rep.range.values.back());
    ++ok_count;
  }

  std::cout << "model " << rp.model_digest << " steps " << rp.n_steps
            << " replicas " << rp.n_replicas << " (failed " << rp.n_failed
            << ") seed " << rp.base_seed << "\n";
  if (ok_count > 0) {
    std::cout << "mean final range R_N  " << fmt(final_range_sum / ok_count)
              << "\n";
  }
  std::cout << "range constant r_hat  " << fmt(rp.r_hat.mean) << " (se "
            << fmt(rp.r_hat.std_error, 3) << ")\n"
            << "speed ell_hat (word)  " << fmt(rp.ell_hat.mean) << " (se "
            << fmt(rp.ell_hat.std_error, 3) << ")\n"
            << "speed ell_hat (exit)  " << fmt(rp.ell_exit_hat.mean) << " (se "
            << fmt(rp.ell_exit_hat.std_error, 3) << ")\n"
            << "fresh rate r_tilde    " << fmt(rp.r_tilde_hat.mean) << " (se "
            << fmt(rp.r_tilde_hat.std_error, 3) << ")\n"
            << "product |r-rt*ell|    " << fmt(rp.product_check, 3) << " (gate "
            << fmt(rp.product_gate, 3) << ")\n"
            << "certified records     " << study.diagnostics.n_records
            << ", overhead tail " << fmt(rp.overhead_tail, 4) << "\n"
            << "elapsed               " << fmt(study.elapsed_seconds, 3)
            << " s\n";

  if (!args.out_dir.empty()) {
    fprw::ArtifactWriter writer(args.out_dir);
    writer.write("report.json", fprw::range_report_text(rp, scenario));
    writer.write("diagnostics.json", fprw::diagnostics_text(study.diagnostics));
    for (std::size_t i = 0; i < study.replicas.size(); ++i) {
      const auto& rep = study.replicas[i];
      if (!rep.error.empty()) continue;
      const std::string stem = replica_stem(i);
      std::ostringstream traj;
      fprw::export_trajectory(traj, rep.trajectory, rep.range);
      writer.write(stem + ".trajectory.csv", traj.str());
      std::ostringstream exits;
      fprw::export_exit_records(exits, rep.trajectory, study.summaries[i]);
      writer.write(stem + ".exits.csv", exits.str());
    }
    writer.write_manifest();
    std::cout << "wrote " << writer.artifacts().size() + 1 << " files to "
              << writer.dir() << "\n";
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::vector<std::string> inputs;
  int margin = fprw::kDefaultCertificationMargin;
  bool include_uncertified = false;
  std::string out_dir;
};

std::string exits_name(const std::string& input) {
  std::string stem = std::filesystem::path(input).filename().string();
  if (auto pos = stem.rfind(".csv"); pos != std::string::npos &&
                                     pos + 4 == stem.size()) {
    stem.erase(pos);
  }
  if (auto pos = stem.rfind(".trajectory"); pos != std::string::npos &&
                                            pos + 11 == stem.size()) {
    stem.erase(pos);
  }
  return stem + ".exits.csv";
}

int cmd_analyze(const AnalyzeArgs& args) {
  std::optional<fprw::ArtifactWriter> writer;
  if (!args.out_dir.empty()) writer.emplace(args.out_dir);

  fprw::PsiOptions psi;
  psi.include_uncertified = args.include_uncertified;

  std::vector<fprw::DiagnosticsReport> diags;
  for (const std::string& input : args.inputs) {
    std::ifstream in(input);
    if (!in) throw fprw::ParseError("cannot open trajectory file '" + input + "'");
    const fprw::Trajectory traj = fprw::import_trajectory(in);
    const fprw::ExitSummary summary =
        fprw::analyze_exits(traj, args.margin, psi);

    std::cout << input << ": horizon " << summary.horizon << ", k(N) "
              << summary.k_of_n << ", certified " << summary.certified_count();
    try {
      diags.push_back(fprw::chain_diagnostics(summary));
      const auto& d = diags.back();
      std::cout << ", mean r_tilde " << fmt(d.mean_r_tilde, 5)
                << ", mean overhead " << fmt(d.mean_overhead, 5);
    } catch (const fprw::NoCertifiedRecords&) {
      std::cout << ", too few certified records for chain diagnostics";
    }
    std::cout << "\n";

    if (writer) {
      std::ostringstream exits;
      fprw::export_exit_records(exits, traj, summary);
      writer->write(exits_name(input), exits.str());
    }
  }

  const fprw::DiagnosticsReport merged = fprw::merge_diagnostics(diags);
  if (args.inputs.size() > 1) {
    std::cout << "merged: " << merged.n_records << " records, alternation "
              << merged.alternation_violations << ", nesting "
              << merged.nesting_violations << "\n";
  }
  if (writer) {
    writer->write("diagnostics.json", fprw::diagnostics_text(merged));
    writer->write_manifest();
    std::cout << "wrote " << writer->artifacts().size() + 1 << " files to "
              << writer->dir() << "\n";
  }
  return kExitOk;
}

struct SolveArgs {
  std::string model_ref;
  std::vector<std::string> quantities;
  int truncation = 12;
  std::uint64_t state_budget = 1'000'000;
  std::string method = "elimination";
  double ladder_tol = 1e-8;
  int history_from = 1;
  std::string from = "()";
  std::string to = "()";
  std::string out_dir;
};

int cmd_solve(const SolveArgs& args) {
  static const std::vector<std::string> known = {"u00", "xi", "green",
                                                 "group-range"};
  for (const std::string& q : args.quantities) {
    if (std::find(known.begin(), known.end(), q) == known.end()) {
      std::cerr << "unknown quantity '" << q
                << "'; known quantities: u00, xi, green, group-range\n";
      return kExitUsage;
    }
  }

  const fprw::Model model{resolve_spec(args.model_ref, nullptr)};
  fprw::SolveOptions options;
  options.state_budget = args.state_budget;
  options.method = args.method == "sweeps" ? fprw::SolveMethod::sweeps
                                           : fprw::SolveMethod::elimination;
  options.ladder_tol = args.ladder_tol;
  options.history_from = args.history_from;

  const int m = args.truncation;
  std::vector<SolveJob> jobs;
  for (const std::string& q : args.quantities) {
    if (q == "u00") {
      jobs.push_back({"u00", "()", "()",
                      fprw::first_return(model, fprw::FreeWord{}, m, options)});
    } else if (q == "xi") {
      jobs.push_back({"xi1", "()", "cone of a factor-1 letter",
                      fprw::xi(model, fprw::FactorId::one, m, options)});
      jobs.push_back({"xi2", "()", "cone of a factor-2 letter",
                      fprw::xi(model, fprw::FactorId::two, m, options)});
    } else if (q == "green") {
      const fprw::FreeWord x = fprw::FreeWord::parse(args.from);
      const fprw::FreeWord y = fprw::FreeWord::parse(args.to);
      jobs.push_back({"green", x.str(), y.str(),
                      fprw::truncated_green(model, x, y, m, options)});
    } else {
      jobs.push_back({"group-range", "()", "()",
                      fprw::group_case_range(model, m, options)});
    }
  }

  for (const SolveJob& job : jobs) {
    const fprw::SolveResult& r = job.result;
    std::cout << job.quantity << " = " << fmt(r.value, 12) << "  (truncation "
              << r.truncation << ", "
              << (r.direction == fprw::BoundDirection::lower ? "lower"
                                                             : "upper")
              << " bound, " << (r.converged ? "converged" : "not converged")
              << ")\n";
    for (const auto& [key, value] : r.residuals) {
      std::cout << "  residual " << key << " = " << fmt(value, 3) << "\n";
    }
  }

  if (!args.out_dir.empty()) {
    fprw::ArtifactWriter writer(args.out_dir);
    for (const SolveJob& job : jobs) {
      writer.write("solve_" + job.quantity + ".json",
                   fprw::solve_report_text({job.quantity, job.start, job.target,
                                            model.digest_hex(), job.result}));
    }
    writer.write_manifest();
    std::cout << "wrote " << writer.artifacts().size() + 1 << " files to "
              << writer.dir() << "\n";
  }
  return kExitOk;
}

struct ExactRangeArgs {
  std::string model_ref;
  int max_steps = 8;
  std::uint64_t budget = 10'000'000;
  std::string out_dir;
};

int cmd_exact_range(const ExactRangeArgs& args) {
  const fprw::Model model{resolve_spec(args.model_ref, nullptr)};
  std::ostringstream table;
  table << "n,expected_range\n";
  for (int n = 1; n <= args.max_steps; ++n) {
    table << n << "," << fmt(fprw::exact_expected_range(model, n, args.budget), 15)
          << "\n";
  }
  std::cout << table.str();
  if (!args.out_dir.empty()) {
    fprw::ArtifactWriter writer(args.out_dir);
    writer.write("exact_range.csv", table.str());
    writer.write_manifest();
  }
  return kExitOk;
}

int cmd_reproduce(const std::string& scenario_name,
                  std::vector<int> criteria) {
  if (scenario_name != "all" &&
      fprw::find_scenario(scenario_name) == nullptr) {
    std::cerr << "unknown scenario '" << scenario_name
              << "'; known scenarios: " << scenario_names() << "\n";
    return kExitUsage;
  }
  if (criteria.empty()) {
    criteria = scenario_name == "all"
                   ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9}
                   : fprw::AcceptanceRunner::criteria_for_scenario(
                         scenario_name);
  }

  fprw::AcceptanceRunner runner;
  bool all_pass = true;
  for (const fprw::CriterionResult& r : runner.run(criteria)) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
              << ": " << r.detail << "\n";
  }
  std::cout << (all_pass ? "all criteria passed" : "criteria FAILED") << "\n";
  return all_pass ? kExitOk : kExitDomain;
}

int cmd_scenarios() {
  for (const fprw::Scenario& s : fprw::scenario_registry()) {
    std::cout << s.name << "\n  " << s.notes << "\n";
    for (const auto& [key, expected] : s.expected) {
      std::cout << "  expected " << key << " = " << fmt(expected.value, 12)
                << "  (" << expected.note << ")\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks on free products of finite rooted graphs: "
               "simulation, exit-time analysis, and truncated solvers."};
  app.set_version_flag("--version", std::string(fprw::kToolName) + " " +
                                        std::string(fprw::kToolVersion));
  app.require_subcommand(1);

  // validate
  std::string validate_model;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check kernel invariants of a scenario or model file");
  validate->add_option("model", validate_model, "scenario name or model file")
      ->required();

  // simulate
  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a replica study and estimate range and speed");
  simulate->add_option("model", sim.model_ref, "scenario name or model file")
      ->required();
  simulate->add_option("--steps", sim.steps, "steps per replica");
  simulate->add_option("--replicas", sim.replicas, "number of replicas");
  simulate->add_option("--seed", sim.seed, "base seed, split per replica");
  simulate->add_option("--margin", sim.margin,
                       "certification margin for exit records");
  simulate->add_flag("--include-uncertified", sim.include_uncertified,
                     "extend censuses past the certified prefix");
  simulate->add_option("--out", sim.out_dir,
                       "directory for reports, trajectories, manifest");

  // analyze
  AnalyzeArgs ana;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Re-run exit analysis on stored trajectory files");
  analyze->add_option("inputs", ana.inputs, "trajectory csv files")
      ->required()
      ->expected(-1);
  analyze->add_option("--margin", ana.margin, "certification margin");
  analyze->add_flag("--include-uncertified", ana.include_uncertified,
                    "extend censuses past the certified prefix");
  analyze->add_option("--out", ana.out_dir,
                      "directory for exit records and diagnostics");

  // solve
  SolveArgs sol;
  CLI::App* solve = app.add_subcommand(
      "solve", "Evaluate first-return, cone-escape, and Green quantities");
  solve->add_option("model", sol.model_ref, "scenario name or model file")
      ->required();
  solve->add_option("--quantities", sol.quantities,
                    "comma-separated list: u00, xi, green, group-range")
      ->required()
      ->delimiter(',');
  solve->add_option("--truncation", sol.truncation,
                    "word-length cutoff of the truncated system");
  solve->add_option("--state-budget", sol.state_budget,
                    "cap on truncated states");
  solve->add_option("--method", sol.method, "elimination or sweeps")
      ->check(CLI::IsMember({"elimination", "sweeps"}));
  solve->add_option("--ladder-tol", sol.ladder_tol,
                    "convergence tolerance across truncation depths");
  solve->add_option("--history-from", sol.history_from,
                    "first truncation depth recorded in the history");
  solve->add_option("--from", sol.from, "green: start word, e.g. 1:1 or ()");
  solve->add_option("--to", sol.to, "green: target word");
  solve->add_option("--out", sol.out_dir, "directory for solve reports");

  // exact-range
  ExactRangeArgs ex;
  CLI::App* exact = app.add_subcommand(
      "exact-range", "E[R_n] by exhaustive weighted path enumeration");
  exact->add_option("model", ex.model_ref, "scenario name or model file")
      ->required();
  exact->add_option("--max-steps", ex.max_steps, "print n = 1..max-steps");
  exact->add_option("--budget", ex.budget, "cap on enumerated paths");
  exact->add_option("--out", ex.out_dir, "directory for the csv table");

  // reproduce
  std::string repro_scenario;
  std::vector<int> repro_criteria;
  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Run a scenario's acceptance criteria on reference seeds");
  reproduce->add_option("scenario", repro_scenario,
                        "scenario name, or 'all' for every criterion")
      ->required();
  reproduce->add_option("--criteria", repro_criteria,
                        "criterion ids to run instead of the scenario's set")
      ->delimiter(',');

  // scenarios
  app.add_subcommand("scenarios", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_model);
    if (simulate->parsed()) return cmd_simulate(sim);
    if (analyze->parsed()) return cmd_analyze(ana);
    if (solve->parsed()) return cmd_solve(sol);
    if (exact->parsed()) return cmd_exact_range(ex);
    if (reproduce->parsed()) return cmd_reproduce(repro_scenario, repro_criteria);
    return cmd_scenarios();
  } catch (const fprw::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

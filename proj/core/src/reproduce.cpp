#include "fprw/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fprw/report.hpp"
#include "fprw/rng.hpp"
#include "fprw/scenario.hpp"

namespace fprw {
namespace {

constexpr const char* kCounterexample = "counterexample";
constexpr const char* kGroupCase = "group-z2z3";
constexpr const char* kExample1 = "example1";

// Reference seeds; each sub-experiment draws from its own stream.
constexpr std::uint64_t kStudySeed = 42;
constexpr std::uint64_t kOracleSeed = 4242;
constexpr std::uint64_t kInvariantSeed = 424242;

constexpr std::size_t kOracleReplicas = 10'000;
constexpr int kOracleHorizon = 12;
constexpr int kInvariantTrajectories = 1'000;
constexpr std::size_t kInvariantSteps = 2'000;
constexpr int kDeepTruncation = 40;
constexpr std::uint64_t kDeepStateBudget = 16'000'000;
constexpr int kConeTruncation = 25;

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

// Nondecreasing for lower bounds, nonincreasing for upper bounds, with a
// small slack for the solver's floating-point tolerance.
bool history_monotone(const SolveResult& result) {
  const double slack = 1e-12 * std::max(1.0, std::abs(result.value));
  for (std::size_t i = 1; i < result.history.size(); ++i) {
    const double step = result.history[i].second - result.history[i - 1].second;
    if (result.direction == BoundDirection::lower && step < -slack) return false;
    if (result.direction == BoundDirection::upper && step > slack) return false;
  }
  return true;
}

double last_increment(const SolveResult& result) {
  if (result.history.size() < 2) return std::numeric_limits<double>::infinity();
  const auto n = result.history.size();
  return std::abs(result.history[n - 1].second - result.history[n - 2].second);
}

}  // namespace

StudyResult run_study(const Model& model, const StudyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  StudyResult result;
  result.replicas =
      run_replicas(model, options.n_steps, options.n_replicas, options.base_seed);
  result.summaries.resize(result.replicas.size());
  PsiOptions psi_opts;
  psi_opts.include_uncertified = options.include_uncertified;
  std::vector<DiagnosticsReport> parts;
  for (std::size_t i = 0; i < result.replicas.size(); ++i) {
    const ReplicaResult& replica = result.replicas[i];
    if (!replica.error.empty()) continue;
    result.summaries[i] = analyze_exits(replica.trajectory,
                                        options.certification_margin, psi_opts);
    try {
      parts.push_back(chain_diagnostics(result.summaries[i]));
    } catch (const NoCertifiedRecords&) {
      // Short runs legitimately certify nothing; the report carries NaNs.
    }
  }
  result.diagnostics = merge_diagnostics(parts);
  result.report = build_range_report(model, result.replicas, result.summaries,
                                     options.base_seed,
                                     options.certification_margin);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

const Model& AcceptanceRunner::model(const std::string& scenario) {
  auto it = models_.find(scenario);
  if (it != models_.end()) return it->second;
  const Scenario* entry = find_scenario(scenario);
  if (entry == nullptr) {
    throw std::logic_error("acceptance runner: unknown scenario " + scenario);
  }
  return models_.emplace(scenario, Model(entry->spec)).first->second;
}

const StudyResult& AcceptanceRunner::study(const std::string& scenario) {
  auto it = studies_.find(scenario);
  if (it != studies_.end()) return it->second;
  StudyOptions options;
  options.base_seed = kStudySeed;
  StudyResult result = run_study(model(scenario), options);
  return studies_.emplace(scenario, std::move(result)).first->second;
}

const std::vector<ReplicaResult>& AcceptanceRunner::oracle_replicas() {
  if (oracle_replicas_.empty()) {
    oracle_replicas_ = run_replicas(model(kCounterexample), kOracleHorizon,
                                    kOracleReplicas, kOracleSeed);
  }
  return oracle_replicas_;
}

const SolveResult& AcceptanceRunner::solve(const std::string& label) {
  auto it = solves_.find(label);
  if (it != solves_.end()) return it->second;
  return solves_.emplace(label, compute_solve(label)).first->second;
}

SolveResult AcceptanceRunner::compute_solve(const std::string& label) {
  const auto scenario = label.substr(label.find(' ') + 1);
  const auto kind = label.substr(0, label.find(' '));
  if (kind == "first-return-small") {
    return first_return(model(scenario), FreeWord{}, 12, {});
  }
  if (kind == "group-range-small") {
    return group_case_range(model(scenario), 12, {});
  }
  if (kind == "first-return-deep") {
    SolveOptions opts;
    opts.state_budget = kDeepStateBudget;
    opts.ladder_tol = 1e-6;
    opts.history_from = 10;
    return first_return(model(scenario), FreeWord{}, kDeepTruncation, opts);
  }
  if (kind == "green-deep") {
    SolveOptions opts;
    opts.state_budget = kDeepStateBudget;
    opts.history_from = 10;
    const FreeWord from_a{{Letter{FactorId::one, 0}}};
    return truncated_green(model(scenario), from_a, FreeWord{}, kDeepTruncation,
                           opts);
  }
  if (kind == "xi1" || kind == "xi2") {
    const FactorId factor = kind == "xi1" ? FactorId::one : FactorId::two;
    return xi(model(scenario), factor, kConeTruncation, {});
  }
  throw std::logic_error("acceptance runner: unknown solve label " + label);
}

CriterionResult AcceptanceRunner::counterexample_range_bound() {
  const StudyResult& s = study(kCounterexample);
  const Estimate& r = s.report.r_hat;
  const double bound = 0.9583 + 3.0 * r.std_error;
  const bool pass =
      r.mean > 0.0 && r.mean <= bound && s.elapsed_seconds < 60.0;
  std::string detail = "r_hat=" + fmt(r.mean) + " se=" + fmt(r.std_error, 3) +
                       " bound=" + fmt(bound) + " elapsed=" +
                       fmt(s.elapsed_seconds, 3) + "s";
  return {1, "counterexample-range-bound", pass, detail};
}

CriterionResult AcceptanceRunner::group_formula_contradiction() {
  const SolveResult& u = solve("first-return-small counterexample");
  const SolveResult& g = solve("group-range-small counterexample");
  const Estimate& r = study(kCounterexample).report.r_hat;
  const bool pass = u.value == 0.0 && g.value == 1.0 && r.mean < 0.96;
  std::string detail = "u00=" + fmt(u.value) + " group_prediction=" +
                       fmt(g.value) + " r_hat=" + fmt(r.mean);
  return {2, "group-formula-contradiction", pass, detail};
}

CriterionResult AcceptanceRunner::exact_enumeration_agreement() {
  const Model& m = model(kCounterexample);
  const auto& replicas = oracle_replicas();
  bool pass = true;
  double worst_gap = 0.0;
  int worst_n = 0;
  for (int n = 1; n <= kOracleHorizon; ++n) {
    const double exact = exact_expected_range(m, n, 1'000'000);
    std::vector<double> samples;
    samples.reserve(replicas.size());
    for (const ReplicaResult& replica : replicas) {
      if (!replica.error.empty()) continue;
      samples.push_back(static_cast<double>(replica.range.values[n]));
    }
    const Estimate mc = across_replicas(samples);
    const double gap = std::abs(mc.mean - exact);
    if (gap > 3.0 * mc.std_error + 1e-15) pass = false;
    const double rel = mc.std_error > 0 ? gap / mc.std_error : gap;
    if (rel > worst_gap) {
      worst_gap = rel;
      worst_n = n;
    }
  }
  const double exact1 = exact_expected_range(m, 1, 1'000'000);
  const double exact2 = exact_expected_range(m, 2, 1'000'000);
  if (exact1 != 2.0 || exact2 != 2.75) pass = false;
  std::string detail = "replicas=" + std::to_string(replicas.size()) +
                       " worst_z=" + fmt(worst_gap, 3) + " at n=" +
                       std::to_string(worst_n) + " exact(1)=" + fmt(exact1) +
                       " exact(2)=" + fmt(exact2);
  return {3, "exact-enumeration-agreement", pass, detail};
}

CriterionResult AcceptanceRunner::rate_of_escape() {
  const StudyResult& s = study(kCounterexample);
  const Estimate& word = s.report.ell_hat;
  const Estimate& exit = s.report.ell_exit_hat;
  const double gap = std::abs(word.mean - exit.mean);
  const double gate = 3.0 * std::hypot(word.std_error, exit.std_error);
  const bool pass =
      word.mean >= 0.49 && word.mean <= 0.51 && gap <= gate + 1e-15;
  std::string detail = "ell_hat=" + fmt(word.mean) + " ell_exit_hat=" +
                       fmt(exit.mean) + " gap=" + fmt(gap, 3) + " gate=" +
                       fmt(gate, 3);
  return {4, "rate-of-escape", pass, detail};
}

CriterionResult AcceptanceRunner::range_factorization_identity() {
  bool pass = true;
  std::string detail;
  for (const char* name : {kCounterexample, kGroupCase}) {
    const RangeReport& report = study(name).report;
    const bool ok = std::isfinite(report.product_check) &&
                    report.product_check <= report.product_gate + 1e-15;
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + ": |diff|=" + fmt(report.product_check, 3) +
              " gate=" + fmt(report.product_gate, 3);
  }
  return {5, "range-factorization-identity", pass, detail};
}

CriterionResult AcceptanceRunner::group_case_formula() {
  const SolveResult& u = solve("first-return-deep group-z2z3");
  const Estimate& r = study(kGroupCase).report.r_hat;
  const double predicted = 1.0 - u.value;
  const double gap = std::abs(r.mean - predicted);
  const double gate = std::max(0.01, 3.0 * r.std_error);
  const bool ladder_ok = !u.history.empty() && u.history.front().first == 10 &&
                         u.history.back().first == kDeepTruncation;
  const bool pass = gap <= gate && u.converged && u.sweeps_converged && ladder_ok;
  std::string detail = "r_hat=" + fmt(r.mean) + " 1-u00=" + fmt(predicted) +
                       " gap=" + fmt(gap, 3) + " gate=" + fmt(gate, 3) +
                       " final_increment=" + fmt(last_increment(u), 3);
  return {6, "group-case-formula", pass, detail};
}

CriterionResult AcceptanceRunner::structural_invariants() {
  std::int64_t violations = 0;
  int inspected = 0;
  std::uint64_t trajectory_index = 0;
  for (const char* name : {kCounterexample, kGroupCase, kExample1}) {
    const Model& m = model(name);
    const int per_scenario =
        kInvariantTrajectories / 3 + (name == std::string(kCounterexample) ? 1 : 0);
    for (int t = 0; t < per_scenario; ++t, ++trajectory_index) {
      const std::uint64_t seed = split_seed(kInvariantSeed, trajectory_index);
      const Trajectory traj = fprw::run(m, kInvariantSteps, seed);
      const RangeSeries range = range_process(traj);
      ++inspected;

      // Range: starts at 1, unit increments, never above n + 1.
      if (range.values.front() != 1) ++violations;
      for (std::size_t n = 1; n < range.values.size(); ++n) {
        const auto d = range.values[n] - range.values[n - 1];
        if (d > 1) ++violations;
        if (range.values[n] > n + 1) ++violations;
      }

      PsiOptions opts;
      opts.include_uncertified = true;
      const ExitSummary summary = analyze_exits(traj, kDefaultCertificationMargin, opts);
      if (summary.k_of_n != static_cast<int>(traj.final_word.length())) ++violations;

      const std::vector<FreeWord> words = replay(traj);
      std::int64_t prev_e = 0;
      std::int64_t sum_r_tilde = 0;
      for (std::size_t i = 0; i < summary.records.size(); ++i) {
        const ExitRecord& rec = summary.records[i];
        const int k = rec.k;
        // Exit times strictly increase and stay within the horizon.
        if (rec.e_k <= prev_e) ++violations;
        if (rec.e_k < 1 || rec.e_k > summary.horizon) ++violations;
        prev_e = rec.e_k;
        // Stabilized letters alternate factors and match the final word.
        if (i > 0 && summary.records[i - 1].w.factor == rec.w.factor) ++violations;
        if (!(rec.w == traj.final_word.at(k - 1))) ++violations;
        // Cone nesting: the word standing at e_k extends the stabilized
        // prefix, so C(X_{e_k}) sits inside C(X_{e_{k-1}}).
        const FreeWord& at_exit = words[static_cast<std::size_t>(rec.e_k)];
        if (at_exit.length() < static_cast<std::size_t>(k)) {
          ++violations;
        } else {
          for (int j = 0; j < k; ++j) {
            if (!(at_exit.at(j) == traj.final_word.at(j))) {
              ++violations;
              break;
            }
          }
        }
        if (rec.r_tilde < 0) ++violations;
        sum_r_tilde += rec.r_tilde;
      }
      // The fresh-vertex pieces tile disjoint parts of the range.
      if (sum_r_tilde > summary.horizon) ++violations;
      const auto r_n = static_cast<std::int64_t>(range.values.back());
      std::int64_t outside = summary.pre_e1_complement;
      if (!summary.records.empty() && outside < 0) ++violations;
      if (outside < 0) outside = 0;
      if (sum_r_tilde + outside > r_n) ++violations;
    }
  }
  const bool pass = violations == 0 && inspected >= kInvariantTrajectories;
  std::string detail = "trajectories=" + std::to_string(inspected) +
                       " violations=" + std::to_string(violations);
  return {7, "structural-invariants", pass, detail};
}

CriterionResult AcceptanceRunner::solver_consistency() {
  bool pass = true;
  std::string detail;

  const SolveResult& green = solve("green-deep group-z2z3");
  const double factorization = green.residuals.at("factorization");
  const double return_identity = green.residuals.at("return_identity");
  if (!(factorization < 1e-6 && return_identity < 1e-6)) pass = false;
  detail += "|G-FG|=" + fmt(factorization, 3) + " |G(1-U)-1|=" +
            fmt(return_identity, 3);

  const std::vector<std::string> labels = {
      "first-return-small counterexample", "group-range-small counterexample",
      "first-return-deep group-z2z3",      "green-deep group-z2z3",
      "xi1 counterexample",                "xi2 counterexample",
      "xi1 group-z2z3",                    "xi2 group-z2z3",
      "xi1 example1",                      "xi2 example1"};
  int non_monotone = 0;
  for (const std::string& label : labels) {
    if (!history_monotone(solve(label))) ++non_monotone;
  }
  if (non_monotone != 0) pass = false;
  detail += " non_monotone_histories=" + std::to_string(non_monotone);

  // xi < 1 with convergence evidence: the ladder increments decay
  // geometrically, so value + 100 * final_increment bounds the limit for any
  // decay ratio up to 100/101.
  double worst_xi = 0.0;
  for (const char* name : {kCounterexample, kGroupCase, kExample1}) {
    for (const char* kind : {"xi1", "xi2"}) {
      const SolveResult& x = solve(std::string(kind) + " " + name);
      const double inc = last_increment(x);
      std::vector<double> values = {x.value};
      for (const auto& [key, v] : x.extras) {
        if (key.rfind("base_vertex_", 0) == 0) values.push_back(v);
      }
      for (double v : values) {
        worst_xi = std::max(worst_xi, v);
        if (!(v < 1.0 && inc < 1e-4 && v + 100.0 * inc < 1.0)) pass = false;
      }
    }
  }
  detail += " max_xi=" + fmt(worst_xi);
  return {8, "solver-consistency", pass, detail};
}

CriterionResult AcceptanceRunner::determinism() {
  const Model& m = model(kCounterexample);
  const Scenario* scenario = find_scenario(kCounterexample);

  const StudyResult& first = study(kCounterexample);
  StudyOptions options;
  options.base_seed = kStudySeed;
  const StudyResult second = run_study(m, options);

  const std::string report_a = range_report_text(first.report, scenario);
  const std::string report_b = range_report_text(second.report, scenario);
  const std::string diag_a = diagnostics_text(first.diagnostics);
  const std::string diag_b = diagnostics_text(second.diagnostics);

  const SolveResult solve_a = first_return(m, FreeWord{}, 12, {});
  const SolveResult solve_b = first_return(m, FreeWord{}, 12, {});
  const std::string solve_text_a = solve_report_text(
      {"first-return", "()", "()", m.digest_hex(), solve_a});
  const std::string solve_text_b = solve_report_text(
      {"first-return", "()", "()", m.digest_hex(), solve_b});

  const bool pass =
      report_a == report_b && diag_a == diag_b && solve_text_a == solve_text_b;
  std::string detail = std::string("range_report ") +
                       (report_a == report_b ? "identical" : "differs") +
                       ", diagnostics " +
                       (diag_a == diag_b ? "identical" : "differs") +
                       ", solve_report " +
                       (solve_text_a == solve_text_b ? "identical" : "differs");
  return {9, "determinism", pass, detail};
}

CriterionResult AcceptanceRunner::run_criterion(int id) {
  switch (id) {
    case 1: return counterexample_range_bound();
    case 2: return group_formula_contradiction();
    case 3: return exact_enumeration_agreement();
    case 4: return rate_of_escape();
    case 5: return range_factorization_identity();
    case 6: return group_case_formula();
    case 7: return structural_invariants();
    case 8: return solver_consistency();
    case 9: return determinism();
    default:
      throw std::invalid_argument("criterion id out of range: " +
                                  std::to_string(id));
  }
}

std::vector<CriterionResult> AcceptanceRunner::run(std::span<const int> ids) {
  std::vector<CriterionResult> results;
  results.reserve(ids.size());
  for (int id : ids) results.push_back(run_criterion(id));
  return results;
}

std::vector<CriterionResult> AcceptanceRunner::run_all() {
  const int all[] = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  return run(all);
}

std::vector<int> AcceptanceRunner::criteria_for_scenario(
    const std::string& name) {
  if (name == kCounterexample) return {1, 2, 3, 4, 5, 7, 8, 9};
  if (name == kGroupCase) return {5, 6, 7, 8, 9};
  if (name == kExample1) return {7, 8, 9};
  return {};
}

}  // namespace fprw

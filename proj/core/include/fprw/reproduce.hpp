#ifndef FPRW_REPRODUCE_HPP
#define FPRW_REPRODUCE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fprw/estimate.hpp"
#include "fprw/exit.hpp"
#include "fprw/model.hpp"
#include "fprw/simulate.hpp"
#include "fprw/solve.hpp"

namespace fprw {

struct StudyOptions {
  std::size_t n_steps = 100'000;
  std::size_t n_replicas = 64;
  std::uint64_t base_seed = 42;
  int certification_margin = kDefaultCertificationMargin;
  bool include_uncertified = false;
};

// Output of the full pipeline: replicas, per-replica exit analysis,
// estimators, merged chain diagnostics.
struct StudyResult {
  std::vector<ReplicaResult> replicas;
  std::vector<ExitSummary> summaries;  // parallel to replicas; empty on failure
  RangeReport report;
  DiagnosticsReport diagnostics;
  double elapsed_seconds = 0.0;
};

StudyResult run_study(const Model& model, const StudyOptions& options);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values backing the verdict
};

// Reference acceptance suite on fixed seeds. Heavy inputs (replica studies,
// deep solver ladders) are cached so overlapping criteria share them; every
// criterion is self-contained, so results do not depend on run order.
class AcceptanceRunner {
 public:
  AcceptanceRunner() = default;

  CriterionResult run_criterion(int id);  // id in 1..9
  std::vector<CriterionResult> run(std::span<const int> ids);
  std::vector<CriterionResult> run_all();

  // Criteria exercised by `reproduce <scenario>`; empty for unknown names.
  static std::vector<int> criteria_for_scenario(const std::string& name);

 private:
  const Model& model(const std::string& scenario);
  const StudyResult& study(const std::string& scenario);
  const SolveResult& solve(const std::string& label);
  SolveResult compute_solve(const std::string& label);
  const std::vector<ReplicaResult>& oracle_replicas();

  CriterionResult counterexample_range_bound();
  CriterionResult group_formula_contradiction();
  CriterionResult exact_enumeration_agreement();
  CriterionResult rate_of_escape();
  CriterionResult range_factorization_identity();
  CriterionResult group_case_formula();
  CriterionResult structural_invariants();
  CriterionResult solver_consistency();
  CriterionResult determinism();

  std::map<std::string, Model> models_;
  std::map<std::string, StudyResult> studies_;
  std::map<std::string, SolveResult> solves_;
  std::vector<ReplicaResult> oracle_replicas_;
};

}  // namespace fprw

#endif

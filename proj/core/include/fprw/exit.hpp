#ifndef FPRW_EXIT_HPP
#define FPRW_EXIT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "fprw/simulate.hpp"
#include "fprw/word.hpp"

namespace fprw {

inline constexpr int kDefaultCertificationMargin = 5;

// Exit k of the walk: the time e_k from which the first k letters stay
// fixed, the stabilized letter W_k, and the region census of the shifted
// visited set psi_k. Census fields are -1 until psi_decomposition runs.
struct ExitRecord {
  int k = 0;
  std::int64_t e_k = 0;
  Letter w{FactorId::one, 0};
  std::int64_t psi_support_size = -1;
  std::int64_t r_tilde = -1;
  std::int64_t overhead = -1;
  bool certified = false;
};

struct ExitSummary {
  std::vector<ExitRecord> records;       // k = 1..k_of_n
  int k_of_n = 0;                        // maximal k with e_k <= N
  std::vector<std::int64_t> increments;  // i_k = e_k - e_{k-1}, e_0 = 0
  std::int64_t horizon = 0;              // N
  std::int64_t pre_e1_complement = -1;   // filled by psi_decomposition

  [[nodiscard]] int certified_count() const {
    int c = 0;
    for (const auto& r : records) c += r.certified ? 1 : 0;
    return c;
  }
};

// Prefix-stability exit times: e_k is the least m such that ||X_n|| >= k and
// prefix_k(X_n) = prefix_k(X_m) for every n in [m, N]. Records are certified
// when ||X_N|| >= k + certification_margin, so the stabilized prefix has
// margin extra letters of cover before the horizon cuts off.
ExitSummary exit_times(const Trajectory& traj,
                       int certification_margin = kDefaultCertificationMargin);

struct PsiOptions {
  bool include_uncertified = false;
  // Audit feature: also return the shifted support words. Costs a node scan
  // per k, so intended for short trajectories.
  bool retain_supports = false;
  std::size_t support_cap = 10'000;  // per k; larger supports stay counted only
};

struct PsiResult {
  std::vector<ExitRecord> records;  // censuses filled; certified prefix unless
                                    // include_uncertified extends it to k_of_n
  std::int64_t pre_e1_complement = -1;
  std::vector<std::vector<FreeWord>> supports;  // parallel to records when retained
};

// Region censuses of the shifted visited sets: for k >= 2, supp(psi_k) is
// the set visited by e_k inside C(X_{e_{k-1}}), shifted so X_{e_{k-1}}
// becomes o; r_tilde counts the members outside C(W_k) and overhead the
// members inside. For k = 1 the support is o plus the visited words opening
// with a letter of W_1's factor; visited words opening with the other factor
// are reported as pre_e1_complement.
PsiResult psi_decomposition(const Trajectory& traj, const ExitSummary& summary,
                            const PsiOptions& opts = {});

// Census for a single k; throws UncertifiedRecord when record k exists but
// is not certified.
ExitRecord psi_support(const Trajectory& traj, const ExitSummary& summary,
                       int k);

// exit_times followed by psi_decomposition, merged into one summary.
ExitSummary analyze_exits(const Trajectory& traj,
                          int certification_margin = kDefaultCertificationMargin,
                          const PsiOptions& opts = {});

struct DiagnosticsReport {
  std::int64_t n_records = 0;  // certified records with filled censuses
  std::int64_t alternation_violations = 0;
  std::int64_t nesting_violations = 0;
  // (factor of W_k, psi support size) -> count
  std::map<std::pair<int, std::int64_t>, std::int64_t> visit_histogram;
  double mean_r_tilde = 0.0;
  double mean_overhead = 0.0;
  // Prefix means over the inspected records; left empty by merge_diagnostics.
  std::vector<double> running_r_tilde;
  std::vector<double> running_overhead;
};

// Structural checks over the stabilized-letter chain; throws
// NoCertifiedRecords unless at least two certified records carry censuses.
DiagnosticsReport chain_diagnostics(const ExitSummary& summary);
DiagnosticsReport merge_diagnostics(const std::vector<DiagnosticsReport>& parts);

void export_exit_records(std::ostream& os, const Trajectory& traj,
                         const ExitSummary& summary);

}  // namespace fprw

#endif

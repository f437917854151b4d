#ifndef FPRW_ESTIMATE_HPP
#define FPRW_ESTIMATE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fprw/exit.hpp"
#include "fprw/simulate.hpp"

namespace fprw {

enum class EstimateMethod { across_replicas, batch_means };

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  EstimateMethod method = EstimateMethod::across_replicas;
};

// Mean and standard error of one value per replica. Empty input yields a
// NaN mean with zero samples; a single value yields zero error.
Estimate across_replicas(std::span<const double> values);

// Fallback for one long series: means of n_batches consecutive batches,
// treated as independent.
Estimate batch_means(std::span<const double> series, int n_batches = 32);

// R_N/N across successful replicas.
Estimate estimate_range(std::span<const ReplicaResult> replicas);

// (||X_N||/N, k(N)/e_{k(N)}). Summaries run parallel to replicas; the exit
// flavor uses replicas whose summary has at least one record.
std::pair<Estimate, Estimate> estimate_rate_of_escape(
    std::span<const ReplicaResult> replicas,
    std::span<const ExitSummary> summaries);

// Mean of R~_k pooled over qualifying records of all summaries; the error
// comes from the spread of per-replica means. Throws NoCertifiedRecords
// when no record qualifies.
Estimate estimate_r_tilde(std::span<const ExitSummary> summaries,
                          bool include_uncertified = false);

// Mean of O_k/k over the last decile of qualifying k in each summary.
// Throws NoCertifiedRecords when fewer than 10 records qualify overall.
double overhead_decay(std::span<const ExitSummary> summaries,
                      bool include_uncertified = false);

struct RangeReport {
  Estimate r_hat;         // asymptotic range, R_N/N
  Estimate ell_hat;       // rate of escape, ||X_N||/N
  Estimate ell_exit_hat;  // rate of escape, k(N)/e_{k(N)}
  Estimate r_tilde_hat;   // fresh vertices per stabilized letter
  double product_check = 0.0;  // |r_hat - r_tilde_hat * ell_hat|
  double product_gate = 0.0;   // 3 * combined std error for product_check
  double overhead_tail = 0.0;  // NaN when too few certified records

  std::string model_digest;
  std::uint64_t base_seed = 0;
  std::int64_t n_steps = 0;
  std::int64_t n_replicas = 0;  // successful
  std::int64_t n_failed = 0;
  int certification_margin = kDefaultCertificationMargin;
};

RangeReport build_range_report(const Model& model,
                               std::span<const ReplicaResult> replicas,
                               std::span<const ExitSummary> summaries,
                               std::uint64_t base_seed,
                               int certification_margin);

}  // namespace fprw

#endif

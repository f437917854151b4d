#include "fprw/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fprw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool qualifies(const ExitRecord& rec, bool include_uncertified) {
  return (rec.certified || include_uncertified) && rec.r_tilde >= 0;
}

}  // namespace

Estimate across_replicas(std::span<const double> values) {
  Estimate est;
  est.method = EstimateMethod::across_replicas;
  est.n_samples = static_cast<std::int64_t>(values.size());
  if (values.empty()) {
    est.mean = kNaN;
    return est;
  }
  double sum = 0.0;
  for (const double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (const double v : values) ss += (v - est.mean) * (v - est.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return est;
}

Estimate batch_means(std::span<const double> series, int n_batches) {
  if (n_batches < 1) n_batches = 1;
  const std::size_t n = series.size();
  const std::size_t width = std::max<std::size_t>(
      1, n / static_cast<std::size_t>(n_batches));
  std::vector<double> means;
  for (std::size_t lo = 0; lo + width <= n; lo += width) {
    double sum = 0.0;
    for (std::size_t i = lo; i < lo + width; ++i) sum += series[i];
    means.push_back(sum / static_cast<double>(width));
  }
  Estimate est = across_replicas(means);
  est.method = EstimateMethod::batch_means;
  return est;
}

Estimate estimate_range(std::span<const ReplicaResult> replicas) {
  std::vector<double> values;
  values.reserve(replicas.size());
  for (const ReplicaResult& rep : replicas) {
    if (!rep.error.empty()) continue;
    const std::size_t n = rep.trajectory.horizon();
    if (n == 0) continue;
    values.push_back(static_cast<double>(rep.range.values.back()) /
                     static_cast<double>(n));
  }
  return across_replicas(values);
}

std::pair<Estimate, Estimate> estimate_rate_of_escape(
    std::span<const ReplicaResult> replicas,
    std::span<const ExitSummary> summaries) {
  std::vector<double> word;
  std::vector<double> exit;
  for (std::size_t i = 0; i < replicas.size(); ++i) {
    const ReplicaResult& rep = replicas[i];
    if (!rep.error.empty()) continue;
    const std::size_t n = rep.trajectory.horizon();
    if (n == 0) continue;
    word.push_back(static_cast<double>(rep.trajectory.word_lengths.back()) /
                   static_cast<double>(n));
    if (i < summaries.size() && !summaries[i].records.empty()) {
      const ExitRecord& last = summaries[i].records.back();
      exit.push_back(static_cast<double>(last.k) /
                     static_cast<double>(last.e_k));
    }
  }
  return {across_replicas(word), across_replicas(exit)};
}

Estimate estimate_r_tilde(std::span<const ExitSummary> summaries,
                          bool include_uncertified) {
  double total = 0.0;
  std::int64_t count = 0;
  std::vector<double> replica_means;
  for (const ExitSummary& summary : summaries) {
    double sum = 0.0;
    std::int64_t n = 0;
    for (const ExitRecord& rec : summary.records) {
      if (!qualifies(rec, include_uncertified)) continue;
      sum += static_cast<double>(rec.r_tilde);
      ++n;
    }
    if (n == 0) continue;
    total += sum;
    count += n;
    replica_means.push_back(sum / static_cast<double>(n));
  }
  if (count == 0) {
    throw NoCertifiedRecords("no qualifying exit records for r-tilde");
  }
  Estimate est = across_replicas(replica_means);
  est.mean = total / static_cast<double>(count);
  est.n_samples = count;
  return est;
}

double overhead_decay(std::span<const ExitSummary> summaries,
                      bool include_uncertified) {
  std::vector<double> tail;
  std::int64_t qualifying = 0;
  for (const ExitSummary& summary : summaries) {
    std::vector<const ExitRecord*> recs;
    for (const ExitRecord& rec : summary.records) {
      if (qualifies(rec, include_uncertified)) recs.push_back(&rec);
    }
    qualifying += static_cast<std::int64_t>(recs.size());
    if (recs.empty()) continue;
    const std::size_t start = recs.size() - std::max<std::size_t>(1, recs.size() / 10);
    for (std::size_t i = start; i < recs.size(); ++i) {
      tail.push_back(static_cast<double>(recs[i]->overhead) /
                     static_cast<double>(recs[i]->k));
    }
  }
  if (qualifying < 10) {
    throw NoCertifiedRecords("overhead decay needs at least 10 records, have " +
                             std::to_string(qualifying));
  }
  double sum = 0.0;
  for (const double v : tail) sum += v;
  return sum / static_cast<double>(tail.size());
}

RangeReport build_range_report(const Model& model,
                               std::span<const ReplicaResult> replicas,
                               std::span<const ExitSummary> summaries,
                               std::uint64_t base_seed,
                               int certification_margin) {
  RangeReport report;
  report.model_digest = model.digest_hex();
  report.base_seed = base_seed;
  report.certification_margin = certification_margin;
  for (const ReplicaResult& rep : replicas) {
    if (rep.error.empty()) {
      ++report.n_replicas;
      report.n_steps = static_cast<std::int64_t>(rep.trajectory.horizon());
    } else {
      ++report.n_failed;
    }
  }

  report.r_hat = estimate_range(replicas);
  const auto [ell, ell_exit] = estimate_rate_of_escape(replicas, summaries);
  report.ell_hat = ell;
  report.ell_exit_hat = ell_exit;
  try {
    report.r_tilde_hat = estimate_r_tilde(summaries);
  } catch (const NoCertifiedRecords&) {
    report.r_tilde_hat = Estimate{kNaN, 0.0, 0, EstimateMethod::across_replicas};
  }
  try {
    report.overhead_tail = overhead_decay(summaries);
  } catch (const NoCertifiedRecords&) {
    report.overhead_tail = kNaN;
  }

  const double r = report.r_hat.mean;
  const double rt = report.r_tilde_hat.mean;
  const double el = report.ell_hat.mean;
  report.product_check = std::abs(r - rt * el);
  report.product_gate =
      3.0 * std::sqrt(report.r_hat.std_error * report.r_hat.std_error +
                      el * el * report.r_tilde_hat.std_error *
                          report.r_tilde_hat.std_error +
                      rt * rt * report.ell_hat.std_error *
                          report.ell_hat.std_error);
  return report;
}

}  // namespace fprw

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "fprw/estimate.hpp"
#include "fprw/model.hpp"
#include "fprw/scenario.hpp"
#include "fprw/simulate.hpp"

using Catch::Matchers::WithinAbs;
using fprw::Estimate;

TEST_CASE("across-replica mean and standard error", "[estimate]") {
  const std::vector<double> values{1.0, 2.0, 3.0, 4.0};
  const Estimate e = fprw::across_replicas(values);
  CHECK(e.n_samples == 4);
  CHECK_THAT(e.mean, WithinAbs(2.5, 1e-15));
  // Sample standard deviation sqrt(5/3) over sqrt(4).
  CHECK_THAT(e.std_error, WithinAbs(std::sqrt(5.0 / 3.0) / 2.0, 1e-12));
  CHECK(e.method == fprw::EstimateMethod::across_replicas);
}

TEST_CASE("degenerate replica sets", "[estimate]") {
  const Estimate none = fprw::across_replicas({});
  CHECK(none.n_samples == 0);
  CHECK(std::isnan(none.mean));
  CHECK(none.std_error == 0.0);

  const std::vector<double> one{7.25};
  const Estimate single = fprw::across_replicas(one);
  CHECK(single.n_samples == 1);
  CHECK_THAT(single.mean, WithinAbs(7.25, 1e-15));
  CHECK(single.std_error == 0.0);

  const std::vector<double> constant{3.0, 3.0, 3.0};
  CHECK(fprw::across_replicas(constant).std_error == 0.0);
}

TEST_CASE("batch means fall back for one long series", "[estimate]") {
  std::vector<double> series(320, 1.5);
  const Estimate e = fprw::batch_means(series, 32);
  CHECK(e.method == fprw::EstimateMethod::batch_means);
  CHECK_THAT(e.mean, WithinAbs(1.5, 1e-15));
  CHECK(e.std_error == 0.0);
  CHECK(e.n_samples == 32);

  // Alternating series: every batch of 10 has the same mean.
  for (std::size_t i = 0; i < series.size(); ++i) {
    series[i] = i % 2 == 0 ? 1.0 : 2.0;
  }
  CHECK_THAT(fprw::batch_means(series, 32).mean, WithinAbs(1.5, 1e-15));
}

TEST_CASE("the pooled estimators need certified records", "[estimate]") {
  CHECK_THROWS_AS(fprw::estimate_r_tilde({}), fprw::NoCertifiedRecords);
  CHECK_THROWS_AS(fprw::overhead_decay({}), fprw::NoCertifiedRecords);

  const std::vector<fprw::ExitSummary> empty_summaries(3);
  CHECK_THROWS_AS(fprw::estimate_r_tilde(empty_summaries),
                  fprw::NoCertifiedRecords);
}

TEST_CASE("range report wires the study estimates together", "[estimate]") {
  const fprw::Model model{fprw::find_scenario("counterexample")->spec};
  const auto replicas = fprw::run_replicas(model, 4'000, 12, 99);
  std::vector<fprw::ExitSummary> summaries;
  summaries.reserve(replicas.size());
  for (const auto& rep : replicas) {
    summaries.push_back(fprw::analyze_exits(rep.trajectory));
  }

  const fprw::RangeReport report =
      fprw::build_range_report(model, replicas, summaries, 99, 5);

  CHECK(report.model_digest == model.digest_hex());
  CHECK(report.base_seed == 99);
  CHECK(report.n_steps == 4'000);
  CHECK(report.n_replicas == 12);
  CHECK(report.n_failed == 0);

  // Loose sanity gates; the tight statistical gates live in the acceptance
  // suite which runs the reference replica counts.
  CHECK_THAT(report.r_hat.mean, WithinAbs(0.625, 0.02));
  CHECK_THAT(report.ell_hat.mean, WithinAbs(0.5, 0.02));
  CHECK_THAT(report.ell_exit_hat.mean, WithinAbs(0.5, 0.02));
  CHECK_THAT(report.r_tilde_hat.mean, WithinAbs(1.25, 0.03));
  CHECK(report.r_hat.std_error > 0.0);
  CHECK(report.product_check <= report.product_gate);
  CHECK(report.overhead_tail >= 0.0);

  const Estimate direct = fprw::estimate_range(replicas);
  CHECK_THAT(report.r_hat.mean, WithinAbs(direct.mean, 1e-15));

  const auto [ell_word, ell_exit] =
      fprw::estimate_rate_of_escape(replicas, summaries);
  CHECK_THAT(report.ell_hat.mean, WithinAbs(ell_word.mean, 1e-15));
  CHECK_THAT(report.ell_exit_hat.mean, WithinAbs(ell_exit.mean, 1e-15));
}

TEST_CASE("uncertified records can be pooled on request", "[estimate]") {
  const fprw::Model model{fprw::find_scenario("group-z2z3")->spec};
  const auto replicas = fprw::run_replicas(model, 600, 4, 5);
  std::vector<fprw::ExitSummary> summaries;
  fprw::PsiOptions opts;
  opts.include_uncertified = true;
  for (const auto& rep : replicas) {
    summaries.push_back(fprw::analyze_exits(rep.trajectory, 5, opts));
  }

  // n_samples counts pooled records; the uncertified tail only adds to it.
  const Estimate certified = fprw::estimate_r_tilde(summaries, false);
  const Estimate all = fprw::estimate_r_tilde(summaries, true);
  CHECK(certified.n_samples > 0);
  CHECK(all.n_samples >= certified.n_samples + 4);
  CHECK(all.mean > 0.0);
  CHECK(certified.mean > 0.0);
}

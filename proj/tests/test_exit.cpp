#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "fprw/exit.hpp"
#include "fprw/model.hpp"
#include "fprw/scenario.hpp"
#include "fprw/simulate.hpp"
#include "fprw/word.hpp"

using Catch::Matchers::WithinAbs;
using fprw::ExitRecord;
using fprw::ExitSummary;
using fprw::FactorId;
using fprw::FreeWord;
using fprw::Letter;
using fprw::Model;
using fprw::Trajectory;

namespace {

const Letter kA{FactorId::one, 0};
const Letter kB{FactorId::two, 0};
const Letter kC{FactorId::two, 1};

// o, b, c, b, ba, bab: the first letter flips twice before settling.
Trajectory hand_trajectory() {
  Trajectory traj;
  traj.seed = 0;
  traj.model_digest = "hand";
  traj.root1 = 0;
  traj.root2 = 0;
  traj.steps = {{FactorId::two, 1},
                {FactorId::two, 2},
                {FactorId::two, 1},
                {FactorId::one, 1},
                {FactorId::two, 1}};
  traj.word_lengths = {0, 1, 1, 1, 2, 3};
  traj.final_word = FreeWord{{kB, kA, kB}};
  return traj;
}

// Definition scan: least m from which the length-k prefix holds to the end.
std::optional<std::int64_t> oracle_exit_time(
    const std::vector<FreeWord>& words, int k) {
  const std::int64_t n_max = static_cast<std::int64_t>(words.size()) - 1;
  for (std::int64_t m = 0; m <= n_max; ++m) {
    bool ok = true;
    for (std::int64_t n = m; ok && n <= n_max; ++n) {
      ok = words[n].length() >= static_cast<std::size_t>(k) &&
           words[n].prefix(k) == words[m].prefix(k);
    }
    if (ok) return m;
  }
  return std::nullopt;
}

struct OracleCensus {
  std::set<FreeWord> support;
  std::int64_t r_tilde = 0;
  std::int64_t overhead = 0;
};

// Set-operations reading of the census definitions, independent of the
// trie-and-prefix-counting implementation.
OracleCensus oracle_census(const std::vector<FreeWord>& words,
                           const ExitSummary& summary, int k) {
  OracleCensus census;
  const ExitRecord& rec = summary.records[k - 1];
  const Letter w_k = rec.w;
  const FreeWord w_k_word{{w_k}};

  if (k == 1) {
    census.support.insert(FreeWord{});
    for (std::int64_t n = 0; n <= rec.e_k; ++n) {
      const FreeWord& u = words[n];
      if (!u.empty() && u.at(0).factor == w_k.factor) census.support.insert(u);
    }
  } else {
    const std::int64_t e_prev = summary.records[k - 2].e_k;
    const FreeWord base = words[e_prev];
    for (std::int64_t n = 0; n <= rec.e_k; ++n) {
      if (fprw::in_cone(base, words[n])) {
        census.support.insert(fprw::shift(base, words[n]));
      }
    }
  }
  for (const FreeWord& s : census.support) {
    (fprw::in_cone(w_k_word, s) ? census.overhead : census.r_tilde) += 1;
  }
  return census;
}

std::int64_t oracle_pre_e1_complement(const std::vector<FreeWord>& words,
                                      const ExitSummary& summary) {
  if (summary.records.empty()) return -1;
  std::set<FreeWord> off_factor;
  const FactorId f = summary.records[0].w.factor;
  for (std::int64_t n = 0; n <= summary.records[0].e_k; ++n) {
    const FreeWord& u = words[n];
    if (!u.empty() && u.at(0).factor != f) off_factor.insert(u);
  }
  return static_cast<std::int64_t>(off_factor.size());
}

}  // namespace

TEST_CASE("exit times of the hand trajectory", "[exit]") {
  const Trajectory traj = hand_trajectory();
  const ExitSummary summary = fprw::exit_times(traj, 0);

  REQUIRE(summary.k_of_n == 3);
  REQUIRE(summary.records.size() == 3);
  CHECK(summary.horizon == 5);
  CHECK(summary.records[0].e_k == 3);
  CHECK(summary.records[1].e_k == 4);
  CHECK(summary.records[2].e_k == 5);
  CHECK(summary.records[0].w == kB);
  CHECK(summary.records[1].w == kA);
  CHECK(summary.records[2].w == kB);
  CHECK(summary.increments == std::vector<std::int64_t>{3, 1, 1});
  for (const auto& rec : summary.records) CHECK(rec.certified);
  CHECK(summary.certified_count() == 3);
}

TEST_CASE("certification margin disqualifies shallow prefixes", "[exit]") {
  const Trajectory traj = hand_trajectory();
  // Final length 3: with margin 2 only k = 1 keeps two letters of cover.
  const ExitSummary guarded = fprw::exit_times(traj, 2);
  REQUIRE(guarded.records.size() == 3);
  CHECK(guarded.records[0].certified);
  CHECK_FALSE(guarded.records[1].certified);
  CHECK_FALSE(guarded.records[2].certified);

  const ExitSummary strict = fprw::exit_times(traj, 5);
  CHECK(strict.certified_count() == 0);
  CHECK_THROWS_AS(fprw::chain_diagnostics(strict), fprw::NoCertifiedRecords);
  CHECK_THROWS_AS(fprw::psi_support(traj, strict, 1),
                  fprw::UncertifiedRecord);
}

TEST_CASE("census of the hand trajectory", "[exit]") {
  const Trajectory traj = hand_trajectory();
  fprw::PsiOptions opts;
  opts.retain_supports = true;
  const fprw::PsiResult psi =
      fprw::psi_decomposition(traj, fprw::exit_times(traj, 0), opts);

  REQUIRE(psi.records.size() == 3);
  CHECK(psi.pre_e1_complement == 0);

  CHECK(psi.records[0].psi_support_size == 3);
  CHECK(psi.records[0].r_tilde == 2);
  CHECK(psi.records[0].overhead == 1);
  CHECK(psi.records[1].psi_support_size == 2);
  CHECK(psi.records[1].r_tilde == 1);
  CHECK(psi.records[1].overhead == 1);
  CHECK(psi.records[2].psi_support_size == 2);
  CHECK(psi.records[2].r_tilde == 1);
  CHECK(psi.records[2].overhead == 1);

  REQUIRE(psi.supports.size() == 3);
  const std::set<FreeWord> s1(psi.supports[0].begin(), psi.supports[0].end());
  CHECK(s1 == std::set<FreeWord>{FreeWord{}, FreeWord{{kB}}, FreeWord{{kC}}});
  const std::set<FreeWord> s2(psi.supports[1].begin(), psi.supports[1].end());
  CHECK(s2 == std::set<FreeWord>{FreeWord{}, FreeWord{{kA}}});
  const std::set<FreeWord> s3(psi.supports[2].begin(), psi.supports[2].end());
  CHECK(s3 == std::set<FreeWord>{FreeWord{}, FreeWord{{kB}}});
}

TEST_CASE("exit times match the definition scan", "[exit]") {
  for (const char* name : {"counterexample", "group-z2z3", "example1"}) {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      CAPTURE(name, seed);
      const Model model{fprw::find_scenario(name)->spec};
      const Trajectory traj = fprw::run(model, 160, seed);
      const auto words = fprw::replay(traj);
      const ExitSummary summary = fprw::exit_times(traj, 0);

      CHECK(summary.k_of_n ==
            static_cast<int>(traj.final_word.length()));
      for (int k = 1; k <= summary.k_of_n; ++k) {
        const auto expected = oracle_exit_time(words, k);
        REQUIRE(expected.has_value());
        CHECK(summary.records[k - 1].e_k == *expected);
        CHECK(summary.records[k - 1].w == traj.final_word.at(k - 1));
      }
      CHECK_FALSE(oracle_exit_time(words, summary.k_of_n + 1).has_value());
    }
  }
}

TEST_CASE("censuses match the set-operations oracle", "[exit]") {
  for (const char* name : {"counterexample", "group-z2z3", "example1"}) {
    for (std::uint64_t seed : {21u, 22u}) {
      CAPTURE(name, seed);
      const Model model{fprw::find_scenario(name)->spec};
      const Trajectory traj = fprw::run(model, 150, seed);
      const auto words = fprw::replay(traj);
      const ExitSummary summary = fprw::analyze_exits(traj, 0);

      CHECK(summary.pre_e1_complement ==
            oracle_pre_e1_complement(words, summary));
      for (int k = 1; k <= summary.k_of_n; ++k) {
        CAPTURE(k);
        const OracleCensus expected = oracle_census(words, summary, k);
        const ExitRecord& rec = summary.records[k - 1];
        CHECK(rec.psi_support_size ==
              static_cast<std::int64_t>(expected.support.size()));
        CHECK(rec.r_tilde == expected.r_tilde);
        CHECK(rec.overhead == expected.overhead);

        const ExitRecord single = fprw::psi_support(traj, summary, k);
        CHECK(single.psi_support_size == rec.psi_support_size);
        CHECK(single.r_tilde == rec.r_tilde);
        CHECK(single.overhead == rec.overhead);
      }
    }
  }
}

TEST_CASE("retained supports equal the oracle sets", "[exit]") {
  const Model model{fprw::find_scenario("example1")->spec};
  const Trajectory traj = fprw::run(model, 120, 33);
  const auto words = fprw::replay(traj);
  const ExitSummary summary = fprw::exit_times(traj, 0);

  fprw::PsiOptions opts;
  opts.retain_supports = true;
  const fprw::PsiResult psi = fprw::psi_decomposition(traj, summary, opts);
  REQUIRE(psi.supports.size() == psi.records.size());
  for (std::size_t i = 0; i < psi.records.size(); ++i) {
    CAPTURE(i);
    const OracleCensus expected =
        oracle_census(words, summary, psi.records[i].k);
    const std::set<FreeWord> got(psi.supports[i].begin(),
                                 psi.supports[i].end());
    CHECK(got == expected.support);
  }
}

TEST_CASE("uncertified records are excluded unless requested", "[exit]") {
  const Model model{fprw::find_scenario("group-z2z3")->spec};
  const Trajectory traj = fprw::run(model, 400, 9);
  const ExitSummary all = fprw::analyze_exits(traj, 0);
  const ExitSummary certified_only =
      fprw::analyze_exits(traj, fprw::kDefaultCertificationMargin);

  fprw::PsiOptions extend;
  extend.include_uncertified = true;
  const ExitSummary extended =
      fprw::analyze_exits(traj, fprw::kDefaultCertificationMargin, extend);

  // Censuses stop at the certified prefix by default.
  std::size_t filled = 0;
  for (const auto& rec : certified_only.records) {
    if (rec.psi_support_size >= 0) ++filled;
  }
  CHECK(filled ==
        static_cast<std::size_t>(certified_only.certified_count()));

  // Extending fills every record, and the values agree with margin 0.
  REQUIRE(extended.records.size() == all.records.size());
  for (std::size_t i = 0; i < extended.records.size(); ++i) {
    CHECK(extended.records[i].psi_support_size ==
          all.records[i].psi_support_size);
    CHECK(extended.records[i].r_tilde == all.records[i].r_tilde);
  }
}

TEST_CASE("chain diagnostics of the hand trajectory", "[exit]") {
  const Trajectory traj = hand_trajectory();
  const ExitSummary summary = fprw::analyze_exits(traj, 0);
  const fprw::DiagnosticsReport diag = fprw::chain_diagnostics(summary);

  CHECK(diag.n_records == 3);
  CHECK(diag.alternation_violations == 0);
  CHECK(diag.nesting_violations == 0);
  CHECK_THAT(diag.mean_r_tilde, WithinAbs(4.0 / 3.0, 1e-15));
  CHECK_THAT(diag.mean_overhead, WithinAbs(1.0, 1e-15));
  REQUIRE(diag.running_r_tilde.size() == 3);
  CHECK_THAT(diag.running_r_tilde[0], WithinAbs(2.0, 1e-15));
  CHECK_THAT(diag.running_r_tilde[1], WithinAbs(1.5, 1e-15));
  CHECK_THAT(diag.running_r_tilde[2], WithinAbs(4.0 / 3.0, 1e-15));

  const std::map<std::pair<int, std::int64_t>, std::int64_t> expected_hist{
      {{2, 3}, 1}, {{1, 2}, 1}, {{2, 2}, 1}};
  CHECK(diag.visit_histogram == expected_hist);
}

TEST_CASE("merging diagnostics pools counts and weights means", "[exit]") {
  const Trajectory traj = hand_trajectory();
  const fprw::DiagnosticsReport one =
      fprw::chain_diagnostics(fprw::analyze_exits(traj, 0));
  const fprw::DiagnosticsReport merged = fprw::merge_diagnostics({one, one});

  CHECK(merged.n_records == 6);
  CHECK_THAT(merged.mean_r_tilde, WithinAbs(one.mean_r_tilde, 1e-15));
  CHECK(merged.visit_histogram.at({2, 3}) == 2);
  CHECK(merged.running_r_tilde.empty());

  const fprw::DiagnosticsReport empty = fprw::merge_diagnostics({});
  CHECK(empty.n_records == 0);
}

TEST_CASE("exit record export lists one row per record", "[exit]") {
  const Trajectory traj = hand_trajectory();
  const ExitSummary summary = fprw::analyze_exits(traj, 0);
  std::ostringstream os;
  fprw::export_exit_records(os, traj, summary);
  const std::string text = os.str();

  CHECK(text.find("k,e_k,w_factor,w_vertex,psi_size,r_tilde,overhead,certified") !=
        std::string::npos);
  // Roots are 0, so letter index 0 exports as vertex 1.
  CHECK(text.find("1,3,2,1,3,2,1,1") != std::string::npos);
  CHECK(text.find("2,4,1,1,2,1,1,1") != std::string::npos);
  CHECK(text.find("3,5,2,1,2,1,1,1") != std::string::npos);
}

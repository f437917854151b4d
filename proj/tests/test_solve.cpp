#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "fprw/model.hpp"
#include "fprw/scenario.hpp"
#include "fprw/solve.hpp"
#include "fprw/word.hpp"

using Catch::Matchers::WithinAbs;
using fprw::BoundDirection;
using fprw::FactorId;
using fprw::FreeWord;
using fprw::Model;
using fprw::SolveOptions;
using fprw::SolveResult;

namespace {

Model scenario_model(const std::string& name) {
  return Model{fprw::find_scenario(name)->spec};
}

bool monotone(const SolveResult& r) {
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    const double prev = r.history[i - 1].second;
    const double next = r.history[i].second;
    if (r.direction == BoundDirection::lower ? next < prev - 1e-12
                                             : next > prev + 1e-12) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("absorbing-cycle walk solves exactly", "[solve]") {
  const Model model = scenario_model("counterexample");

  const SolveResult u = fprw::first_return(model, FreeWord{}, 12, {});
  CHECK(u.value == 0.0);
  CHECK(u.converged);
  CHECK(u.truncation == 12);
  CHECK(u.direction == BoundDirection::lower);

  const SolveResult g =
      fprw::truncated_green(model, FreeWord{}, FreeWord{}, 12, {});
  CHECK_THAT(g.value, WithinAbs(1.0, 1e-12));
  CHECK_THAT(g.residuals.at("factorization"), WithinAbs(0.0, 1e-12));
  CHECK_THAT(g.residuals.at("return_identity"), WithinAbs(0.0, 1e-12));

  const SolveResult x1 = fprw::xi(model, FactorId::one, 12, {});
  CHECK_THAT(x1.value, WithinAbs(0.0, 1e-12));
  const SolveResult x2 = fprw::xi(model, FactorId::two, 12, {});
  CHECK_THAT(x2.value, WithinAbs(0.5, 1e-12));
  CHECK_THAT(x2.residuals.at("base_word_spread"), WithinAbs(0.0, 1e-12));

  const SolveResult gr = fprw::group_case_range(model, 12, {});
  CHECK_THAT(gr.value, WithinAbs(1.0, 1e-12));
  CHECK(gr.direction == BoundDirection::upper);
  CHECK_THAT(gr.extras.at("u_oo"), WithinAbs(0.0, 1e-12));
}

TEST_CASE("two-and-three-element group walk at pinned cutoffs", "[solve]") {
  // Reference values from an independent dense linear-algebra evaluation of
  // the same truncated systems.
  const Model model = scenario_model("group-z2z3");

  CHECK_THAT(fprw::first_return(model, FreeWord{}, 10, {}).value,
             WithinAbs(0.701787234043, 1e-9));
  CHECK_THAT(fprw::first_return(model, FreeWord{}, 20, {}).value,
             WithinAbs(0.708133135862, 1e-9));
  CHECK_THAT(fprw::xi(model, FactorId::two, 10, {}).value,
             WithinAbs(0.794871794871767, 1e-9));

  const SolveResult g =
      fprw::truncated_green(model, FreeWord{}, FreeWord{}, 20, {});
  CHECK_THAT(g.value, WithinAbs(3.426219701068, 1e-9));

  const FreeWord a = FreeWord::parse("1:0");
  const SolveResult ga = fprw::truncated_green(model, a, FreeWord{}, 20, {});
  CHECK_THAT(ga.extras.at("f_xy"), WithinAbs(0.749816760322, 1e-9));
}

TEST_CASE("deepening cutoffs approach the algebraic limits", "[solve]") {
  const Model model = scenario_model("group-z2z3");
  SolveOptions opts;
  opts.history_from = 5;

  const SolveResult u = fprw::first_return(model, FreeWord{}, 30, opts);
  CHECK_THAT(u.value, WithinAbs(17.0 / 24.0, 1e-3));
  CHECK(u.history.front().first == 5);
  CHECK(u.history.back().first == 30);
  CHECK(u.history.size() == 26);
  CHECK(monotone(u));
  CHECK(u.history.back().second > u.history.front().second);

  const SolveResult g =
      fprw::truncated_green(model, FreeWord{}, FreeWord{}, 30, opts);
  CHECK_THAT(g.value, WithinAbs(24.0 / 7.0, 1e-2));
  CHECK(monotone(g));

  const SolveResult x1 = fprw::xi(model, FactorId::one, 25, opts);
  CHECK_THAT(x1.value, WithinAbs(0.75, 1e-3));
  const SolveResult x2 = fprw::xi(model, FactorId::two, 25, opts);
  CHECK_THAT(x2.value, WithinAbs(0.8, 1e-3));
  CHECK(x1.value < 1.0);
  CHECK(x2.value < 1.0);

  const SolveResult gr = fprw::group_case_range(model, 30, opts);
  CHECK_THAT(gr.value, WithinAbs(7.0 / 24.0, 1e-3));
  CHECK(monotone(gr));
  // Upper bounds shrink: the deepest cutoff gives the tightest value.
  CHECK(gr.history.back().second <= gr.history.front().second);
}

TEST_CASE("elimination and sweep routes agree", "[solve]") {
  SolveOptions sweeps;
  sweeps.method = fprw::SolveMethod::sweeps;

  for (const char* name : {"counterexample", "group-z2z3", "example1"}) {
    CAPTURE(name);
    const Model model = scenario_model(name);

    const double u_elim = fprw::first_return(model, FreeWord{}, 10, {}).value;
    const double u_sweep =
        fprw::first_return(model, FreeWord{}, 10, sweeps).value;
    CHECK_THAT(u_elim, WithinAbs(u_sweep, 1e-8));

    const double x_elim = fprw::xi(model, FactorId::two, 8, {}).value;
    const double x_sweep = fprw::xi(model, FactorId::two, 8, sweeps).value;
    CHECK_THAT(x_elim, WithinAbs(x_sweep, 1e-8));

    const double g_elim =
        fprw::truncated_green(model, FreeWord{}, FreeWord{}, 10, {}).value;
    const double g_sweep =
        fprw::truncated_green(model, FreeWord{}, FreeWord{}, 10, sweeps).value;
    CHECK_THAT(g_elim, WithinAbs(g_sweep, 1e-8));
    CHECK(fprw::first_return(model, FreeWord{}, 10, sweeps).sweeps_converged);
  }
}

TEST_CASE("hitting probabilities with known values", "[solve]") {
  const Model ce = scenario_model("counterexample");
  // The first step decides the first letter's factor for good: no drop move
  // ever fires, so the factor-two share is exactly the factor-two weight.
  const auto opens_factor_two = [](const FreeWord& w) {
    return !w.empty() && w.at(0).factor == FactorId::two;
  };
  const SolveResult h =
      fprw::hitting_probability(ce, FreeWord{}, opens_factor_two, 12, {});
  CHECK_THAT(h.value, WithinAbs(0.5, 1e-12));

  // A target containing the start is hit immediately.
  const SolveResult at_start = fprw::hitting_probability(
      ce, FreeWord::parse("2:0"), opens_factor_two, 12, {});
  CHECK_THAT(at_start.value, WithinAbs(1.0, 1e-12));

  // Transient with positive speed: some word of length 2 is reached a.s.
  const Model z = scenario_model("group-z2z3");
  const SolveResult len2 = fprw::hitting_probability(
      z, FreeWord{}, [](const FreeWord& w) { return w.length() >= 2; }, 12,
      {});
  CHECK(len2.value > 0.9999);
  CHECK(len2.value <= 1.0 + 1e-12);
}

TEST_CASE("solver guards its domain", "[solve]") {
  const Model model = scenario_model("group-z2z3");

  const FreeWord deep = FreeWord::parse("2:0.1:0.2:1");
  CHECK_THROWS_AS(
      fprw::truncated_green(model, deep, FreeWord{}, 2, {}),
      fprw::TruncationTooSmall);

  SolveOptions tiny;
  tiny.state_budget = 100;
  CHECK_THROWS_AS(fprw::first_return(model, FreeWord{}, 20, tiny),
                  fprw::StateBudgetExceeded);
}

TEST_CASE("xi reports one value per base letter", "[solve]") {
  const Model model = scenario_model("group-z2z3");
  const SolveResult x2 = fprw::xi(model, FactorId::two, 15, {});
  // Both factor-two letters are symmetric here, so the spread vanishes.
  CHECK(x2.extras.count("base_vertex_1") == 1);
  CHECK(x2.extras.count("base_vertex_2") == 1);
  CHECK_THAT(x2.extras.at("base_vertex_1"),
             WithinAbs(x2.extras.at("base_vertex_2"), 1e-12));
  CHECK_THAT(x2.residuals.at("base_word_spread"), WithinAbs(0.0, 1e-12));
}

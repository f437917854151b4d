#include "fprw/scenario.hpp"

namespace fprw {
namespace {

ModelSpec make_counterexample() {
  ModelSpec spec;
  spec.factor1.size = 2;
  spec.factor1.root = 0;
  spec.factor1.matrix = {{0.0, 1.0}, {0.0, 1.0}};
  spec.factor1.labels = {"o1", "a"};
  spec.factor2.size = 3;
  spec.factor2.root = 0;
  spec.factor2.matrix = {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}};
  spec.factor2.labels = {"o2", "b", "c"};
  spec.alpha = 0.5;
  spec.claims.transient = true;
  spec.claims.green_radius_gt_one = true;
  return spec;
}

ModelSpec make_group_z2z3() {
  ModelSpec spec;
  spec.factor1.size = 2;
  spec.factor1.root = 0;
  spec.factor1.matrix = {{0.0, 1.0}, {1.0, 0.0}};
  spec.factor1.labels = {"o1", "a"};
  spec.factor2.size = 3;
  spec.factor2.root = 0;
  spec.factor2.matrix = {{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}};
  spec.factor2.labels = {"o2", "b", "c"};
  spec.alpha = 0.5;
  spec.claims.transient = true;
  spec.claims.green_radius_gt_one = true;
  return spec;
}

ModelSpec make_example1() {
  ModelSpec spec;
  spec.factor1.size = 2;
  spec.factor1.root = 0;
  spec.factor1.matrix = {{0.0, 1.0}, {1.0, 0.0}};
  spec.factor1.labels = {"o1", "a"};
  spec.factor2.size = 3;
  spec.factor2.root = 0;
  spec.factor2.matrix = {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.0}};
  spec.factor2.labels = {"o2", "b", "c"};
  spec.alpha = 0.5;
  spec.claims.transient = true;
  spec.claims.green_radius_gt_one = true;
  return spec;
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> out;

  {
    Scenario s;
    s.name = "counterexample";
    s.spec = make_counterexample();
    s.notes =
        "Non-reversible walk whose word length never decreases: factor one "
        "absorbs at a, factor two cycles b <-> c without returning to its "
        "root. The first-return probability U(o,o) is 0, so the group-case "
        "formula predicts asymptotic range 1, but the true range constant is "
        "5/8.";
    s.expected = {
        {"range_constant", {0.625, "renewal analysis, exact"}},
        {"speed", {0.5, "E|X_n| = (n+1)/2 exactly"}},
        {"fresh_vertex_rate", {1.25, "exact, 5/8 divided by 1/2"}},
        {"first_return", {0.0, "walk never revisits the origin"}},
        {"green_at_root", {1.0, "G(o,o) = 1/(1-U)"}},
        {"group_case_range", {1.0, "1 - U(o,o); wrong for this walk"}},
        {"xi1", {0.0, "factor-one cones are never left"}},
        {"xi2", {0.5, "replacement b -> c escapes the cone of b"}},
    };
    out.push_back(std::move(s));
  }

  {
    Scenario s;
    s.name = "group-z2z3";
    s.spec = make_group_z2z3();
    s.notes =
        "Simple random walk on the free product of a two-element group and a "
        "three-element group. Vertex-transitive, so the range constant equals "
        "1 - U(o,o) = 7/24.";
    s.expected = {
        {"range_constant", {7.0 / 24.0, "group case, 1 - U(o,o)"}},
        {"first_return", {17.0 / 24.0, "algebraic first-passage system"}},
        {"green_at_root", {24.0 / 7.0, "G(o,o) = 1/(1-U)"}},
        {"group_case_range", {7.0 / 24.0, "valid here"}},
        {"xi1", {0.75, "first-passage f_a = 3/4"}},
        {"xi2", {0.8, "first-passage system for the three-cycle"}},
    };
    out.push_back(std::move(s));
  }

  {
    Scenario s;
    s.name = "example1";
    s.spec = make_example1();
    s.notes =
        "Free product of a single edge and a directed three-cycle with one "
        "backtracking edge, with the uniform step weight 1/2 on each factor. "
        "Used for exercising exit-time and cone diagnostics; no closed-form "
        "constants are pinned.";
    out.push_back(std::move(s));
  }

  return out;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = build_registry();
  return registry;
}

const Scenario* find_scenario(const std::string& name) {
  for (const Scenario& s : scenario_registry()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace fprw

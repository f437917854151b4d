#ifndef FPRW_SCENARIO_HPP
#define FPRW_SCENARIO_HPP

#include <map>
#include <string>
#include <vector>

#include "fprw/model.hpp"

namespace fprw {

// A named expected quantity with a note on how the value is known, used by
// reports and regression tests.
struct ExpectedValue {
  double value;
  std::string note;
};

struct Scenario {
  std::string name;
  ModelSpec spec;
  std::string notes;
  std::map<std::string, ExpectedValue> expected;
};

// Built-in scenarios: counterexample, group-z2z3, example1.
const std::vector<Scenario>& scenario_registry();

// nullptr when the name is unknown.
const Scenario* find_scenario(const std::string& name);

}  // namespace fprw

#endif

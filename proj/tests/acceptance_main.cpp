// Runs every acceptance criterion on the reference seeds and prints one
// verdict line each. Exit status is nonzero when any criterion fails, so the
// binary doubles as a release gate under ctest.

#include <chrono>
#include <cstdio>

#include "fprw/reproduce.hpp"

int main() {
  fprw::AcceptanceRunner runner;
  bool all_pass = true;
  const auto t0 = std::chrono::steady_clock::now();

  for (int id = 1; id <= 9; ++id) {
    const fprw::CriterionResult r = runner.run_criterion(id);
    all_pass = all_pass && r.pass;
    std::printf("[%s] criterion %d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("%s (%.1f s)\n", all_pass ? "all 9 criteria passed" : "FAILED",
              elapsed);
  return all_pass ? 0 : 1;
}

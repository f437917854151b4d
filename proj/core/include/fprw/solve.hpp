#ifndef FPRW_SOLVE_HPP
#define FPRW_SOLVE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fprw/model.hpp"
#include "fprw/word.hpp"

namespace fprw {

// Truncated solves absorb to zero beyond the cutoff length, so probability
// histories grow toward the limit and 1-U histories shrink toward it.
enum class BoundDirection { lower, upper };

struct SolveResult {
  double value = 0.0;
  int truncation = 0;
  std::vector<std::pair<int, double>> history;  // (cutoff m', value)
  bool converged = false;        // final history increment below ladder_tol
  bool sweeps_converged = true;  // every cutoff met the sweep tolerance
  BoundDirection direction = BoundDirection::lower;
  std::map<std::string, double> residuals;  // named identity residuals
  std::map<std::string, double> extras;     // auxiliary named values
};

// elimination: exact block elimination up the word tree, one linear pass per
// cutoff. sweeps: warm-started Gauss-Seidel to sweep_tol, kept as an
// independent route for cross-checks.
enum class SolveMethod { elimination, sweeps };

struct SolveOptions {
  std::uint64_t state_budget = 1'000'000;
  SolveMethod method = SolveMethod::elimination;
  double sweep_tol = 1e-10;
  int max_sweeps = 10'000;
  double ladder_tol = 1e-8;
  int history_from = 1;  // lowest cutoff recorded in the history
};

// P[walk from `start` reaches the target set before its word length first
// exceeds m']: the truncated linear system over the word tree of length
// <= m, solved at every cutoff m' up to m. Monotone lower bound on the
// untruncated first-passage probability.
SolveResult hitting_probability(
    const Model& model, const FreeWord& start,
    const std::function<bool(const FreeWord&)>& target, int m,
    const SolveOptions& opts = {});

// Probability of ever leaving the cone C(x) from a one-letter word x of
// factor i. Solved per base letter on a cone-rooted tree; the reported value
// is the first base's, with the spread across bases in
// residuals["base_word_spread"] and the per-base values in extras.
SolveResult xi(const Model& model, FactorId i, int m,
               const SolveOptions& opts = {});

// U(x,x): first-return probability, one-step average of the first-passage
// solve toward x.
SolveResult first_return(const Model& model, const FreeWord& x, int m,
                         const SolveOptions& opts = {});

// G(x,y): expected visits to y from x before the word length first exceeds
// the cutoff. Also reports |G(x,y) - F(x,y)G(y,y)| and |G(y,y)(1-U(y,y))-1|
// at the final cutoff, plus the F/G/U ingredients in extras.
SolveResult truncated_green(const Model& model, const FreeWord& x,
                            const FreeWord& y, int m,
                            const SolveOptions& opts = {});

// 1 - U(o,o): the group-case range prediction, valid only for
// vertex-transitive walks; reported for comparison on every model.
SolveResult group_case_range(const Model& model, int m,
                             const SolveOptions& opts = {});

}  // namespace fprw

#endif

#ifndef FPRW_SIMULATE_HPP
#define FPRW_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fprw/model.hpp"
#include "fprw/trie.hpp"
#include "fprw/word.hpp"

namespace fprw {

// One sampled step of the lifted kernel: the factor picked by the alpha coin
// and the within-factor target as a full vertex index (roots allowed).
struct StepRecord {
  FactorId factor;
  std::uint16_t target;

  friend constexpr bool operator==(StepRecord, StepRecord) = default;
};

// Seed-reproducible realization of the walk. Steps are stored instead of
// words; replaying them from o reconstructs every X_n. The factor roots are
// recorded so replay does not need the model.
struct Trajectory {
  std::uint64_t seed = 0;
  std::string model_digest;
  std::uint16_t root1 = 0;
  std::uint16_t root2 = 0;
  std::vector<StepRecord> steps;
  std::vector<std::uint32_t> word_lengths;  // ||X_n|| for n = 0..N
  FreeWord final_word;

  [[nodiscard]] std::size_t horizon() const { return steps.size(); }
  [[nodiscard]] std::uint16_t root(FactorId f) const {
    return f == FactorId::one ? root1 : root2;
  }
};

// R_0..R_N, the number of distinct words visited so far.
struct RangeSeries {
  std::vector<std::uint32_t> values;
};

Trajectory run(const Model& model, std::size_t n_steps, std::uint64_t seed);

// Applies one step record to `word` in place per the lifted-kernel cases:
// target at the factor root means drop (own factor) or stay (other factor);
// otherwise replace (own factor) or append (other factor).
void apply_step(FreeWord& word, StepRecord step, std::uint16_t root1,
                std::uint16_t root2);

// X_0..X_N by replay.
std::vector<FreeWord> replay(const Trajectory& traj);

// Visited-word prefix tree plus the node standing at X_N.
struct TrieBuild {
  WalkTrie trie;
  std::uint32_t final_node = 0;
};
TrieBuild build_trie(const Trajectory& traj,
                     std::uint64_t node_budget = WalkTrie::kDefaultNodeBudget);

RangeSeries range_process(const Trajectory& traj);

struct ReplicaResult {
  std::uint64_t replica = 0;
  std::uint64_t seed = 0;
  Trajectory trajectory;
  RangeSeries range;
  std::string error;  // nonempty when this replica failed; payload then empty
};

// Replica r runs with seed split_seed(base_seed, r). Results are ordered by
// replica index regardless of scheduling; FPRW_THREADS caps the workers.
std::vector<ReplicaResult> run_replicas(const Model& model, std::size_t n_steps,
                                        std::size_t n_replicas,
                                        std::uint64_t base_seed);

// E[R_n] by exhaustive weighted enumeration of every positive-probability
// length-n path. `budget` caps the number of enumerated paths.
double exact_expected_range(const Model& model, int n, std::uint64_t budget);

void export_trajectory(std::ostream& os, const Trajectory& traj,
                       const RangeSeries& range);
Trajectory import_trajectory(std::istream& is);

}  // namespace fprw

#endif

#ifndef FPRW_MODEL_HPP
#define FPRW_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fprw/word.hpp"

namespace fprw {

// One finite factor graph: row-stochastic transition matrix with a marked
// root vertex. Indices below are full vertex indices (root included).
struct FactorSpec {
  int size = 0;
  int root = 0;
  std::vector<std::vector<double>> matrix;
  std::vector<std::string> labels;  // optional display names, size or empty
};

// User assertions the toolkit echoes into reports but cannot verify.
struct ModelClaims {
  std::optional<bool> transient;
  std::optional<bool> green_radius_gt_one;
};

struct ModelSpec {
  FactorSpec factor1;
  FactorSpec factor2;
  double alpha = 0.5;
  ModelClaims claims;

  const FactorSpec& factor(FactorId f) const {
    return f == FactorId::one ? factor1 : factor2;
  }
};

struct Diagnostic {
  std::string where;    // e.g. "factor2.matrix.row[1]"
  std::string message;
};

// Empty iff every FactorSpec/ModelSpec invariant holds: row sums within
// 1e-12 of 1, entries in [0,1], alpha in (0,1), every vertex reachable from
// the factor root through positive entries.
std::vector<Diagnostic> validate(const ModelSpec& spec);

inline constexpr double kRowSumTolerance = 1e-12;

struct StepOutcome {
  FreeWord next;
  double prob;  // > 0
};

// A validated ModelSpec with derived tables for the hot paths. Immutable
// after construction; safe to share across threads.
class Model {
 public:
  // Throws InvalidModel listing the first diagnostic if validation fails.
  explicit Model(ModelSpec spec);

  [[nodiscard]] const ModelSpec& spec() const { return spec_; }
  [[nodiscard]] std::uint64_t digest() const { return digest_; }
  [[nodiscard]] std::string digest_hex() const;

  [[nodiscard]] double factor_weight(FactorId f) const {
    return f == FactorId::one ? spec_.alpha : 1.0 - spec_.alpha;
  }
  [[nodiscard]] int root(FactorId f) const { return spec_.factor(f).root; }
  [[nodiscard]] int size(FactorId f) const { return spec_.factor(f).size; }

  // Letters of a factor = non-root vertices, in vertex order.
  [[nodiscard]] int letter_count(FactorId f) const {
    return spec_.factor(f).size - 1;
  }
  [[nodiscard]] std::uint16_t letter_of_vertex(FactorId f, int vertex) const;
  [[nodiscard]] int vertex_of_letter(Letter l) const;

  // Positive entries of row `vertex` in factor f, in target-vertex order.
  struct RowEntry {
    int target;
    double prob;
  };
  [[nodiscard]] const std::vector<RowEntry>& row(FactorId f, int vertex) const {
    return rows_[factor_index(f) - 1][vertex];
  }

  // Within-factor BFS distance from the root to `vertex` over positive
  // entries; defined for every vertex by the reachability invariant.
  [[nodiscard]] int root_distance(FactorId f, int vertex) const {
    return dist_[factor_index(f) - 1][vertex];
  }

 private:
  ModelSpec spec_;
  std::uint64_t digest_;
  std::vector<std::vector<RowEntry>> rows_[2];
  std::vector<int> dist_[2];
};

// Canonical digest of a ModelSpec (structure and probabilities; labels and
// claims excluded). Stable across runs, embedded in all exports.
std::uint64_t model_digest(const ModelSpec& spec);

// Full support of one step of the lifted kernel P = a*P1 + (1-a)*P2 from
// `state`. Outcomes reaching the same word are merged; probabilities sum
// to 1. Order: factor-1 moves then factor-2 moves, each by target vertex.
std::vector<StepOutcome> step_distribution(const Model& model,
                                           const FreeWord& state);

// Graph distance |x|: length of a shortest positive-probability path from o
// to x. Letters stabilize only at their own depth, so the distance is the
// sum of within-factor root distances of the letters.
int graph_distance(const Model& model, const FreeWord& x);

// {w : p_i(w, y) > 0}, full vertex indices.
std::vector<int> predecessors(const Model& model, FactorId i, int y);

}  // namespace fprw

#endif

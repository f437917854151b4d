#include "fprw/model.hpp"

#include <cmath>
#include <deque>
#include <utility>

#include "fprw/digest.hpp"
#include "fprw/errors.hpp"

namespace fprw {

namespace {

void validate_factor(const FactorSpec& f, const std::string& name,
                     std::vector<Diagnostic>& out) {
  if (f.size < 2) {
    out.push_back({name + ".size", "factor needs at least 2 vertices, got " +
                                       std::to_string(f.size)});
    return;
  }
  if (f.root < 0 || f.root >= f.size) {
    out.push_back({name + ".root", "root index " + std::to_string(f.root) +
                                       " outside [0," +
                                       std::to_string(f.size) + ")"});
    return;
  }
  if (static_cast<int>(f.matrix.size()) != f.size) {
    out.push_back({name + ".matrix", "expected " + std::to_string(f.size) +
                                         " rows, got " +
                                         std::to_string(f.matrix.size())});
    return;
  }
  for (int r = 0; r < f.size; ++r) {
    const auto& row = f.matrix[r];
    const std::string where = name + ".matrix.row[" + std::to_string(r) + "]";
    if (static_cast<int>(row.size()) != f.size) {
      out.push_back({where, "expected " + std::to_string(f.size) +
                                " entries, got " + std::to_string(row.size())});
      continue;
    }
    double sum = 0.0;
    bool entries_ok = true;
    for (int c = 0; c < f.size; ++c) {
      if (!(row[c] >= 0.0) || row[c] > 1.0 || !std::isfinite(row[c])) {
        out.push_back({where + "[" + std::to_string(c) + "]",
                       "entry " + std::to_string(row[c]) + " outside [0,1]"});
        entries_ok = false;
      }
      sum += row[c];
    }
    if (entries_ok && std::abs(sum - 1.0) > kRowSumTolerance) {
      out.push_back({where, "row sums to " + std::to_string(sum) +
                                ", expected 1 within 1e-12"});
    }
  }
  if (!f.labels.empty() && static_cast<int>(f.labels.size()) != f.size) {
    out.push_back({name + ".labels", "expected " + std::to_string(f.size) +
                                         " labels, got " +
                                         std::to_string(f.labels.size())});
  }
  // Reachability of every vertex from the root over positive entries.
  std::vector<char> seen(f.size, 0);
  std::deque<int> queue{f.root};
  seen[f.root] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int c = 0; c < f.size; ++c) {
      if (!seen[c] && f.matrix[v][c] > 0.0) {
        seen[c] = 1;
        queue.push_back(c);
      }
    }
  }
  for (int v = 0; v < f.size; ++v) {
    if (!seen[v]) {
      out.push_back({name + ".matrix",
                     "vertex " + std::to_string(v) +
                         " unreachable from root " + std::to_string(f.root)});
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate(const ModelSpec& spec) {
  std::vector<Diagnostic> out;
  if (!(spec.alpha > 0.0) || !(spec.alpha < 1.0)) {
    out.push_back({"alpha", "mixing weight " + std::to_string(spec.alpha) +
                                " outside the open interval (0,1)"});
  }
  validate_factor(spec.factor1, "factor1", out);
  validate_factor(spec.factor2, "factor2", out);
  return out;
}

std::uint64_t model_digest(const ModelSpec& spec) {
  Fnv1a64 h;
  h.update(spec.alpha);
  for (FactorId f : {FactorId::one, FactorId::two}) {
    const FactorSpec& fs = spec.factor(f);
    h.update(static_cast<std::uint64_t>(fs.size));
    h.update(static_cast<std::uint64_t>(fs.root));
    for (const auto& row : fs.matrix) {
      for (double p : row) h.update(p);
    }
  }
  return h.value();
}

Model::Model(ModelSpec spec) : spec_(std::move(spec)) {
  auto diags = validate(spec_);
  if (!diags.empty()) {
    throw InvalidModel(diags.front().where + ": " + diags.front().message +
                       (diags.size() > 1
                            ? " (+" + std::to_string(diags.size() - 1) +
                                  " more diagnostics)"
                            : ""));
  }
  digest_ = model_digest(spec_);
  for (FactorId f : {FactorId::one, FactorId::two}) {
    int fi = factor_index(f) - 1;
    const FactorSpec& fs = spec_.factor(f);
    rows_[fi].resize(fs.size);
    for (int v = 0; v < fs.size; ++v) {
      for (int c = 0; c < fs.size; ++c) {
        if (fs.matrix[v][c] > 0.0) rows_[fi][v].push_back({c, fs.matrix[v][c]});
      }
    }
    // BFS distances from the root; reachability was just validated.
    dist_[fi].assign(fs.size, -1);
    std::deque<int> queue{fs.root};
    dist_[fi][fs.root] = 0;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (const RowEntry& e : rows_[fi][v]) {
        if (dist_[fi][e.target] < 0) {
          dist_[fi][e.target] = dist_[fi][v] + 1;
          queue.push_back(e.target);
        }
      }
    }
  }
}

std::string Model::digest_hex() const { return to_hex(digest_); }

std::uint16_t Model::letter_of_vertex(FactorId f, int vertex) const {
  int r = root(f);
  return static_cast<std::uint16_t>(vertex < r ? vertex : vertex - 1);
}

int Model::vertex_of_letter(Letter l) const {
  int r = root(l.factor);
  return l.vertex < r ? l.vertex : l.vertex + 1;
}

std::vector<StepOutcome> step_distribution(const Model& model,
                                           const FreeWord& state) {
  std::vector<StepOutcome> out;
  int tau = state.type();
  for (FactorId f : {FactorId::one, FactorId::two}) {
    double weight = model.factor_weight(f);
    bool at_own_factor = tau == factor_index(f);
    int pos = at_own_factor ? model.vertex_of_letter(state.last())
                            : model.root(f);
    for (const Model::RowEntry& e : model.row(f, pos)) {
      FreeWord next = state;
      if (e.target == model.root(f)) {
        if (at_own_factor) next.pop();  // drop; otherwise stay
      } else {
        Letter l{f, model.letter_of_vertex(f, e.target)};
        if (at_own_factor) next.pop();
        next.push(l);  // replace or append
      }
      double p = weight * e.prob;
      bool merged = false;
      for (StepOutcome& existing : out) {
        if (existing.next == next) {
          existing.prob += p;
          merged = true;
          break;
        }
      }
      if (!merged) out.push_back({std::move(next), p});
    }
  }
  return out;
}

int graph_distance(const Model& model, const FreeWord& x) {
  int d = 0;
  for (Letter l : x.letters()) {
    d += model.root_distance(l.factor, model.vertex_of_letter(l));
  }
  return d;
}

std::vector<int> predecessors(const Model& model, FactorId i, int y) {
  std::vector<int> out;
  const FactorSpec& fs = model.spec().factor(i);
  for (int w = 0; w < fs.size; ++w) {
    if (fs.matrix[w][y] > 0.0) out.push_back(w);
  }
  return out;
}

}  // namespace fprw

#include "fprw/solve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "fprw/errors.hpp"

namespace fprw {
namespace {

constexpr std::uint32_t kNoChild = 0xffffffffu;

std::uint16_t code_of(Letter l) {
  return static_cast<std::uint16_t>(
      (l.factor == FactorId::two ? 0x8000u : 0u) | l.vertex);
}

Letter letter_of_code(std::uint16_t code) {
  return Letter{(code & 0x8000u) != 0 ? FactorId::two : FactorId::one,
                static_cast<std::uint16_t>(code & 0x7fffu)};
}

// Word tree {root_word . v : ||v|| <= depth} in level (parent-first) order.
// Children of a node are contiguous from child_base: the other-factor
// letters by index, or for a type-0 root both factors' letters with factor
// one first. Transitions are index arithmetic; no per-state hashing.
struct WordTable {
  struct Node {
    std::uint32_t parent;
    std::uint32_t child_base;
    std::uint16_t letter_code;
    std::uint16_t depth;
  };
  std::vector<Node> nodes;
  std::vector<std::uint32_t> level_start;  // size depth + 2
  FreeWord root_word;
  int root_type = 0;
  int l1 = 0;
  int l2 = 0;

  [[nodiscard]] int type_of(std::uint32_t v) const {
    if (v == 0) return root_type;
    return (nodes[v].letter_code & 0x8000u) != 0 ? 2 : 1;
  }
  [[nodiscard]] int child_count(int type) const {
    if (type == 0) return l1 + l2;
    return type == 1 ? l2 : l1;
  }
  [[nodiscard]] std::uint32_t child_offset(int parent_type, Letter l) const {
    if (parent_type == 0 && l.factor == FactorId::two) {
      return static_cast<std::uint32_t>(l1) + l.vertex;
    }
    return l.vertex;
  }
  [[nodiscard]] int depth_levels() const {
    return static_cast<int>(level_start.size()) - 2;
  }
};

WordTable build_word_table(const Model& model, FreeWord root_word, int depth,
                           std::uint64_t budget) {
  WordTable t;
  t.root_word = std::move(root_word);
  t.root_type = t.root_word.type();
  t.l1 = model.letter_count(FactorId::one);
  t.l2 = model.letter_count(FactorId::two);

  t.nodes.push_back({kNoChild, kNoChild, 0, 0});
  t.level_start = {0, 1};
  for (int d = 0; d < depth; ++d) {
    const std::uint32_t lo = t.level_start[static_cast<std::size_t>(d)];
    const std::uint32_t hi = t.level_start[static_cast<std::size_t>(d) + 1];
    const auto child_depth = static_cast<std::uint16_t>(d + 1);
    for (std::uint32_t v = lo; v < hi; ++v) {
      const int type = t.type_of(v);
      const int n_children = t.child_count(type);
      if (t.nodes.size() + static_cast<std::size_t>(n_children) > budget) {
        throw StateBudgetExceeded("word tree to cutoff " + std::to_string(depth) +
                                  " exceeds the state budget of " +
                                  std::to_string(budget));
      }
      t.nodes[v].child_base = static_cast<std::uint32_t>(t.nodes.size());
      if (type != 1) {
        for (int li = 0; li < t.l1; ++li) {
          t.nodes.push_back({v, kNoChild,
                             code_of(Letter{FactorId::one,
                                            static_cast<std::uint16_t>(li)}),
                             child_depth});
        }
      }
      if (type != 2) {
        for (int li = 0; li < t.l2; ++li) {
          t.nodes.push_back({v, kNoChild,
                             code_of(Letter{FactorId::two,
                                            static_cast<std::uint16_t>(li)}),
                             child_depth});
        }
      }
    }
    t.level_start.push_back(static_cast<std::uint32_t>(t.nodes.size()));
  }
  return t;
}

// Node of root_word . suffix, or kNoChild when it lies beyond the tree.
std::uint32_t node_of(const WordTable& t, const FreeWord& suffix) {
  std::uint32_t v = 0;
  for (const Letter l : suffix.letters()) {
    if (t.nodes[v].child_base == kNoChild) return kNoChild;
    v = t.nodes[v].child_base + t.child_offset(t.type_of(v), l);
  }
  return v;
}

constexpr int kMaxBlock = 64;

// Solves the truncated linear system h = c + P h over an active prefix of
// the word table; nodes beyond the prefix read as 0 (absorb-to-zero).
//
// Two routes. Elimination: one bottom-up pass writes every node as
// h(v) = alpha(v) + beta(v) h(parent) by solving the within-factor sibling
// blocks directly, then a top-down pass evaluates; exact up to rounding.
// Sweeps: warm-started Gauss-Seidel; iterates climb from below, kept as an
// independent cross-check of the elimination route.
class Engine {
 public:
  Engine(const Model& model, const WordTable& t)
      : model_(model),
        t_(t),
        h_(t.nodes.size(), 0.0),
        alpha_(t.nodes.size(), 0.0),
        beta_(t.nodes.size(), 0.0),
        frozen_(t.nodes.size(), 0) {
    if (t_.root_type != 0) {
      root_vx_ = model_.vertex_of_letter(t_.root_word.last());
    }
  }

  void freeze(std::uint32_t v, double value) {
    frozen_[v] = 1;
    preset_.emplace_back(v, value);
  }
  void add_constant(std::uint32_t v, double c) { constants_.emplace_back(v, c); }
  void set_root_escape(double value) { root_escape_ = value; }

  // Sweeps route only: frozen nodes take their preset once they enter the
  // active prefix; before that they must read as absorbed.
  void activate(std::uint32_t lo, std::uint32_t hi) {
    for (const auto& [v, value] : preset_) {
      if (v >= lo && v < hi) h_[v] = value;
    }
  }

  bool sweep_prefix(std::uint32_t n_active, double tol, int max_sweeps) {
    for (int s = 0; s < max_sweeps; ++s) {
      double delta = 0.0;
      for (std::uint32_t v = 0; v < n_active; ++v) {
        if (frozen_[v] != 0) continue;
        const double nv = relax(v, n_active);
        delta = std::max(delta, std::abs(nv - h_[v]));
        h_[v] = nv;
      }
      if (delta < tol) return true;
    }
    return false;
  }

  void eliminate_prefix(std::uint32_t n_active) {
    const int levels = active_levels(n_active);
    for (int d = levels; d >= 1; --d) {
      const std::uint32_t plo = t_.level_start[static_cast<std::size_t>(d) - 1];
      const std::uint32_t phi = t_.level_start[static_cast<std::size_t>(d)];
      for (std::uint32_t q = plo; q < phi; ++q) {
        const std::uint32_t base = t_.nodes[q].child_base;
        if (base == kNoChild) continue;
        const int ptype = t_.type_of(q);
        if (ptype != 1) eliminate_block(base, FactorId::one, t_.l1, n_active);
        if (ptype != 2) {
          const std::uint32_t b2 =
              base + static_cast<std::uint32_t>(ptype == 0 ? t_.l1 : 0);
          eliminate_block(b2, FactorId::two, t_.l2, n_active);
        }
      }
    }
    finish_root(n_active);
    for (std::uint32_t v = 1; v < n_active; ++v) {
      h_[v] = alpha_[v] + beta_[v] * h_[t_.nodes[v].parent];
    }
  }

  [[nodiscard]] double value(std::uint32_t v) const { return h_[v]; }

  // One-step average from v with the self mass scored at self_value; with
  // self_value = 1 and h the first-passage solution toward v this is U(v,v).
  [[nodiscard]] double one_step(std::uint32_t v, double self_value) const {
    double rhs = 0.0;
    double p_self = 0.0;
    accumulate(v, h_.size(), &rhs, &p_self);
    return rhs + p_self * self_value;
  }

 private:
  // Deepest fully active level; n_active is always a level boundary.
  [[nodiscard]] int active_levels(std::uint32_t n_active) const {
    int d = 0;
    while (d + 2 < static_cast<int>(t_.level_start.size()) &&
           t_.level_start[static_cast<std::size_t>(d) + 2] <= n_active) {
      ++d;
    }
    return d;
  }

  [[nodiscard]] double preset_of(std::uint32_t v) const {
    for (const auto& [node, value] : preset_) {
      if (node == v) return value;
    }
    return 0.0;
  }

  [[nodiscard]] double constant_of(std::uint32_t v) const {
    double c = 0.0;
    for (const auto& [node, value] : constants_) {
      if (node == v) c += value;
    }
    return c;
  }

  // Solves h(v) = c + sum p h(dest) + p_self h(v) for h(v); inactive
  // destinations read 0.
  [[nodiscard]] double relax(std::uint32_t v, std::uint32_t n_active) const {
    double rhs = constant_of(v);
    double p_self = 0.0;
    accumulate(v, n_active, &rhs, &p_self);
    return p_self < 1.0 ? rhs / (1.0 - p_self) : 0.0;
  }

  void accumulate(std::uint32_t v, std::size_t n_active, double* rhs,
                  double* p_self) const {
    const WordTable::Node& node = t_.nodes[v];
    const int type = t_.type_of(v);
    if (type != 0) {
      const FactorId f = factor_from_int(type);
      const double wf = model_.factor_weight(f);
      const int rootf = model_.root(f);
      const int vx = v == 0
                         ? root_vx_
                         : model_.vertex_of_letter(letter_of_code(node.letter_code));
      for (const auto& e : model_.row(f, vx)) {
        if (e.target == vx) {
          *p_self += wf * e.prob;
        } else if (v == 0) {
          *rhs += wf * e.prob * root_escape_;
        } else if (e.target == rootf) {
          *rhs += wf * e.prob * h_[node.parent];
        } else {
          const Letter l{f, model_.letter_of_vertex(f, e.target)};
          const int ptype =
              node.depth == 1 ? t_.root_type : factor_index(other(f));
          const std::uint32_t sib =
              t_.nodes[node.parent].child_base + t_.child_offset(ptype, l);
          *rhs += wf * e.prob * h_[sib];
        }
      }
    }
    for (const FactorId g : {FactorId::one, FactorId::two}) {
      if (factor_index(g) == type) continue;
      const double wg = model_.factor_weight(g);
      const int rootg = model_.root(g);
      for (const auto& e : model_.row(g, rootg)) {
        if (e.target == rootg) {
          *p_self += wg * e.prob;
        } else if (node.child_base != kNoChild) {
          const Letter l{g, model_.letter_of_vertex(g, e.target)};
          const std::uint32_t c = node.child_base + t_.child_offset(type, l);
          if (c < n_active) *rhs += wg * e.prob * h_[c];
        }
      }
    }
  }

  // Expresses the same-factor sibling block starting at `base` as affine
  // functions of the common parent. Children of the block's members must
  // already be eliminated.
  void eliminate_block(std::uint32_t base, FactorId g, int n, std::uint32_t n_active) {
    if (n == 0 || base >= n_active) return;
    const double wg = model_.factor_weight(g);
    const int rootg = model_.root(g);
    const FactorId f = other(g);
    const double wf = model_.factor_weight(f);
    const int rootf = model_.root(f);

    std::array<std::array<double, kMaxBlock>, kMaxBlock> mat;
    std::array<double, kMaxBlock> rc;
    std::array<double, kMaxBlock> ra;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) mat[i][j] = 0.0;
      rc[i] = 0.0;
      ra[i] = 0.0;
    }

    for (int i = 0; i < n; ++i) {
      const std::uint32_t v = base + static_cast<std::uint32_t>(i);
      if (frozen_[v] != 0) {
        mat[i][i] = 1.0;
        rc[i] = preset_of(v);
        continue;
      }
      double diag = 0.0;
      double a = 0.0;
      double c = constant_of(v);
      const int vx = model_.vertex_of_letter(Letter{g, static_cast<std::uint16_t>(i)});
      for (const auto& e : model_.row(g, vx)) {
        if (e.target == vx) {
          diag += wg * e.prob;
        } else if (e.target == rootg) {
          a += wg * e.prob;
        } else {
          mat[i][model_.letter_of_vertex(g, e.target)] -= wg * e.prob;
        }
      }
      const std::uint32_t cb = t_.nodes[v].child_base;
      for (const auto& e : model_.row(f, rootf)) {
        if (e.target == rootf) {
          diag += wf * e.prob;
        } else if (cb != kNoChild) {
          const std::uint32_t child =
              cb + static_cast<std::uint32_t>(model_.letter_of_vertex(f, e.target));
          if (child < n_active) {
            c += wf * e.prob * alpha_[child];
            diag += wf * e.prob * beta_[child];
          }
        }
      }
      mat[i][i] += 1.0 - diag;
      rc[i] = c;
      ra[i] = a;
    }

    solve_block(mat, rc, ra, n);
    for (int i = 0; i < n; ++i) {
      const std::uint32_t v = base + static_cast<std::uint32_t>(i);
      alpha_[v] = rc[i];
      beta_[v] = ra[i];
    }
  }

  // Gauss-Jordan with partial pivoting on the two stacked right-hand sides.
  // A vanishing pivot marks a state that cannot move; its value is 0.
  static void solve_block(std::array<std::array<double, kMaxBlock>, kMaxBlock>& mat,
                          std::array<double, kMaxBlock>& rc,
                          std::array<double, kMaxBlock>& ra, int n) {
    for (int col = 0; col < n; ++col) {
      int pivot = col;
      for (int r = col + 1; r < n; ++r) {
        if (std::abs(mat[r][col]) > std::abs(mat[pivot][col])) pivot = r;
      }
      if (pivot != col) {
        std::swap(mat[pivot], mat[col]);
        std::swap(rc[pivot], rc[col]);
        std::swap(ra[pivot], ra[col]);
      }
      const double p = mat[col][col];
      if (std::abs(p) < 1e-14) {
        for (int j = 0; j < n; ++j) mat[col][j] = 0.0;
        mat[col][col] = 1.0;
        rc[col] = 0.0;
        ra[col] = 0.0;
        continue;
      }
      for (int r = 0; r < n; ++r) {
        if (r == col || mat[r][col] == 0.0) continue;
        const double factor = mat[r][col] / p;
        for (int j = col; j < n; ++j) mat[r][j] -= factor * mat[col][j];
        rc[r] -= factor * rc[col];
        ra[r] -= factor * ra[col];
      }
    }
    for (int i = 0; i < n; ++i) {
      rc[i] /= mat[i][i];
      ra[i] /= mat[i][i];
    }
  }

  void finish_root(std::uint32_t n_active) {
    if (frozen_[0] != 0) {
      h_[0] = preset_of(0);
      return;
    }
    double rhs = constant_of(0);
    double p_self = 0.0;
    const int type = t_.root_type;
    if (type != 0) {
      const FactorId f = factor_from_int(type);
      const double wf = model_.factor_weight(f);
      for (const auto& e : model_.row(f, root_vx_)) {
        if (e.target == root_vx_) {
          p_self += wf * e.prob;
        } else {
          rhs += wf * e.prob * root_escape_;
        }
      }
    }
    const std::uint32_t cb = t_.nodes[0].child_base;
    for (const FactorId g : {FactorId::one, FactorId::two}) {
      if (factor_index(g) == type) continue;
      const double wg = model_.factor_weight(g);
      const int rootg = model_.root(g);
      for (const auto& e : model_.row(g, rootg)) {
        if (e.target == rootg) {
          p_self += wg * e.prob;
        } else if (cb != kNoChild) {
          const Letter l{g, model_.letter_of_vertex(g, e.target)};
          const std::uint32_t c = cb + t_.child_offset(type, l);
          if (c < n_active) {
            rhs += wg * e.prob * alpha_[c];
            p_self += wg * e.prob * beta_[c];
          }
        }
      }
    }
    h_[0] = p_self < 1.0 ? rhs / (1.0 - p_self) : 0.0;
  }

  const Model& model_;
  const WordTable& t_;
  std::vector<double> h_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  std::vector<char> frozen_;
  std::vector<std::pair<std::uint32_t, double>> preset_;
  std::vector<std::pair<std::uint32_t, double>> constants_;
  double root_escape_ = 0.0;
  int root_vx_ = 0;
};

struct Ladder {
  std::vector<std::pair<int, double>> history;
  bool sweeps_converged = true;
};

// Solves the active prefix for the given cutoff with the configured method.
void solve_cutoff(Engine& eng, std::uint32_t n_active, std::uint32_t* active,
                  const SolveOptions& opts, bool* sweeps_converged) {
  if (opts.method == SolveMethod::sweeps) {
    eng.activate(*active, n_active);
    *active = n_active;
    if (!eng.sweep_prefix(n_active, opts.sweep_tol, opts.max_sweeps)) {
      *sweeps_converged = false;
    }
    return;
  }
  eng.eliminate_prefix(n_active);
}

template <typename Readout>
Ladder run_ladder(Engine& eng, const WordTable& t, int root_len, int m_lo,
                  int m_hi, const SolveOptions& opts, Readout readout) {
  Ladder out;
  std::uint32_t active = 0;
  for (int m = m_lo; m <= m_hi; ++m) {
    const int d = std::min(m - root_len, t.depth_levels());
    const std::uint32_t n_active =
        t.level_start[static_cast<std::size_t>(d) + 1];
    solve_cutoff(eng, n_active, &active, opts, &out.sweeps_converged);
    out.history.emplace_back(m, readout(eng));
  }
  return out;
}

SolveResult finish(Ladder&& lad, int m, BoundDirection dir, double ladder_tol) {
  SolveResult r;
  r.history = std::move(lad.history);
  r.value = r.history.back().second;
  r.truncation = m;
  r.direction = dir;
  r.sweeps_converged = lad.sweeps_converged;
  r.converged =
      r.history.size() >= 2 &&
      std::abs(r.history.back().second -
               r.history[r.history.size() - 2].second) < ladder_tol;
  return r;
}

void mark_targets(Engine& eng, const WordTable& t,
                  const std::function<bool(const FreeWord&)>& target) {
  FreeWord word = t.root_word;
  if (target(word)) eng.freeze(0, 1.0);
  std::vector<std::pair<std::uint32_t, int>> stack;
  stack.emplace_back(0, 0);
  while (!stack.empty()) {
    auto& [v, ci] = stack.back();
    const int cc =
        t.nodes[v].child_base == kNoChild ? 0 : t.child_count(t.type_of(v));
    if (ci == cc) {
      stack.pop_back();
      if (!stack.empty()) word.pop();
      continue;
    }
    const std::uint32_t c = t.nodes[v].child_base + static_cast<std::uint32_t>(ci++);
    word.push(letter_of_code(t.nodes[c].letter_code));
    if (target(word)) eng.freeze(c, 1.0);
    stack.emplace_back(c, 0);
  }
}

int clamp_low(int preferred, int needed, int m) {
  return std::min(m, std::max(preferred, needed));
}

}  // namespace

SolveResult hitting_probability(
    const Model& model, const FreeWord& start,
    const std::function<bool(const FreeWord&)>& target, int m,
    const SolveOptions& opts) {
  if (static_cast<int>(start.length()) > m) {
    throw TruncationTooSmall("start word of length " +
                             std::to_string(start.length()) +
                             " exceeds cutoff " + std::to_string(m));
  }
  const WordTable t = build_word_table(model, FreeWord{}, m, opts.state_budget);
  Engine eng(model, t);
  mark_targets(eng, t, target);
  const std::uint32_t start_node = node_of(t, start);
  const int m_lo =
      clamp_low(opts.history_from, static_cast<int>(start.length()), m);
  Ladder lad = run_ladder(eng, t, 0, m_lo, m, opts, [&](const Engine& e) {
    return e.value(start_node);
  });
  return finish(std::move(lad), m, BoundDirection::lower, opts.ladder_tol);
}

SolveResult xi(const Model& model, FactorId i, int m, const SolveOptions& opts) {
  if (m < 1) {
    throw TruncationTooSmall("cutoff below the base word length 1");
  }
  SolveResult result;
  double lo = 1.0;
  double hi = 0.0;
  for (int li = 0; li < model.letter_count(i); ++li) {
    const FreeWord base({Letter{i, static_cast<std::uint16_t>(li)}});
    const WordTable t = build_word_table(model, base, m - 1, opts.state_budget);
    Engine eng(model, t);
    eng.set_root_escape(1.0);
    const int m_lo = clamp_low(opts.history_from, 1, m);
    Ladder lad = run_ladder(eng, t, 1, m_lo, m, opts, [](const Engine& e) {
      return e.value(0);
    });
    const double v = lad.history.back().second;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    const int vertex = model.vertex_of_letter(Letter{i, static_cast<std::uint16_t>(li)});
    if (li == 0) {
      result = finish(std::move(lad), m, BoundDirection::lower, opts.ladder_tol);
    }
    result.extras["base_vertex_" + std::to_string(vertex)] = v;
  }
  result.residuals["base_word_spread"] = hi - lo;
  return result;
}

SolveResult first_return(const Model& model, const FreeWord& x, int m,
                         const SolveOptions& opts) {
  if (static_cast<int>(x.length()) > m) {
    throw TruncationTooSmall("return base of length " +
                             std::to_string(x.length()) + " exceeds cutoff " +
                             std::to_string(m));
  }
  const WordTable t = build_word_table(model, FreeWord{}, m, opts.state_budget);
  Engine eng(model, t);
  const std::uint32_t node_x = node_of(t, x);
  eng.freeze(node_x, 1.0);
  const int m_lo = clamp_low(opts.history_from, static_cast<int>(x.length()), m);
  Ladder lad = run_ladder(eng, t, 0, m_lo, m, opts, [&](const Engine& e) {
    return e.one_step(node_x, 1.0);
  });
  return finish(std::move(lad), m, BoundDirection::lower, opts.ladder_tol);
}

SolveResult truncated_green(const Model& model, const FreeWord& x,
                            const FreeWord& y, int m,
                            const SolveOptions& opts) {
  const int need = static_cast<int>(std::max(x.length(), y.length()));
  if (need > m) {
    throw TruncationTooSmall("green endpoints exceed cutoff " +
                             std::to_string(m));
  }
  const WordTable t = build_word_table(model, FreeWord{}, m, opts.state_budget);
  const std::uint32_t node_x = node_of(t, x);
  const std::uint32_t node_y = node_of(t, y);

  Engine visits(model, t);
  visits.add_constant(node_y, 1.0);
  Engine passage(model, t);
  passage.freeze(node_y, 1.0);

  Ladder lad;
  const int m_lo = clamp_low(opts.history_from, need, m);
  std::uint32_t active_v = 0;
  std::uint32_t active_p = 0;
  for (int cutoff = m_lo; cutoff <= m; ++cutoff) {
    const int d = std::min(cutoff, t.depth_levels());
    const std::uint32_t n_active =
        t.level_start[static_cast<std::size_t>(d) + 1];
    solve_cutoff(visits, n_active, &active_v, opts, &lad.sweeps_converged);
    solve_cutoff(passage, n_active, &active_p, opts, &lad.sweeps_converged);
    lad.history.emplace_back(cutoff, visits.value(node_x));
  }

  const double g_xy = visits.value(node_x);
  const double g_yy = visits.value(node_y);
  const double f_xy = passage.value(node_x);
  const double u_yy = passage.one_step(node_y, 1.0);
  SolveResult r = finish(std::move(lad), m, BoundDirection::lower, opts.ladder_tol);
  r.residuals["factorization"] = std::abs(g_xy - f_xy * g_yy);
  r.residuals["return_identity"] = std::abs(g_yy * (1.0 - u_yy) - 1.0);
  r.extras["f_xy"] = f_xy;
  r.extras["g_yy"] = g_yy;
  r.extras["u_yy"] = u_yy;
  return r;
}

SolveResult group_case_range(const Model& model, int m,
                             const SolveOptions& opts) {
  SolveResult u = first_return(model, FreeWord{}, m, opts);
  SolveResult r;
  r.truncation = u.truncation;
  r.converged = u.converged;
  r.sweeps_converged = u.sweeps_converged;
  r.direction = BoundDirection::upper;
  r.history.reserve(u.history.size());
  for (const auto& [cutoff, value] : u.history) {
    r.history.emplace_back(cutoff, 1.0 - value);
  }
  r.value = r.history.back().second;
  r.extras["u_oo"] = u.value;
  return r;
}

}  // namespace fprw

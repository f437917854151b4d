#include "fprw/exit.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "fprw/version.hpp"

namespace fprw {

ExitSummary exit_times(const Trajectory& traj, int certification_margin) {
  const auto& lengths = traj.word_lengths;
  const std::int64_t N = static_cast<std::int64_t>(traj.horizon());
  const int K = static_cast<int>(lengths.back());

  ExitSummary summary;
  summary.horizon = N;
  summary.k_of_n = K;
  if (K == 0) return summary;

  const std::uint32_t max_len = *std::max_element(lengths.begin(), lengths.end());

  // last_at[v]: last n with ||X_n|| = v.
  std::vector<std::int64_t> last_at(max_len + 1, -1);
  for (std::int64_t n = 0; n <= N; ++n) last_at[lengths[n]] = n;

  // replace_last[j]: last step that swapped the letter at position j.
  std::vector<std::int64_t> replace_last(max_len + 1, 0);
  {
    FreeWord word;
    for (std::int64_t n = 1; n <= N; ++n) {
      const StepRecord step = traj.steps[n - 1];
      const bool at_own = word.type() == factor_index(step.factor);
      const Letter before = at_own ? word.last() : Letter{step.factor, 0};
      apply_step(word, step, traj.root1, traj.root2);
      if (at_own && step.target != traj.root(step.factor) &&
          word.last() != before) {
        replace_last[word.length()] = n;
      }
    }
  }

  summary.records.reserve(K);
  summary.increments.reserve(K);
  std::int64_t below = -1;    // max over v < k of last_at[v]
  std::int64_t swapped = 0;   // max over j <= k of replace_last[j]
  std::int64_t prev_e = 0;
  for (int k = 1; k <= K; ++k) {
    below = std::max(below, last_at[k - 1]);
    swapped = std::max(swapped, replace_last[k]);
    ExitRecord rec;
    rec.k = k;
    rec.e_k = std::max(below + 1, swapped);
    rec.w = traj.final_word.at(k - 1);
    rec.certified = k + certification_margin <= K;
    summary.increments.push_back(rec.e_k - prev_e);
    prev_e = rec.e_k;
    summary.records.push_back(rec);
  }
  return summary;
}

namespace {

// Fenwick tree counting nodes by their spine-agreement length s.
class PrefixCounter {
 public:
  explicit PrefixCounter(std::size_t max_s) : tree_(max_s + 2, 0) {}

  void add(std::size_t s) {
    for (std::size_t i = s + 1; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }

  // #added with value <= s.
  [[nodiscard]] std::int64_t count_le(std::int64_t s) const {
    if (s < 0) return 0;
    std::size_t i = std::min(static_cast<std::size_t>(s) + 1, tree_.size() - 1);
    std::int64_t total = 0;
    for (; i > 0; i -= i & (~i + 1)) total += tree_[i];
    return total;
  }

 private:
  std::vector<std::int64_t> tree_;
};

}  // namespace

PsiResult psi_decomposition(const Trajectory& traj, const ExitSummary& summary,
                            const PsiOptions& opts) {
  PsiResult out;
  int included = 0;
  for (const auto& rec : summary.records) {
    if (rec.certified || opts.include_uncertified) ++included;
  }
  if (included == 0) return out;

  const TrieBuild built = build_trie(traj);
  const WalkTrie& trie = built.trie;
  const FreeWord& final_word = traj.final_word;
  const std::size_t K = final_word.length();
  const std::uint32_t n_nodes = trie.size();

  // s[v]: length of the longest common prefix of v's word with X_N. Parents
  // precede children in index order, so one forward pass suffices.
  std::vector<std::uint32_t> s(n_nodes, 0);
  std::vector<FactorId> first_factor(n_nodes, FactorId::one);
  for (std::uint32_t v = 1; v < n_nodes; ++v) {
    const std::uint32_t p = trie.parent(v);
    const std::uint32_t pd = trie.depth(v) - 1;
    s[v] = (s[p] == pd && pd < K && trie.letter(v) == final_word.at(pd))
               ? pd + 1
               : s[p];
    first_factor[v] = pd == 0 ? trie.letter(v).factor : first_factor[p];
  }

  const FactorId tau_w1 = final_word.at(0).factor;
  PrefixCounter counter(K);
  std::int64_t added = 0;
  std::int64_t added_s0_same = 0;   // s = 0, first letter of W_1's factor
  std::int64_t added_s0_other = 0;  // s = 0, opposite opening factor
  std::uint32_t next_node = 0;

  out.records.reserve(included);
  if (opts.retain_supports) out.supports.resize(included);

  std::size_t out_idx = 0;
  for (const ExitRecord& base : summary.records) {
    if (!(base.certified || opts.include_uncertified)) continue;
    const int k = base.k;
    while (next_node < n_nodes && trie.first_visit(next_node) <= base.e_k) {
      const std::uint32_t v = next_node++;
      counter.add(s[v]);
      ++added;
      if (v != 0 && s[v] == 0) {
        (first_factor[v] == tau_w1 ? added_s0_same : added_s0_other) += 1;
      }
    }

    ExitRecord rec = base;
    const std::int64_t in_cone_w = added - counter.count_le(k - 1);
    rec.overhead = in_cone_w;
    if (k == 1) {
      rec.r_tilde = 1 + added_s0_same;
      out.pre_e1_complement = added_s0_other;
    } else {
      rec.r_tilde = (added - counter.count_le(k - 2)) - in_cone_w;
    }
    rec.psi_support_size = rec.r_tilde + rec.overhead;

    if (opts.retain_supports &&
        rec.psi_support_size <= static_cast<std::int64_t>(opts.support_cap)) {
      std::vector<FreeWord>& supp = out.supports[out_idx];
      const FreeWord shift_base = final_word.prefix(static_cast<std::size_t>(k) - 1);
      for (std::uint32_t v = 0; v < next_node; ++v) {
        const bool member =
            k == 1 ? (v == 0 || s[v] >= 1 ||
                      (s[v] == 0 && first_factor[v] == tau_w1))
                   : s[v] + 1 >= static_cast<std::uint32_t>(k);
        if (member) supp.push_back(shift(shift_base, trie.word_of(v)));
      }
    }

    out.records.push_back(rec);
    ++out_idx;
  }
  return out;
}

ExitRecord psi_support(const Trajectory& traj, const ExitSummary& summary,
                       int k) {
  if (k < 1 || k > static_cast<int>(summary.records.size())) {
    throw std::out_of_range("psi_support: no exit record with k=" +
                            std::to_string(k));
  }
  if (!summary.records[k - 1].certified) {
    throw UncertifiedRecord("exit record k=" + std::to_string(k) +
                            " is not certified");
  }
  PsiResult full = psi_decomposition(traj, summary);
  return full.records[k - 1];
}

ExitSummary analyze_exits(const Trajectory& traj, int certification_margin,
                          const PsiOptions& opts) {
  ExitSummary summary = exit_times(traj, certification_margin);
  PsiResult psi = psi_decomposition(traj, summary, opts);
  for (const ExitRecord& rec : psi.records) {
    summary.records[rec.k - 1] = rec;
  }
  summary.pre_e1_complement = psi.pre_e1_complement;
  return summary;
}

DiagnosticsReport chain_diagnostics(const ExitSummary& summary) {
  DiagnosticsReport report;
  std::vector<const ExitRecord*> inspected;
  for (const auto& rec : summary.records) {
    if (rec.certified && rec.psi_support_size >= 0) {
      inspected.push_back(&rec);
    }
  }
  if (inspected.size() < 2) {
    throw NoCertifiedRecords(
        "chain diagnostics need at least two certified records with censuses");
  }

  double sum_rt = 0.0;
  double sum_ov = 0.0;
  std::int64_t prev_e = 0;
  const ExitRecord* prev = nullptr;
  for (const ExitRecord* rec : inspected) {
    if (rec->e_k <= prev_e) ++report.nesting_violations;
    if (prev != nullptr && rec->w.factor == prev->w.factor) {
      ++report.alternation_violations;
    }
    prev_e = rec->e_k;
    prev = rec;

    ++report.n_records;
    sum_rt += static_cast<double>(rec->r_tilde);
    sum_ov += static_cast<double>(rec->overhead);
    report.running_r_tilde.push_back(sum_rt /
                                     static_cast<double>(report.n_records));
    report.running_overhead.push_back(sum_ov /
                                      static_cast<double>(report.n_records));
    ++report.visit_histogram[{factor_index(rec->w.factor),
                              rec->psi_support_size}];
  }
  report.mean_r_tilde = sum_rt / static_cast<double>(report.n_records);
  report.mean_overhead = sum_ov / static_cast<double>(report.n_records);
  return report;
}

DiagnosticsReport merge_diagnostics(const std::vector<DiagnosticsReport>& parts) {
  DiagnosticsReport merged;
  double sum_rt = 0.0;
  double sum_ov = 0.0;
  for (const auto& part : parts) {
    merged.n_records += part.n_records;
    merged.alternation_violations += part.alternation_violations;
    merged.nesting_violations += part.nesting_violations;
    for (const auto& [key, count] : part.visit_histogram) {
      merged.visit_histogram[key] += count;
    }
    sum_rt += part.mean_r_tilde * static_cast<double>(part.n_records);
    sum_ov += part.mean_overhead * static_cast<double>(part.n_records);
  }
  if (merged.n_records > 0) {
    merged.mean_r_tilde = sum_rt / static_cast<double>(merged.n_records);
    merged.mean_overhead = sum_ov / static_cast<double>(merged.n_records);
  }
  return merged;
}

void export_exit_records(std::ostream& os, const Trajectory& traj,
                         const ExitSummary& summary) {
  os << "# " << kToolName << " exits model=" << traj.model_digest
     << " seed=" << traj.seed << "\n";
  os << "k,e_k,w_factor,w_vertex,psi_size,r_tilde,overhead,certified\n";
  for (const ExitRecord& rec : summary.records) {
    const std::uint16_t root = traj.root(rec.w.factor);
    const int vertex = rec.w.vertex >= root ? rec.w.vertex + 1 : rec.w.vertex;
    os << rec.k << ',' << rec.e_k << ',' << factor_index(rec.w.factor) << ','
       << vertex << ',' << rec.psi_support_size << ',' << rec.r_tilde << ','
       << rec.overhead << ',' << (rec.certified ? 1 : 0) << "\n";
  }
}

}  // namespace fprw

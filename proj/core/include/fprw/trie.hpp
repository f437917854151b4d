#ifndef FPRW_TRIE_HPP
#define FPRW_TRIE_HPP

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "fprw/errors.hpp"
#include "fprw/word.hpp"

namespace fprw {

// Prefix tree over the words visited by one walk. A node is created the
// first time its word is visited, so node indices are sorted by first-visit
// time; node 0 is the base point o. At most one node is created per step.
class WalkTrie {
 public:
  static constexpr std::uint32_t kNoNode = 0xffffffffu;
  static constexpr std::uint64_t kDefaultNodeBudget = 1ull << 26;

  explicit WalkTrie(std::uint64_t node_budget = kDefaultNodeBudget)
      : budget_(node_budget) {
    nodes_.push_back(Node{kNoNode, 0, 0, Letter{FactorId::one, 0}, {}});
  }

  [[nodiscard]] std::uint32_t size() const {
    return static_cast<std::uint32_t>(nodes_.size());
  }
  [[nodiscard]] std::uint32_t parent(std::uint32_t v) const {
    return nodes_[v].parent;
  }
  [[nodiscard]] std::uint32_t depth(std::uint32_t v) const {
    return nodes_[v].depth;
  }
  [[nodiscard]] std::int64_t first_visit(std::uint32_t v) const {
    return nodes_[v].first_visit;
  }
  // Letter on the edge from parent(v); meaningless for node 0.
  [[nodiscard]] Letter letter(std::uint32_t v) const { return nodes_[v].letter; }

  [[nodiscard]] std::uint32_t find_child(std::uint32_t v, Letter l) const {
    for (const auto& [cl, c] : nodes_[v].children) {
      if (cl == l) return c;
    }
    return kNoNode;
  }

  // Find-or-create; a node created here records `time` as its first visit.
  std::uint32_t visit_child(std::uint32_t v, Letter l, std::int64_t time) {
    if (std::uint32_t c = find_child(v, l); c != kNoNode) return c;
    if (nodes_.size() >= budget_) {
      throw StateBudgetExceeded("visited-set node budget exhausted");
    }
    auto c = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{v, nodes_[v].depth + 1, time, l, {}});
    nodes_[v].children.emplace_back(l, c);
    return c;
  }

  [[nodiscard]] FreeWord word_of(std::uint32_t v) const {
    std::vector<Letter> letters;
    for (std::uint32_t u = v; u != 0; u = nodes_[u].parent) {
      letters.push_back(nodes_[u].letter);
    }
    std::reverse(letters.begin(), letters.end());
    return FreeWord(std::move(letters));
  }

 private:
  struct Node {
    std::uint32_t parent;
    std::uint32_t depth;
    std::int64_t first_visit;
    Letter letter;
    std::vector<std::pair<Letter, std::uint32_t>> children;
  };

  std::vector<Node> nodes_;
  std::uint64_t budget_;
};

}  // namespace fprw

#endif

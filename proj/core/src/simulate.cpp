#include "fprw/simulate.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "fprw/rng.hpp"
#include "fprw/version.hpp"

namespace fprw {

namespace {

std::uint16_t letter_index(std::uint16_t target, std::uint16_t root) {
  return static_cast<std::uint16_t>(target > root ? target - 1 : target);
}

}  // namespace

void apply_step(FreeWord& word, StepRecord step, std::uint16_t root1,
                std::uint16_t root2) {
  const std::uint16_t root = step.factor == FactorId::one ? root1 : root2;
  const bool at_own = word.type() == factor_index(step.factor);
  if (at_own) {
    if (step.target == root) {
      word.pop();
    } else {
      word.pop();
      word.push(Letter{step.factor, letter_index(step.target, root)});
    }
  } else if (step.target != root) {
    word.push(Letter{step.factor, letter_index(step.target, root)});
  }
}

Trajectory run(const Model& model, std::size_t n_steps, std::uint64_t seed) {
  Trajectory traj;
  traj.seed = seed;
  traj.model_digest = model.digest_hex();
  traj.root1 = static_cast<std::uint16_t>(model.root(FactorId::one));
  traj.root2 = static_cast<std::uint16_t>(model.root(FactorId::two));
  traj.steps.reserve(n_steps);
  traj.word_lengths.reserve(n_steps + 1);
  traj.word_lengths.push_back(0);

  SplitMix64 rng(seed);
  FreeWord word;
  const double alpha = model.spec().alpha;
  for (std::size_t n = 0; n < n_steps; ++n) {
    const FactorId f =
        rng.next_unit() < alpha ? FactorId::one : FactorId::two;
    const int pos = word.type() == factor_index(f)
                        ? model.vertex_of_letter(word.last())
                        : model.root(f);
    const auto& row = model.row(f, pos);
    const double u = rng.next_unit();
    double cum = 0.0;
    int target = row.back().target;
    for (const auto& e : row) {
      cum += e.prob;
      if (u < cum) {
        target = e.target;
        break;
      }
    }
    const StepRecord step{f, static_cast<std::uint16_t>(target)};
    traj.steps.push_back(step);
    apply_step(word, step, traj.root1, traj.root2);
    traj.word_lengths.push_back(static_cast<std::uint32_t>(word.length()));
  }
  traj.final_word = std::move(word);
  return traj;
}

std::vector<FreeWord> replay(const Trajectory& traj) {
  std::vector<FreeWord> words;
  words.reserve(traj.steps.size() + 1);
  FreeWord word;
  words.push_back(word);
  for (const StepRecord step : traj.steps) {
    apply_step(word, step, traj.root1, traj.root2);
    words.push_back(word);
  }
  return words;
}

TrieBuild build_trie(const Trajectory& traj, std::uint64_t node_budget) {
  TrieBuild out{WalkTrie(node_budget), 0};
  WalkTrie& trie = out.trie;
  std::uint32_t cur = 0;
  std::int64_t time = 0;
  for (const StepRecord step : traj.steps) {
    ++time;
    const std::uint16_t root = traj.root(step.factor);
    const bool at_own =
        trie.depth(cur) > 0 && trie.letter(cur).factor == step.factor;
    if (at_own) {
      if (step.target == root) {
        cur = trie.parent(cur);
      } else {
        cur = trie.visit_child(trie.parent(cur),
                               Letter{step.factor, letter_index(step.target, root)},
                               time);
      }
    } else if (step.target != root) {
      cur = trie.visit_child(
          cur, Letter{step.factor, letter_index(step.target, root)}, time);
    }
  }
  out.final_node = cur;
  return out;
}

RangeSeries range_process(const Trajectory& traj) {
  const TrieBuild built = build_trie(traj);
  const WalkTrie& trie = built.trie;
  RangeSeries series;
  series.values.resize(traj.steps.size() + 1);
  std::uint32_t seen = 0;
  for (std::size_t n = 0; n < series.values.size(); ++n) {
    while (seen < trie.size() &&
           trie.first_visit(seen) <= static_cast<std::int64_t>(n)) {
      ++seen;
    }
    series.values[n] = seen;
  }
  return series;
}

namespace {

std::size_t worker_count(std::size_t n_replicas) {
  std::size_t cap = std::thread::hardware_concurrency();
  if (cap == 0) cap = 1;
  if (const char* env = std::getenv("FPRW_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = v;
  }
  return std::min(cap, n_replicas);
}

}  // namespace

std::vector<ReplicaResult> run_replicas(const Model& model, std::size_t n_steps,
                                        std::size_t n_replicas,
                                        std::uint64_t base_seed) {
  std::vector<ReplicaResult> results(n_replicas);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= n_replicas) return;
      ReplicaResult& slot = results[r];
      slot.replica = r;
      slot.seed = split_seed(base_seed, r);
      try {
        slot.trajectory = run(model, n_steps, slot.seed);
        slot.range = range_process(slot.trajectory);
      } catch (const std::exception& e) {
        slot.trajectory = Trajectory{};
        slot.range = RangeSeries{};
        slot.error = e.what();
      }
    }
  };

  const std::size_t workers = worker_count(n_replicas);
  if (workers <= 1) {
    work();
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return results;
}

namespace {

struct RangeEnumerator {
  const Model& model;
  const int n;
  const std::uint64_t budget;
  std::uint64_t paths = 0;
  double acc = 0.0;
  std::set<FreeWord> visited;

  void dfs(const FreeWord& w, int depth, double prob, int r) {
    if (depth == n) {
      if (++paths > budget) {
        throw BudgetExceeded("path enumeration budget exhausted at n=" +
                             std::to_string(n));
      }
      acc += prob * r;
      return;
    }
    for (const StepOutcome& out : step_distribution(model, w)) {
      const bool fresh = visited.insert(out.next).second;
      dfs(out.next, depth + 1, prob * out.prob, r + (fresh ? 1 : 0));
      if (fresh) visited.erase(out.next);
    }
  }
};

}  // namespace

double exact_expected_range(const Model& model, int n, std::uint64_t budget) {
  RangeEnumerator e{model, n, budget, 0, 0.0, {}};
  FreeWord origin;
  e.visited.insert(origin);
  e.dfs(origin, 0, 1.0, 1);
  return e.acc;
}

void export_trajectory(std::ostream& os, const Trajectory& traj,
                       const RangeSeries& range) {
  if (range.values.size() != traj.steps.size() + 1) {
    throw std::invalid_argument("range series does not match trajectory");
  }
  os << "# " << kToolName << " trajectory model=" << traj.model_digest
     << " seed=" << traj.seed << " generator=" << kGeneratorName
     << " roots=" << traj.root1 << "," << traj.root2 << "\n";
  os << "n,factor,target,word_len,range\n";
  for (std::size_t n = 1; n <= traj.steps.size(); ++n) {
    const StepRecord s = traj.steps[n - 1];
    os << n << ',' << factor_index(s.factor) << ',' << s.target << ','
       << traj.word_lengths[n] << ',' << range.values[n] << "\n";
  }
}

namespace {

std::uint64_t parse_u64_field(const std::string& line, const std::string& key) {
  const std::string token = key + "=";
  const auto pos = line.find(token);
  if (pos == std::string::npos) {
    throw ParseError("trajectory header missing " + key);
  }
  std::uint64_t value = 0;
  const char* first = line.data() + pos + token.size();
  const char* last = line.data() + line.size();
  const auto [p, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || p == first) {
    throw ParseError("trajectory header field " + key + " is not a number");
  }
  return value;
}

}  // namespace

Trajectory import_trajectory(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
    throw ParseError("trajectory file must start with a '# ' comment line");
  }
  Trajectory traj;
  traj.seed = parse_u64_field(line, "seed");
  traj.root1 = static_cast<std::uint16_t>(parse_u64_field(line, "roots"));
  {
    const auto pos = line.find("roots=");
    const auto comma = line.find(',', pos);
    if (comma == std::string::npos) {
      throw ParseError("trajectory header roots field needs two values");
    }
    traj.root2 =
        static_cast<std::uint16_t>(std::strtoul(line.c_str() + comma + 1, nullptr, 10));
  }
  {
    const std::string token = "model=";
    const auto pos = line.find(token);
    if (pos == std::string::npos) throw ParseError("trajectory header missing model");
    const auto end = line.find(' ', pos);
    traj.model_digest = line.substr(pos + token.size(),
                                    end == std::string::npos ? std::string::npos
                                                             : end - pos - token.size());
  }

  if (!std::getline(is, line) || line != "n,factor,target,word_len,range") {
    throw ParseError("trajectory file has an unexpected column header");
  }

  FreeWord word;
  traj.word_lengths.push_back(0);
  std::size_t expect_n = 1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::uint64_t n = 0, factor = 0, target = 0, word_len = 0, range = 0;
    std::istringstream row(line);
    char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    if (!(row >> n >> c1 >> factor >> c2 >> target >> c3 >> word_len >> c4 >>
          range) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',') {
      throw ParseError("trajectory row " + std::to_string(expect_n) +
                       " is malformed");
    }
    if (n != expect_n) {
      throw ParseError("trajectory rows out of order at n=" + std::to_string(n));
    }
    if (factor != 1 && factor != 2) {
      throw ParseError("trajectory row " + std::to_string(n) +
                       " has factor outside {1,2}");
    }
    const StepRecord step{factor_from_int(static_cast<int>(factor)),
                          static_cast<std::uint16_t>(target)};
    traj.steps.push_back(step);
    apply_step(word, step, traj.root1, traj.root2);
    if (word.length() != word_len) {
      throw ParseError("trajectory row " + std::to_string(n) +
                       " word_len disagrees with replay");
    }
    traj.word_lengths.push_back(static_cast<std::uint32_t>(word_len));
    ++expect_n;
  }
  traj.final_word = std::move(word);
  return traj;
}

}  // namespace fprw

#include <random>

#include "treefac/error.hpp"
#include "treefac/factorials.hpp"

namespace treefac {
namespace {

// Lengths are scaled by the lcm of their denominators so scores are integers.
struct Scaled {
  BigInt scale = 1;
  std::vector<BigInt> length;  // edge into v
  std::vector<BigInt> dist;    // root to v
};

Scaled scale_lengths(const RootedTree& tree) {
  Scaled s;
  for (NodeId v = 1; v < tree.size(); ++v) {
    s.scale = boost::multiprecision::lcm(s.scale, boost::multiprecision::denominator(tree.length(v)));
  }
  s.length.assign(tree.size(), 0);
  s.dist.assign(tree.size(), 0);
  for (NodeId v = 1; v < tree.size(); ++v) {
    const Rational& l = tree.length(v);
    s.length[v] = boost::multiprecision::numerator(l) * (s.scale / boost::multiprecision::denominator(l));
    s.dist[v] = s.dist[*tree.parent(v)] + s.length[v];
  }
  return s;
}

template <class Int>
class GreedyEngine {
 public:
  GreedyEngine(const RootedTree& tree, const Scaled& scaled, std::size_t t, TieBreakPolicy policy)
      : tree_(tree), t_(t), policy_(policy), rng_(policy.seed), count_(tree.size(), 0), leaves_(tree.leaves()) {
    dist_.reserve(tree.size());
    for (const auto& d : scaled.dist) dist_.push_back(static_cast<Int>(d));
  }

  // Returns the scaled score of the selection, or nullopt when exhausted.
  std::optional<Int> select(std::size_t n) {
    if (n < t_) {
      std::vector<NodeId> feasible;
      for (NodeId leaf : leaves_) {
        if (tree_.capacity(leaf)->exceeds(count_[leaf])) feasible.push_back(leaf);
      }
      if (feasible.empty()) return std::nullopt;
      NodeId pick = feasible.front();
      if (policy_.kind == TieBreakPolicy::Kind::SeededRandom) {
        pick = feasible[std::uniform_int_distribution<std::size_t>(0, feasible.size() - 1)(rng_)];
      }
      add(pick);
      return Int(0);
    }
    std::optional<Int> best;
    NodeId best_leaf = 0;
    for (NodeId leaf : leaves_) {
      if (!tree_.capacity(leaf)->exceeds(count_[leaf])) continue;
      const Int s = score(leaf);
      if (!best || s < *best) {
        best = s;
        best_leaf = leaf;
      }
    }
    if (best) add(best_leaf);
    return best;
  }

 private:
  // Sum of pairings with all earlier selections, minus the t largest. Walking
  // up from the leaf visits pairing values in decreasing order: count[leaf]
  // selections pair at the full length, and at each ancestor a the
  // selections branching off there pair at dist(a).
  Int score(NodeId leaf) const {
    Int total = 0;
    std::uint64_t removed_left = t_;
    std::uint64_t below = 0;
    NodeId v = leaf;
    for (;;) {
      const std::uint64_t here = count_[v] - below;
      std::uint64_t kept = here;
      if (removed_left > 0) {
        const auto drop = std::min<std::uint64_t>(removed_left, here);
        removed_left -= drop;
        kept -= drop;
      }
      total += static_cast<Int>(kept) * dist_[v];
      below = count_[v];
      if (v == kRoot) break;
      v = *tree_.parent(v);
    }
    return total;
  }

  void add(NodeId leaf) {
    for (NodeId v = leaf;; v = *tree_.parent(v)) {
      ++count_[v];
      if (v == kRoot) break;
    }
  }

  const RootedTree& tree_;
  std::size_t t_;
  TieBreakPolicy policy_;
  std::mt19937_64 rng_;
  std::vector<std::uint64_t> count_;
  std::vector<NodeId> leaves_;
  std::vector<Int> dist_;
};

template <class Int>
std::vector<Rational> run_greedy(const RootedTree& tree, const Scaled& scaled, std::size_t t, std::size_t n_max,
                                 TieBreakPolicy policy) {
  GreedyEngine<Int> engine(tree, scaled, t, policy);
  std::vector<Rational> values;
  values.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto s = engine.select(n);
    if (!s) {
      throw Exhausted("boundary exhausted after " + std::to_string(n) + " selections (requested " +
                      std::to_string(n_max + 1) + ")");
    }
    values.emplace_back(BigInt(*s), scaled.scale);
  }
  return values;
}

std::vector<Rational> greedy_values(const RootedTree& tree, std::size_t t, std::size_t n_max, TieBreakPolicy policy) {
  const Scaled scaled = scale_lengths(tree);
  BigInt max_dist = 0;
  for (const auto& d : scaled.dist) max_dist = std::max(max_dist, d);
  const BigInt bound = max_dist * (n_max + 1);
  if (bound < (BigInt(1) << 62)) return run_greedy<std::int64_t>(tree, scaled, t, n_max, policy);
  return run_greedy<BigInt>(tree, scaled, t, n_max, policy);
}

}  // namespace

FactorialSequence factorials_greedy_oracle(const RootedTree& tree, std::size_t n_max) {
  return FactorialSequence{greedy_values(tree, 0, n_max, TieBreakPolicy::canonical()), Provenance::Greedy, 0};
}

FactorialSequence factorials_removed(const TreeSource& source, std::size_t t, std::size_t n_max,
                                     TieBreakPolicy policy, std::optional<std::uint32_t> depth) {
  if (n_max < t) throw InvalidArgument("removed factorials need n_max >= t");
  std::vector<Rational> values;
  if (const RootedTree* tree = source.tree(); tree && !depth) {
    values = greedy_values(*tree, t, n_max, policy);
  } else if (depth) {
    values = greedy_values(expand(source, *depth), t, n_max, policy);
  } else {
    // Deepen until some level holds n_max + 1 vertices or the tree stops growing.
    RootedTree truncated = expand(source, 1);
    for (std::uint32_t d = 1;; ++d) {
      std::size_t at_depth = 0;
      for (NodeId v = 0; v < truncated.size(); ++v) at_depth += truncated.generation(v) == d;
      RootedTree deeper = expand(source, d + 1);
      if (at_depth >= n_max + 1 || deeper.size() == truncated.size() || d >= 64) break;
      truncated = std::move(deeper);
    }
    values = greedy_values(truncated, t, n_max, policy);
  }
  return FactorialSequence{std::move(values), Provenance::Removed, t};
}

}  // namespace treefac

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "treefac/lazy_tree.hpp"
#include "treefac/numeric.hpp"
#include "treefac/source.hpp"

namespace treefac {

struct TieBreakPolicy {
  enum class Kind { Canonical, SeededRandom };
  Kind kind = Kind::Canonical;
  std::uint64_t seed = 0;

  static TieBreakPolicy canonical() { return {}; }
  static TieBreakPolicy seeded(std::uint64_t seed) { return {Kind::SeededRandom, seed}; }
};

/// Safety limits for lazy sources. Strict paths longer than max_path_length
/// (in length units) or arenas beyond max_nodes raise DepthBudgetExceeded.
/// Explicit trees are finite and skip the length check.
struct WeightingLimits {
  Rational max_path_length = 1'000'000;
  std::size_t max_nodes = LazyTree::kDefaultMaxNodes;
};

enum class StepCase {
  Initial,   // a_0: the first strict path from the root
  RootLeaf,  // the tree is a single vertex
  Extend,    // x is not clear: one new strict path below x
  Open,      // x is clear and branching: two new strict paths below x
  Repeat,    // x is a leaf: weights along [root, x] only
};

const char* step_case_name(StepCase c);

struct StepRecord {
  std::size_t n = 0;
  NodeId vertex = 0;
  StepCase kind = StepCase::Initial;
  Rational value;
};

/// The local weighting process. Each call to step() emits the next term.
/// Every vertex caches the cheapest unsaturated vertex of its subtree
/// (weighted length measured from the vertex itself), so a step costs
/// O(depth * branching) plus the new strict paths.
class WeightingProcess {
 public:
  explicit WeightingProcess(TreeSource source, TieBreakPolicy policy = {}, WeightingLimits limits = {});
  WeightingProcess(const WeightingProcess&) = delete;
  WeightingProcess& operator=(const WeightingProcess&) = delete;

  /// Emits the next term, or nullopt once no unsaturated vertex remains.
  std::optional<StepRecord> step();
  /// Runs until `count` terms exist or the process stops.
  void run(std::size_t count);

  const std::vector<Rational>& values() const { return values_; }
  std::size_t steps() const { return values_.size(); }
  bool finished() const { return finished_; }
  const std::optional<StepRecord>& last_step() const { return last_; }

  /// Weight of the edge parent(v) -> v (0 means unweighted).
  std::uint64_t weight(NodeId v) const { return v < state_.size() ? state_[v].weight : 0; }
  /// Sum of weight * length along [root, v].
  Rational weighted_length(NodeId v) const;
  /// Current unsaturated vertices (linear scan, for tests).
  std::vector<NodeId> frontier() const;
  bool is_unsaturated(NodeId v) const;

  LazyTree& tree() { return tree_; }
  const LazyTree& tree() const { return tree_; }

 private:
  struct Best {
    Rational value;
    std::uint64_t key = 0;
    NodeId vertex = 0;
  };
  struct State {
    std::uint64_t weight = 0;
    std::uint32_t unweighted_children = 0;
    std::uint32_t next_child = 0;  // canonical scan position
    bool in_tree = false;
    std::optional<Best> best;
  };

  void ensure_state();
  std::uint64_t key_of(NodeId v) const;
  NodeId pick_unweighted_child(NodeId v);
  /// Weights the strict path starting with edge v -> c; returns its vertices top down.
  void weight_strict_path(NodeId c, std::vector<NodeId>& path);
  void recompute(NodeId v);
  void increment_to_root(NodeId x);

  TreeSource source_;
  LazyTree tree_;
  TieBreakPolicy policy_;
  WeightingLimits limits_;
  std::mt19937_64 rng_;
  std::vector<State> state_;
  std::vector<Rational> values_;
  std::optional<StepRecord> last_;
  bool finished_ = false;
  bool root_leaf_ = false;
  std::vector<NodeId> scratch_;
  Rational best_scratch_;
  Rational candidate_scratch_;
};

}  // namespace treefac

#include "treefac/weighting.hpp"

#include "treefac/error.hpp"

namespace treefac {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

const char* step_case_name(StepCase c) {
  switch (c) {
    case StepCase::Initial: return "0";
    case StepCase::RootLeaf: return "root";
    case StepCase::Extend: return "1";
    case StepCase::Open: return "2.1";
    case StepCase::Repeat: return "2.2";
  }
  return "?";
}

WeightingProcess::WeightingProcess(TreeSource source, TieBreakPolicy policy, WeightingLimits limits)
    : source_(std::move(source)),
      tree_(source_, limits.max_nodes),
      policy_(policy),
      limits_(std::move(limits)),
      rng_(splitmix64(policy.seed)) {
  const auto root_children = tree_.is_leaf(kRoot) ? 0 : tree_.child_count(kRoot);
  ensure_state();
  state_[kRoot].unweighted_children = root_children;
  state_[kRoot].in_tree = true;
}

void WeightingProcess::ensure_state() {
  if (state_.size() < tree_.size()) state_.resize(tree_.size());
}

std::uint64_t WeightingProcess::key_of(NodeId v) const {
  if (policy_.kind == TieBreakPolicy::Kind::Canonical) return v;
  return splitmix64(policy_.seed ^ splitmix64(v));
}

bool WeightingProcess::is_unsaturated(NodeId v) const {
  if (v >= state_.size() || !state_[v].in_tree) return false;
  if (tree_.is_leaf(v)) {
    if (v == kRoot) return false;
    return tree_.capacity(v)->exceeds(state_[v].weight);
  }
  return state_[v].unweighted_children > 0;
}

std::vector<NodeId> WeightingProcess::frontier() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < state_.size(); ++v) {
    if (is_unsaturated(v)) out.push_back(v);
  }
  return out;
}

Rational WeightingProcess::weighted_length(NodeId v) const {
  Rational total = 0;
  for (; v != kRoot; v = *tree_.parent(v)) total += state_[v].weight * tree_.length(v);
  return total;
}

NodeId WeightingProcess::pick_unweighted_child(NodeId v) {
  const auto count = tree_.child_count(v);
  ensure_state();
  State& s = state_[v];
  if (policy_.kind == TieBreakPolicy::Kind::Canonical) {
    while (state_[tree_.child(v, s.next_child)].weight != 0) ++s.next_child;
    return tree_.child(v, s.next_child++);
  }
  std::uniform_int_distribution<std::uint32_t> pick(0, s.unweighted_children - 1);
  auto k = pick(rng_);
  for (std::uint32_t i = 0; i < count; ++i) {
    const NodeId c = tree_.child(v, i);
    if (state_[c].weight == 0 && k-- == 0) return c;
  }
  throw std::logic_error("no unweighted child");
}

void WeightingProcess::weight_strict_path(NodeId c, std::vector<NodeId>& path) {
  --state_[*tree_.parent(c)].unweighted_children;
  Rational length = 0;
  NodeId cur = c;
  for (;;) {
    length += tree_.length(cur);
    if (!source_.is_explicit() && length > limits_.max_path_length) {
      throw DepthBudgetExceeded("strict path exceeds length budget " + to_string(limits_.max_path_length));
    }
    const auto count = tree_.is_leaf(cur) ? 0 : tree_.child_count(cur);
    ensure_state();
    State& s = state_[cur];
    s.weight = 1;
    s.in_tree = true;
    path.push_back(cur);
    if (count != 1) {
      s.unweighted_children = count;
      return;
    }
    s.unweighted_children = 0;
    cur = tree_.child(cur, 0);
  }
}

void WeightingProcess::recompute(NodeId v) {
  // Works in the scratch values to avoid allocating per call.
  bool found = false;
  std::uint64_t key = 0;
  NodeId vertex = 0;
  if (is_unsaturated(v)) {
    found = true;
    best_scratch_ = 0;
    key = key_of(v);
    vertex = v;
  }
  if (!tree_.is_leaf(v)) {
    const auto count = tree_.child_count(v);
    for (std::uint32_t i = 0; i < count; ++i) {
      const NodeId c = tree_.child(v, i);
      const State& s = state_[c];
      if (s.weight == 0 || !s.best) continue;
      candidate_scratch_ = tree_.length(c);
      candidate_scratch_ *= s.weight;
      candidate_scratch_ += s.best->value;
      if (!found || candidate_scratch_ < best_scratch_ ||
          (candidate_scratch_ == best_scratch_ && s.best->key < key)) {
        std::swap(best_scratch_, candidate_scratch_);
        found = true;
        key = s.best->key;
        vertex = s.best->vertex;
      }
    }
  }
  auto& best = state_[v].best;
  if (!found) {
    best.reset();
    return;
  }
  if (!best) best.emplace();
  std::swap(best->value, best_scratch_);
  best->key = key;
  best->vertex = vertex;
}

void WeightingProcess::increment_to_root(NodeId x) {
  for (NodeId v = x; v != kRoot; v = *tree_.parent(v)) ++state_[v].weight;
}

std::optional<StepRecord> WeightingProcess::step() {
  if (finished_) return std::nullopt;
  const std::size_t n = values_.size();
  StepRecord rec;
  rec.n = n;

  if (n == 0) {
    rec.vertex = kRoot;
    rec.value = 0;
    if (tree_.is_leaf(kRoot)) {
      root_leaf_ = true;
      rec.kind = StepCase::RootLeaf;
    } else {
      rec.kind = StepCase::Initial;
      scratch_.clear();
      weight_strict_path(pick_unweighted_child(kRoot), scratch_);
      for (auto it = scratch_.rbegin(); it != scratch_.rend(); ++it) recompute(*it);
      recompute(kRoot);
    }
  } else if (root_leaf_) {
    if (!tree_.capacity(kRoot)->exceeds(n)) {
      finished_ = true;
      return std::nullopt;
    }
    rec.vertex = kRoot;
    rec.kind = StepCase::RootLeaf;
    rec.value = 0;
  } else {
    const auto& root_best = state_[kRoot].best;
    if (!root_best) {
      finished_ = true;
      return std::nullopt;
    }
    const NodeId x = root_best->vertex;
    rec.vertex = x;
    rec.value = root_best->value;

    scratch_.clear();
    std::size_t split = 0;
    if (tree_.is_leaf(x)) {
      rec.kind = StepCase::Repeat;
    } else if (state_[x].unweighted_children == tree_.child_count(x)) {
      rec.kind = StepCase::Open;
      weight_strict_path(pick_unweighted_child(x), scratch_);
      split = scratch_.size();
      weight_strict_path(pick_unweighted_child(x), scratch_);
    } else {
      rec.kind = StepCase::Extend;
      weight_strict_path(pick_unweighted_child(x), scratch_);
    }
    increment_to_root(x);
    // Recompute each new strict path bottom-up, then [root, x].
    for (std::size_t i = split; i-- > 0;) recompute(scratch_[i]);
    for (std::size_t i = scratch_.size(); i-- > split;) recompute(scratch_[i]);
    for (NodeId v = x;; v = *tree_.parent(v)) {
      recompute(v);
      if (v == kRoot) break;
    }
  }

  values_.push_back(rec.value);
  last_ = rec;
  return rec;
}

void WeightingProcess::run(std::size_t count) {
  while (values_.size() < count && step()) {
  }
}

}  // namespace treefac

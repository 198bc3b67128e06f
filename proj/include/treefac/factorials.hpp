#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treefac/numeric.hpp"
#include "treefac/source.hpp"
#include "treefac/tree.hpp"
#include "treefac/weighting.hpp"

namespace treefac {

enum class Provenance { Weighting, Greedy, MinMax, Removed, Adelic };

struct FactorialSequence {
  std::vector<Rational> values;
  Provenance provenance = Provenance::Weighting;
  std::size_t t = 0;  // removed count, only for Provenance::Removed

  std::size_t size() const { return values.size(); }
  const Rational& operator[](std::size_t n) const { return values[n]; }
  /// "weighting", "greedy", "minmax", "removed(t)" or "adelic".
  std::string provenance_name() const;
};

/// 1 + sum over branching vertices of (br - 1) + sum over leaves of (chi - 1).
Count capacity_bound(const RootedTree& tree);

/// a_0 .. a_{min(n_max, N-1)} from the weighting process.
FactorialSequence factorials_weighting(const TreeSource& source, std::size_t n_max, TieBreakPolicy policy = {},
                                       WeightingLimits limits = {});

/// Greedy selection over the extended boundary minimizing the sum of
/// pairings with earlier selections. Throws Exhausted when capacities run
/// out before n_max.
FactorialSequence factorials_greedy_oracle(const RootedTree& tree, std::size_t n_max);

/// Recursive min-max formula, per subtree. Throws IndexOutOfRange if n_max >= N.
FactorialSequence factorials_minmax(const RootedTree& tree, std::size_t n_max);

/// Greedy variant whose score drops the t largest pairing terms. The first
/// t selections follow the policy and have value 0. Lazy sources run on a
/// truncation: `depth` if given, otherwise the smallest depth with at least
/// n_max + 1 vertices.
FactorialSequence factorials_removed(const TreeSource& source, std::size_t t, std::size_t n_max,
                                     TieBreakPolicy policy = {}, std::optional<std::uint32_t> depth = {});

struct LimitEstimate {
  Rational value;        // a_n / n at the last index
  Rational lower_bound;  // max_k a_k / k
  bool likely_divergent = false;
  std::size_t tail_window = 0;
};

/// Requires at least two terms. The divergence flag is raised when a_n/n
/// grows by more than `slope_threshold` (relative) over the last quarter.
LimitEstimate limit_estimate(const FactorialSequence& seq, double slope_threshold = 0.01);

/// First (m, n) with a_{m+n} < a_m + a_n, if any.
std::optional<std::pair<std::size_t, std::size_t>> superadditivity_violation(const std::vector<Rational>& a);

}  // namespace treefac

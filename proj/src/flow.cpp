#include "treefac/flow.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "treefac/error.hpp"

namespace treefac {

std::vector<std::optional<Rational>> subtree_resistances(const RootedTree& tree) {
  std::vector<std::optional<Rational>> r(tree.size());
  for (NodeId v = static_cast<NodeId>(tree.size()); v-- > 0;) {
    if (auto cap = tree.capacity(v)) {
      if (cap->is_infinite()) r[v] = Rational(0);
      continue;
    }
    Rational conductance = 0;
    bool any = false;
    for (NodeId c : tree.children(v)) {
      if (!r[c]) continue;
      conductance += 1 / (tree.length(c) + *r[c]);
      any = true;
    }
    if (any) r[v] = 1 / conductance;
  }
  return r;
}

std::vector<double> subtree_resistances_float(const RootedTree& tree) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> r(tree.size(), inf);
  std::vector<double> len(tree.size(), 0);
  for (NodeId v = 1; v < tree.size(); ++v) len[v] = to_double(tree.length(v));
  for (NodeId v = static_cast<NodeId>(tree.size()); v-- > 0;) {
    if (auto cap = tree.capacity(v)) {
      if (cap->is_infinite()) r[v] = 0;
      continue;
    }
    double conductance = 0;
    for (NodeId c : tree.children(v)) {
      if (std::isfinite(r[c])) conductance += 1 / (len[c] + r[c]);
    }
    if (conductance > 0) r[v] = 1 / conductance;
  }
  return r;
}

Rational effective_resistance(const RootedTree& tree) {
  auto r = subtree_resistances(tree);
  if (!r[kRoot]) throw AllOpenCircuit("no leaf of capacity infinity: the root is not connected to the boundary");
  return *r[kRoot];
}

double effective_resistance_float(const RootedTree& tree) {
  const double r = subtree_resistances_float(tree)[kRoot];
  if (!std::isfinite(r)) throw AllOpenCircuit("no leaf of capacity infinity: the root is not connected to the boundary");
  return r;
}

ResistanceResult effective_resistance(const TreeSource& source, std::uint32_t depth, SolveMode mode) {
  ResistanceResult result;
  result.depth = depth;

  if (is_spherically_symmetric(source)) {
    // R_h = sum over levels of length_k / count_k.
    const auto probe = level_profile(source, depth, false);
    bool exact = mode == SolveMode::Exact;
    if (mode == SolveMode::Auto) {
      double vertices = 1;
      for (double lc : probe.log_count) vertices += std::exp(lc);
      exact = vertices <= static_cast<double>(kFloatThreshold);
    }
    result.exact = exact;
    if (exact) {
      const auto profile = level_profile(source, depth, true);
      Rational sum = 0;
      for (std::uint32_t k = 0; k < depth; ++k) {
        sum += profile.length[k] / Rational(profile.count[k]);
        result.per_depth_exact.emplace_back(sum);
        result.per_depth.push_back(to_double(sum));
      }
      result.value = sum;
      result.approx = to_double(sum);
    } else {
      double sum = 0;
      for (std::uint32_t k = 0; k < depth; ++k) {
        sum += std::exp(probe.log_length[k] - probe.log_count[k]);
        result.per_depth.push_back(sum);
      }
      result.approx = sum;
    }
    return result;
  }

  const RootedTree full = expand(source, depth);
  result.exact = mode == SolveMode::Exact || (mode == SolveMode::Auto && full.size() <= kFloatThreshold);
  for (std::uint32_t k = 1; k <= depth; ++k) {
    const RootedTree truncated = k == depth ? full : expand(source, k);
    if (result.exact) {
      const auto r = subtree_resistances(truncated)[kRoot];
      result.per_depth_exact.push_back(r);
      result.per_depth.push_back(r ? to_double(*r) : std::numeric_limits<double>::infinity());
    } else {
      result.per_depth.push_back(subtree_resistances_float(truncated)[kRoot]);
    }
  }
  if (result.exact) {
    result.value = effective_resistance(full);
    result.approx = to_double(*result.value);
  } else {
    result.approx = effective_resistance_float(full);
  }
  return result;
}

Rational FlowAssignment::energy() const {
  if (!exact) throw InvalidArgument("exact energy needs an exact flow");
  Rational total = 0;
  for (NodeId v = 1; v < tree.size(); ++v) total += tree.length(v) * flow[v] * flow[v];
  return total;
}

double FlowAssignment::energy_float() const {
  double total = 0;
  for (NodeId v = 1; v < tree.size(); ++v) total += to_double(tree.length(v)) * flow_float[v] * flow_float[v];
  return total;
}

double FlowAssignment::conservation_defect() const {
  double worst = 0;
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    if (exact) {
      Rational out = 0;
      for (NodeId c : tree.children(v)) out += flow[c];
      if (out != flow[v]) worst = std::max(worst, std::abs(to_double(out - flow[v])));
    } else {
      double out = 0;
      for (NodeId c : tree.children(v)) out += flow_float[c];
      worst = std::max(worst, std::abs(out - flow_float[v]));
    }
  }
  return worst;
}

FlowAssignment unit_current_flow(const RootedTree& tree, SolveMode mode) {
  FlowAssignment fa{tree, mode == SolveMode::Exact || (mode == SolveMode::Auto && tree.size() <= kFloatThreshold), {}, {}};
  fa.flow_float.assign(tree.size(), 0);
  if (fa.exact) {
    const auto r = subtree_resistances(tree);
    if (!r[kRoot]) throw AllOpenCircuit("no leaf of capacity infinity: the root is not connected to the boundary");
    fa.flow.assign(tree.size(), Rational(0));
    fa.flow[kRoot] = 1;
    // Parents precede children in id order.
    for (NodeId v = 0; v < tree.size(); ++v) {
      if (tree.is_leaf(v) || fa.flow[v] == 0) continue;
      for (NodeId c : tree.children(v)) {
        if (r[c]) fa.flow[c] = fa.flow[v] * *r[v] / (tree.length(c) + *r[c]);
      }
    }
    for (NodeId v = 0; v < tree.size(); ++v) fa.flow_float[v] = to_double(fa.flow[v]);
  } else {
    const auto r = subtree_resistances_float(tree);
    if (!std::isfinite(r[kRoot])) {
      throw AllOpenCircuit("no leaf of capacity infinity: the root is not connected to the boundary");
    }
    fa.flow_float[kRoot] = 1;
    for (NodeId v = 0; v < tree.size(); ++v) {
      if (tree.is_leaf(v) || fa.flow_float[v] == 0) continue;
      for (NodeId c : tree.children(v)) {
        if (std::isfinite(r[c])) fa.flow_float[c] = fa.flow_float[v] * r[v] / (to_double(tree.length(c)) + r[c]);
      }
    }
  }
  return fa;
}

FlowAssignment unit_current_flow(const TreeSource& source, std::uint32_t depth, SolveMode mode) {
  return unit_current_flow(expand(source, depth), mode);
}

HarmonicProfile harmonic_profile(const TreeSource& source, std::uint32_t depth) {
  HarmonicProfile hp{expand(source, depth), {}, {}, {}};
  const RootedTree& tree = hp.tree;
  const auto r = subtree_resistances(tree);
  if (!r[kRoot]) throw AllOpenCircuit("no leaf of capacity infinity: the root is not connected to the boundary");
  hp.h.assign(tree.size(), Rational(0));
  hp.finite_subtree.assign(tree.size(), false);
  hp.edge_limit.assign(tree.size(), Rational(0));
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (r[v]) {
      hp.h[v] = *r[v];
    } else {
      hp.finite_subtree[v] = true;
    }
  }
  // Product of H_{parent(w)} / (H_w + length(w)) along [root, v].
  for (NodeId v = 1; v < tree.size(); ++v) {
    if (hp.finite_subtree[v]) continue;
    const NodeId u = *tree.parent(v);
    const Rational upstream = u == kRoot ? Rational(1) : hp.edge_limit[u];
    hp.edge_limit[v] = upstream * hp.h[u] / (hp.h[v] + tree.length(v));
  }
  return hp;
}

EquidistributionReport equidistribution_check(WeightingProcess& process, const FlowAssignment& flow,
                                              std::uint32_t depth) {
  EquidistributionReport report;
  report.n = process.steps();
  report.depth = depth;
  if (report.n == 0) return report;
  const double n = static_cast<double>(report.n);
  LazyTree& arena = process.tree();
  const RootedTree& tree = flow.tree;
  // Children are listed in the same order in both trees, so vertices are
  // matched by walking child ranks.
  std::deque<std::pair<NodeId, NodeId>> queue;  // (flow tree id, arena id)
  queue.emplace_back(kRoot, kRoot);
  while (!queue.empty()) {
    const auto [f, a] = queue.front();
    queue.pop_front();
    if (tree.is_leaf(f) || tree.generation(f) >= depth) continue;
    const auto kids = tree.children(f);
    if (arena.is_leaf(a) || arena.child_count(a) != kids.size()) {
      throw Mismatch("flow tree and weighting arena disagree below vertex " + std::to_string(f));
    }
    for (std::uint32_t i = 0; i < kids.size(); ++i) {
      const NodeId fc = kids[i];
      const NodeId ac = arena.child(a, i);
      EdgeDeviation e;
      e.child = fc;
      e.depth = tree.generation(fc);
      e.normalized_weight = static_cast<double>(process.weight(ac)) / n;
      e.flow = flow.value(fc);
      const double dev = std::abs(e.normalized_weight - e.flow);
      if (dev > report.max_deviation || report.edges.empty()) {
        report.max_deviation = std::max(report.max_deviation, dev);
        report.worst_edge = fc;
      }
      report.edges.push_back(e);
      queue.emplace_back(fc, ac);
    }
  }
  return report;
}

}  // namespace treefac

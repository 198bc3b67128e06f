#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treefac/numeric.hpp"
#include "treefac/source.hpp"
#include "treefac/tree.hpp"
#include "treefac/weighting.hpp"

namespace treefac {

/// Auto switches to floating point above kFloatThreshold vertices.
enum class SolveMode { Auto, Exact, Float };
inline constexpr std::size_t kFloatThreshold = 10'000;

/// Capacity-infinity leaves are shorted to the boundary vertex; finite
/// capacity leaves are open circuits.
struct ResistanceResult {
  bool exact = true;
  std::optional<Rational> value;  // set in exact mode
  double approx = 0;
  std::uint32_t depth = 0;
  /// Resistance of the depth-k truncation for k = 1..depth (index k-1).
  /// Entries are nondecreasing; infinite (open) truncations are +inf / nullopt.
  std::vector<std::optional<Rational>> per_depth_exact;
  std::vector<double> per_depth;

  std::string mode_name() const { return exact ? "exact" : "float"; }
};

/// Subtree resistances R(v) to the shorted boundary; nullopt means open.
std::vector<std::optional<Rational>> subtree_resistances(const RootedTree& tree);
std::vector<double> subtree_resistances_float(const RootedTree& tree);

/// R(root) of an explicit tree. Throws AllOpenCircuit without a shorted leaf.
Rational effective_resistance(const RootedTree& tree);
double effective_resistance_float(const RootedTree& tree);

ResistanceResult effective_resistance(const TreeSource& source, std::uint32_t depth, SolveMode mode = SolveMode::Auto);

/// Dense exact solve of the Laplace equation with the shorted leaves
/// identified to one grounded vertex. Returns F(boundary) - F(root).
Rational laplacian_H_finite(const RootedTree& tree);

/// Values are indexed by the child vertex of each edge; entry 0 is the
/// total leaving the root.
struct FlowAssignment {
  RootedTree tree;
  bool exact = true;
  std::vector<Rational> flow;        // exact mode only
  std::vector<double> flow_float;    // always filled

  double value(NodeId child) const { return flow_float[child]; }
  /// Sum of length * flow^2 (exact mode).
  Rational energy() const;
  double energy_float() const;
  /// Largest |inflow - outflow| over internal vertices (0 when conserved).
  double conservation_defect() const;
};

FlowAssignment unit_current_flow(const TreeSource& source, std::uint32_t depth, SolveMode mode = SolveMode::Auto);
FlowAssignment unit_current_flow(const RootedTree& tree, SolveMode mode = SolveMode::Auto);

/// Per-vertex H_v on the truncation (the subtree resistance; 0 for subtrees
/// without a shorted leaf) and per-edge limits of the normalized weights.
struct HarmonicProfile {
  RootedTree tree;
  std::vector<Rational> h;
  std::vector<bool> finite_subtree;  // no shorted leaf below v
  std::vector<Rational> edge_limit;  // indexed by child vertex; entry 0 unused
};

HarmonicProfile harmonic_profile(const TreeSource& source, std::uint32_t depth);

struct EdgeDeviation {
  NodeId child = 0;  // id in the flow tree
  std::uint32_t depth = 0;
  double normalized_weight = 0;  // omega_n(e) / n
  double flow = 0;
};

struct EquidistributionReport {
  std::size_t n = 0;
  std::uint32_t depth = 0;
  double max_deviation = 0;
  NodeId worst_edge = 0;
  std::vector<EdgeDeviation> edges;
};

/// Compares omega_n / n from a weighting run with a unit current flow on
/// the same source, over edges whose child has depth <= `depth`.
EquidistributionReport equidistribution_check(WeightingProcess& process, const FlowAssignment& flow,
                                              std::uint32_t depth);

struct WalkConfig {
  std::uint64_t trials = 100'000;
  std::uint64_t max_steps = 1'000'000;
  std::uint64_t seed = 0;
};

struct WalkResult {
  double estimate = 0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  std::uint64_t unresolved = 0;  // hit max_steps, counted as failures
  double std_error = 0;
};

/// Fraction of walks from the root (transition weights 1/length) that reach
/// depth h or a shorted leaf before returning to the root. A heuristic
/// transience indicator.
WalkResult random_walk_escape(const TreeSource& source, const WalkConfig& config, std::uint32_t depth);

/// 1 / (sum of root conductances * effective resistance), exact.
Rational exact_escape_probability(const TreeSource& source, std::uint32_t depth);

enum class Classification { Convergent, Divergent, Inconclusive };
const char* classification_name(Classification c);

struct LambdaEvaluation {
  Rational lambda;
  Classification verdict = Classification::Inconclusive;
  std::vector<std::pair<std::uint32_t, double>> resistances;  // (depth, R)
};

struct BranchingOptions {
  Rational lambda_lo = 1;
  Rational lambda_hi = 4;
  Rational tol = Rational(1, 20);  // interval width
  std::vector<std::uint32_t> schedule = {8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384, 32768, 65536};
  double divergence_threshold = 1e6;
  double convergence_tol = 1e-9;  // relative change between schedule depths
  std::size_t max_nodes = 2'000'000;
};

struct BranchingEstimate {
  Rational lo;
  Rational hi;
  bool below_range = false;  // lambda_lo already divergent
  bool above_range = false;  // lambda_hi still convergent
  std::vector<LambdaEvaluation> evaluations;
};

/// Classifies the resistance of the lambda-scaled source along the depth schedule.
/// Divergent once R is huge or an increment at least doubles the previous one;
/// convergent once the relative change drops below convergence_tol.
LambdaEvaluation classify_lambda(const TreeSource& source, const Rational& lambda, const BranchingOptions& options);

/// Bisection on lambda. Throws Inconclusive when some evaluation cannot be classified.
BranchingEstimate branching_number_estimate(const TreeSource& source, const BranchingOptions& options = {});

}  // namespace treefac

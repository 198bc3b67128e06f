#include <cmath>

#include "treefac/error.hpp"
#include "treefac/flow.hpp"

namespace treefac {

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Convergent: return "convergent";
    case Classification::Divergent: return "divergent";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "?";
}

LambdaEvaluation classify_lambda(const TreeSource& source, const Rational& lambda, const BranchingOptions& options) {
  LambdaEvaluation eval;
  eval.lambda = lambda;
  if (options.schedule.empty()) return eval;
  const TreeSource scaled = TreeSource::lambda_scaled(source, lambda);
  const std::uint32_t deepest = options.schedule.back();

  // Resistance at each schedule depth, computed incrementally for symmetric
  // sources and by reduction on truncations otherwise.
  std::vector<double> symmetric_sums;
  if (is_spherically_symmetric(scaled)) {
    const auto profile = level_profile(scaled, deepest, false);
    symmetric_sums.resize(deepest + 1, 0);
    for (std::uint32_t k = 1; k <= deepest; ++k) {
      symmetric_sums[k] = symmetric_sums[k - 1] + std::exp(profile.log_length[k - 1] - profile.log_count[k - 1]);
    }
  }

  // A convergent tail has shrinking increments; doubling the depth at or
  // past the branching number at least doubles them.
  double previous = 0;
  double increment = 0;
  for (std::size_t i = 0; i < options.schedule.size(); ++i) {
    const std::uint32_t h = options.schedule[i];
    double r = 0;
    if (!symmetric_sums.empty()) {
      r = symmetric_sums[h];
    } else {
      std::optional<RootedTree> truncated;
      try {
        truncated = expand(scaled, h, options.max_nodes);
      } catch (const DepthBudgetExceeded&) {
        return eval;  // inconclusive
      }
      r = subtree_resistances_float(*truncated)[kRoot];
    }
    eval.resistances.emplace_back(h, r);
    if (!std::isfinite(r) || r > options.divergence_threshold ||
        (i > 1 && increment > 0 && r - previous >= 2 * increment)) {
      eval.verdict = Classification::Divergent;
      return eval;
    }
    if (i > 0 && std::abs(r - previous) <= options.convergence_tol * r) {
      eval.verdict = Classification::Convergent;
      return eval;
    }
    increment = r - previous;
    previous = r;
  }
  return eval;
}

BranchingEstimate branching_number_estimate(const TreeSource& source, const BranchingOptions& options) {
  if (!(options.lambda_lo < options.lambda_hi)) throw InvalidArgument("need lambda_lo < lambda_hi");
  if (options.lambda_lo <= 0) throw InvalidArgument("lambda_lo must be positive");
  BranchingEstimate est;
  auto evaluate = [&](const Rational& lambda) {
    est.evaluations.push_back(classify_lambda(source, lambda, options));
    const auto verdict = est.evaluations.back().verdict;
    if (verdict == Classification::Inconclusive) {
      throw Inconclusive("resistance at lambda=" + to_string(lambda) + " was not classified within the depth schedule");
    }
    return verdict;
  };

  if (evaluate(options.lambda_lo) == Classification::Divergent) {
    est.lo = est.hi = options.lambda_lo;
    est.below_range = true;
    return est;
  }
  if (evaluate(options.lambda_hi) == Classification::Convergent) {
    est.lo = est.hi = options.lambda_hi;
    est.above_range = true;
    return est;
  }
  Rational lo = options.lambda_lo;
  Rational hi = options.lambda_hi;
  while (hi - lo > options.tol) {
    const Rational mid = (lo + hi) / 2;
    if (evaluate(mid) == Classification::Convergent) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  est.lo = lo;
  est.hi = hi;
  return est;
}

}  // namespace treefac

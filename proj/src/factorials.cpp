#include "treefac/factorials.hpp"

#include "treefac/error.hpp"

namespace treefac {

std::string FactorialSequence::provenance_name() const {
  switch (provenance) {
    case Provenance::Weighting: return "weighting";
    case Provenance::Greedy: return "greedy";
    case Provenance::MinMax: return "minmax";
    case Provenance::Removed: return "removed(" + std::to_string(t) + ")";
    case Provenance::Adelic: return "adelic";
  }
  return "unknown";
}

Count capacity_bound(const RootedTree& tree) {
  std::uint64_t total = 1;
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (auto cap = tree.capacity(v)) {
      if (cap->is_infinite()) return Count::infinity();
      total += cap->value() - 1;
    } else {
      const auto br = tree.children(v).size();
      if (br >= 2) total += br - 1;
    }
  }
  return Count::finite(total);
}

FactorialSequence factorials_weighting(const TreeSource& source, std::size_t n_max, TieBreakPolicy policy,
                                       WeightingLimits limits) {
  WeightingProcess process(source, policy, std::move(limits));
  process.run(n_max + 1);
  return FactorialSequence{process.values(), Provenance::Weighting, 0};
}

LimitEstimate limit_estimate(const FactorialSequence& seq, double slope_threshold) {
  if (seq.size() < 2) throw InvalidArgument("limit estimate needs at least two terms");
  const std::size_t last = seq.size() - 1;
  LimitEstimate est;
  est.value = seq[last] / last;
  est.lower_bound = seq[1];
  for (std::size_t k = 2; k <= last; ++k) {
    Rational r = seq[k] / k;
    if (r > est.lower_bound) est.lower_bound = std::move(r);
  }
  est.tail_window = std::max<std::size_t>(1, last / 4);
  const std::size_t earlier = last - est.tail_window;
  if (earlier >= 1) {
    const double now = to_double(est.value);
    const double before = to_double(seq[earlier] / earlier);
    est.likely_divergent = now - before > slope_threshold * std::max(now, 1e-12);
  }
  return est;
}

std::optional<std::pair<std::size_t, std::size_t>> superadditivity_violation(const std::vector<Rational>& a) {
  // Scale to a common denominator so the quadratic scan runs on machine integers.
  BigInt scale = 1;
  for (const auto& x : a) scale = boost::multiprecision::lcm(scale, boost::multiprecision::denominator(x));
  const BigInt limit = BigInt(1) << 61;
  std::vector<std::int64_t> scaled;
  scaled.reserve(a.size());
  for (const auto& x : a) {
    const BigInt v = boost::multiprecision::numerator(x) * (scale / boost::multiprecision::denominator(x));
    if (v > limit || v < -limit) {
      scaled.clear();
      break;
    }
    scaled.push_back(v.convert_to<std::int64_t>());
  }
  if (scaled.size() == a.size()) {
    for (std::size_t m = 0; m < a.size(); ++m) {
      for (std::size_t n = m; m + n < a.size(); ++n) {
        if (scaled[m + n] < scaled[m] + scaled[n]) return std::make_pair(m, n);
      }
    }
    return std::nullopt;
  }
  for (std::size_t m = 0; m < a.size(); ++m) {
    for (std::size_t n = m; m + n < a.size(); ++n) {
      if (a[m + n] < a[m] + a[n]) return std::make_pair(m, n);
    }
  }
  return std::nullopt;
}

}  // namespace treefac

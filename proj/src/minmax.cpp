#include "treefac/error.hpp"
#include "treefac/factorials.hpp"

namespace treefac {
namespace {

// Value of a partial composition: invalid, "no element used yet" (acts as
// -infinity under max), or a pointer into one of the children's h tables.
template <class T>
struct Slot {
  bool valid = false;
  const T* value = nullptr;
};

// The recursion over any exact ordered value type. `length(v)` gives edge
// lengths already converted to T.
template <class T, class Length>
std::vector<T> minmax_table(const RootedTree& tree, std::size_t K, Length&& length) {
  std::vector<std::vector<T>> fac(tree.size());
  // Children have larger ids, so a reverse scan is a post-order.
  for (NodeId v = static_cast<NodeId>(tree.size()); v-- > 0;) {
    if (auto cap = tree.capacity(v)) {
      const std::size_t terms = cap->is_infinite() ? K : std::min<std::uint64_t>(K, cap->value());
      fac[v].assign(terms, T(0));
      continue;
    }
    // h[c][k - 1]: cost of the k-th element taken from child c.
    const auto& kids = tree.children(v);
    std::vector<std::vector<T>> h(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const auto& fc = fac[kids[i]];
      const T len = length(kids[i]);
      h[i].reserve(fc.size());
      for (std::size_t k = 0; k < fc.size(); ++k) h[i].push_back(fc[k] + T(k) * len);
    }
    // G(m): best value using m elements from the children processed so far.
    std::vector<Slot<T>> g(K + 1), next(K + 1);
    g[0].valid = true;
    for (const auto& hc : h) {
      for (std::size_t m = 0; m <= K; ++m) {
        Slot<T>& cur = next[m];
        cur = Slot<T>{};
        const std::size_t kmax = std::min(m, hc.size());
        for (std::size_t k = 0; k <= kmax; ++k) {
          const Slot<T>& prev = g[m - k];
          if (!prev.valid) continue;
          const T* cand = prev.value;
          if (k > 0 && (cand == nullptr || hc[k - 1] >= *cand)) cand = &hc[k - 1];
          if (!cur.valid || (cur.value != nullptr && (cand == nullptr || *cand < *cur.value))) {
            cur.valid = true;
            cur.value = cand;
          }
        }
      }
      std::swap(g, next);
    }
    for (std::size_t n = 0; n + 1 <= K && g[n + 1].valid && g[n + 1].value; ++n) fac[v].push_back(*g[n + 1].value);
    for (NodeId c : kids) std::vector<T>().swap(fac[c]);
  }
  fac[kRoot].resize(std::min(fac[kRoot].size(), K));
  return std::move(fac[kRoot]);
}

}  // namespace

FactorialSequence factorials_minmax(const RootedTree& tree, std::size_t n_max) {
  const Count bound = capacity_bound(tree);
  if (!bound.exceeds(n_max)) {
    throw IndexOutOfRange("requested index " + std::to_string(n_max) + " but the tree has only " +
                          to_string(bound) + " terms");
  }
  const std::size_t K = n_max + 1;  // terms needed at every subtree

  // Every value is an integer combination of lengths with coefficients below
  // K, so scaling by the common denominator gives exact int64 arithmetic
  // whenever K * (total scaled length) stays far from overflow.
  BigInt scale = 1;
  Rational total = 0;
  for (NodeId v = 1; v < tree.size(); ++v) {
    const BigInt& den = denominator(tree.length(v));
    scale = scale / boost::multiprecision::gcd(scale, den) * den;
    total += tree.length(v);
  }
  const BigInt limit = BigInt(1) << 60;
  if (scale < limit && total * scale * K < limit) {
    const auto scaled = minmax_table<std::int64_t>(tree, K, [&](NodeId v) {
      return static_cast<std::int64_t>(numerator(Rational(tree.length(v) * scale)));
    });
    std::vector<Rational> values;
    values.reserve(scaled.size());
    for (auto x : scaled) values.emplace_back(BigInt(x), scale);
    return FactorialSequence{std::move(values), Provenance::MinMax, 0};
  }
  return FactorialSequence{minmax_table<Rational>(tree, K, [&](NodeId v) { return tree.length(v); }),
                           Provenance::MinMax, 0};
}

}  // namespace treefac

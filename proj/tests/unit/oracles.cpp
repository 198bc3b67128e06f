#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

namespace oracle {

using treefac::Capacity;
using treefac::Node;
using treefac::NodeId;

RootedTree random_tree(std::mt19937_64& rng, const RandomTreeOptions& options) {
  std::uniform_int_distribution<std::size_t> edge_count(options.min_edges, options.max_edges);
  const std::size_t edges = edge_count(rng);
  std::vector<Node> nodes;
  nodes.push_back(Node{0, std::nullopt, std::nullopt, std::nullopt});
  for (std::size_t i = 1; i <= edges; ++i) {
    const auto parent = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
    const auto& len = options.lengths[std::uniform_int_distribution<std::size_t>(0, options.lengths.size() - 1)(rng)];
    nodes.push_back(Node{static_cast<NodeId>(i), parent, len, std::nullopt});
  }
  std::vector<bool> has_child(nodes.size(), false);
  for (const auto& n : nodes) {
    if (n.parent) has_child[*n.parent] = true;
  }
  std::vector<std::size_t> leaves;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (has_child[i]) continue;
    leaves.push_back(i);
    const auto c = options.capacities[std::uniform_int_distribution<std::size_t>(0, options.capacities.size() - 1)(rng)];
    nodes[i].capacity = c == 0 ? Capacity::infinity() : Capacity::finite(c);
  }
  if (options.require_infinite_leaf) {
    const bool any = std::any_of(leaves.begin(), leaves.end(), [&](std::size_t i) { return nodes[i].capacity->is_infinite(); });
    if (!any) nodes[leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)]].capacity = Capacity::infinity();
  }
  return RootedTree::from_nodes(std::move(nodes));
}

namespace {

struct Search {
  std::vector<std::vector<NodeId>> paths;  // root path of every leaf
  std::vector<std::uint64_t> cap;
  std::vector<std::vector<Rational>> pairing;
  std::vector<Rational> values;
  std::vector<std::set<std::vector<std::uint64_t>>> seen;
  std::size_t n_max = 0;
  bool consistent = true;

  void explore(std::vector<std::uint64_t>& used, std::size_t n) {
    if (n > n_max) return;
    if (!seen[n].insert(used).second) return;
    std::optional<Rational> best;
    std::vector<std::size_t> ties;
    for (std::size_t x = 0; x < used.size(); ++x) {
      if (used[x] >= cap[x]) continue;
      Rational score = 0;
      for (std::size_t y = 0; y < used.size(); ++y) score += pairing[x][y] * used[y];
      if (!best || score < *best) {
        best = score;
        ties.assign(1, x);
      } else if (score == *best) {
        ties.push_back(x);
      }
    }
    if (!best) return;
    if (values.size() == n) {
      values.push_back(*best);
    } else if (values[n] != *best) {
      consistent = false;
    }
    for (auto x : ties) {
      ++used[x];
      explore(used, n + 1);
      --used[x];
    }
  }
};

}  // namespace

std::vector<Rational> brute_force_factorials(const RootedTree& tree, std::size_t n_max, bool* consistent) {
  Search s;
  s.n_max = n_max;
  for (NodeId leaf : tree.leaves()) {
    s.paths.push_back(tree.path_from_root(leaf));
    const auto c = *tree.capacity(leaf);
    s.cap.push_back(c.is_infinite() ? n_max + 1 : c.value());
  }
  const std::size_t m = s.paths.size();
  s.pairing.assign(m, std::vector<Rational>(m, Rational(0)));
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      const auto& a = s.paths[x];
      const auto& b = s.paths[y];
      Rational common = 0;
      for (std::size_t k = 1; k < a.size() && k < b.size() && a[k] == b[k]; ++k) common += tree.length(a[k]);
      s.pairing[x][y] = common;
    }
  }
  s.seen.resize(n_max + 1);
  std::vector<std::uint64_t> used(m, 0);
  s.explore(used, 0);
  if (consistent) *consistent = s.consistent;
  return s.values;
}

double kirchhoff_resistance(const RootedTree& tree) {
  // Unknown potentials on every vertex except the shorted leaves (potential 0).
  const std::size_t n = tree.size();
  std::vector<int> index(n, -1);
  int k = 0;
  for (NodeId v = 0; v < n; ++v) {
    const auto cap = tree.capacity(v);
    if (!(cap && cap->is_infinite())) index[v] = k++;
  }
  if (index[0] < 0) return 0;
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (NodeId v = 1; v < n; ++v) {
    const NodeId u = *tree.parent(v);
    const double c = 1.0 / treefac::to_double(tree.length(v));
    for (auto [p, q] : {std::pair{u, v}, std::pair{v, u}}) {
      if (index[p] < 0) continue;
      a[index[p]][index[p]] += c;
      if (index[q] >= 0) a[index[p]][index[q]] -= c;
    }
  }
  // Vertices with no path to the boundary get potential pinned to 0 so the
  // matrix stays regular; they carry no current.
  for (int i = 0; i < k; ++i) {
    if (a[i][i] == 0) a[i][i] = 1;
  }
  a[index[0]][k] = 1;  // unit current injected at the root
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[piv], a[col]);
    if (std::abs(a[col][col]) < 1e-300) return std::numeric_limits<double>::infinity();
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0) continue;
      for (int j = col; j <= k; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return a[index[0]][k] / a[index[0]][index[0]];
}

BigInt factorial(std::uint64_t n) {
  BigInt f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

std::uint64_t valuation_of_factorial(std::uint64_t n, std::uint64_t p) {
  BigInt f = factorial(n);
  std::uint64_t e = 0;
  while (f % p == 0) {
    f /= p;
    ++e;
  }
  return e;
}

std::vector<BigInt> vandermonde_factorials(const std::vector<BigInt>& set, std::size_t n) {
  if (n >= set.size()) throw std::invalid_argument("n too large");
  std::vector<BigInt> products;  // P_k = prod_{j <= k} j!_S
  for (std::size_t k = 0; k <= n; ++k) {
    BigInt g = 0;
    std::vector<bool> pick(set.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k + 1), true);
    do {
      std::vector<BigInt> xs;
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (pick[i]) xs.push_back(set[i]);
      }
      BigInt prod = 1;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) prod *= abs(xs[j] - xs[i]);
      }
      g = boost::multiprecision::gcd(g, prod);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    products.push_back(g);
  }
  std::vector<BigInt> out{products[0]};
  for (std::size_t k = 1; k <= n; ++k) out.push_back(products[k] / products[k - 1]);
  return out;
}

RootedTree regular_tree(std::uint32_t d, std::uint32_t depth, Rational length) {
  treefac::TreeBuilder b;
  std::vector<NodeId> level{0};
  for (std::uint32_t h = 1; h <= depth; ++h) {
    std::vector<NodeId> next;
    for (NodeId v : level) {
      for (std::uint32_t i = 0; i < d; ++i) {
        next.push_back(h == depth ? b.add_child(v, length, Capacity::infinity()) : b.add_child(v, length));
      }
    }
    level = std::move(next);
  }
  return b.build();
}

}  // namespace oracle

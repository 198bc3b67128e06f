#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "treefac/error.hpp"
#include "treefac/flow.hpp"

namespace treefac {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kBlock = 4096;

struct Walker {
  const RootedTree& tree;
  std::vector<std::vector<NodeId>> neighbours;
  std::vector<std::vector<double>> cumulative;  // normalized cumulative conductances
  std::vector<bool> absorbing;

  explicit Walker(const RootedTree& t) : tree(t) {
    const auto n = tree.size();
    neighbours.resize(n);
    cumulative.resize(n);
    absorbing.assign(n, false);
    for (NodeId v = 0; v < n; ++v) {
      const auto cap = tree.capacity(v);
      absorbing[v] = v != kRoot && cap && cap->is_infinite();
      double total = 0;
      auto add = [&](NodeId w, double c) {
        neighbours[v].push_back(w);
        total += c;
        cumulative[v].push_back(total);
      };
      if (auto p = tree.parent(v)) add(*p, 1 / to_double(tree.length(v)));
      for (NodeId c : tree.children(v)) add(c, 1 / to_double(tree.length(c)));
      for (double& x : cumulative[v]) x /= total;
    }
  }

  NodeId step(NodeId v, std::mt19937_64& rng) const {
    const auto& cum = cumulative[v];
    if (cum.size() == 1) return neighbours[v][0];
    const double u = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    return neighbours[v][std::min<std::size_t>(it - cum.begin(), cum.size() - 1)];
  }

  // 1 = escaped, 0 = returned to the root, -1 = ran out of steps.
  int walk(std::mt19937_64& rng, std::uint64_t max_steps) const {
    NodeId v = step(kRoot, rng);
    for (std::uint64_t s = 1;; ++s) {
      if (absorbing[v]) return 1;
      if (v == kRoot) return 0;
      if (s >= max_steps) return -1;
      v = step(v, rng);
    }
  }
};

}  // namespace

WalkResult random_walk_escape(const TreeSource& source, const WalkConfig& config, std::uint32_t depth) {
  if (config.trials == 0 || config.max_steps == 0) throw InvalidArgument("trials and max_steps must be positive");
  if (depth == 0) throw InvalidArgument("random walk needs depth >= 1");
  const RootedTree tree = expand(source, depth);
  if (tree.is_leaf(kRoot)) throw InvalidArgument("the truncation is a single vertex");
  // Cut vertices at depth h are shorted leaves, so they absorb.
  const Walker walker(tree);

  // Independent streams per block of trials; block results are summed, so
  // the total does not depend on how blocks are spread over threads.
  const std::uint64_t blocks = (config.trials + kBlock - 1) / kBlock;
  struct Tally {
    std::uint64_t success = 0, unresolved = 0;
  };
  std::vector<Tally> tallies(blocks);
  auto run_block = [&](std::uint64_t b) {
    std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(b)));
    const std::uint64_t count = std::min(kBlock, config.trials - b * kBlock);
    for (std::uint64_t i = 0; i < count; ++i) {
      const int r = walker.walk(rng, config.max_steps);
      if (r == 1) ++tallies[b].success;
      if (r == -1) ++tallies[b].unresolved;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
    });
  }
  for (auto& t : pool) t.join();

  WalkResult result;
  result.trials = config.trials;
  for (const auto& t : tallies) {
    result.successes += t.success;
    result.unresolved += t.unresolved;
  }
  result.estimate = static_cast<double>(result.successes) / static_cast<double>(result.trials);
  result.std_error = std::sqrt(result.estimate * (1 - result.estimate) / static_cast<double>(result.trials));
  return result;
}

Rational exact_escape_probability(const TreeSource& source, std::uint32_t depth) {
  const RootedTree tree = expand(source, depth);
  Rational conductance = 0;
  for (NodeId c : tree.children(kRoot)) conductance += 1 / tree.length(c);
  if (conductance == 0) throw InvalidArgument("the truncation is a single vertex");
  return 1 / (conductance * effective_resistance(tree));
}

}  // namespace treefac

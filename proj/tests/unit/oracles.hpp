#pragma once

// Independent reference implementations used only by the tests.

#include <random>
#include <vector>

#include "treefac/numeric.hpp"
#include "treefac/tree.hpp"

namespace oracle {

using treefac::BigInt;
using treefac::Rational;
using treefac::RootedTree;

struct RandomTreeOptions {
  std::size_t min_edges = 1;
  std::size_t max_edges = 8;
  std::vector<Rational> lengths = {Rational(1), Rational(3, 2), Rational(2)};
  // 0 stands for infinity.
  std::vector<std::uint64_t> capacities = {1, 2, 0};
  bool require_infinite_leaf = false;
};

RootedTree random_tree(std::mt19937_64& rng, const RandomTreeOptions& options = {});

/// Greedy selection over leaves with multiplicity, exploring every tie.
/// Pairings come from explicit root paths. `consistent` is cleared when two
/// tie branches disagree.
std::vector<Rational> brute_force_factorials(const RootedTree& tree, std::size_t n_max, bool* consistent = nullptr);

/// Effective resistance from a dense floating point Kirchhoff solve.
double kirchhoff_resistance(const RootedTree& tree);

BigInt factorial(std::uint64_t n);
/// Exponent of p in n!, by repeated division of n!.
std::uint64_t valuation_of_factorial(std::uint64_t n, std::uint64_t p);

/// k!_S for k <= n from gcds of Vandermonde products over (k+1)-subsets.
std::vector<BigInt> vandermonde_factorials(const std::vector<BigInt>& set, std::size_t n);

/// d-regular truncation of the given depth with unit lengths and shorted cut.
RootedTree regular_tree(std::uint32_t d, std::uint32_t depth, Rational length = 1);

}  // namespace oracle

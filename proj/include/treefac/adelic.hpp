#pragma once

#include <cstdint>
#include <vector>

#include "treefac/factorials.hpp"
#include "treefac/numeric.hpp"
#include "treefac/tree.hpp"

namespace treefac {

struct AdelicTreeSpec {
  std::vector<BigInt> set;
  BigInt prime = 2;
  std::uint32_t depth = 0;
};

/// Residue classes of the set modulo p^k for k <= depth, unit lengths.
/// Depth-h leaves carry the class size; classes that become singletons
/// earlier are leaves of capacity 1.
RootedTree adelic_tree(const AdelicTreeSpec& spec);

/// Smallest h with all elements distinct modulo p^h (at least 1).
std::uint32_t separating_depth(const std::vector<BigInt>& set, const BigInt& prime);

/// p-adic valuation of a nonzero integer.
std::uint64_t valuation(BigInt x, const BigInt& prime);

/// val_p(n!) = sum_i floor(n / p^i).
std::uint64_t legendre(std::uint64_t n, std::uint64_t prime);

/// Prime factors of |n| (n != 0), sorted, without multiplicity.
std::vector<BigInt> prime_factors(const BigInt& n);

/// Primes dividing at least one pairwise difference of the set, sorted.
std::vector<BigInt> relevant_primes(const std::vector<BigInt>& set);

/// Tree factorials of the adelic tree at the separating depth: the
/// p-adic valuations of the factorials of the set. n_max < |S|.
FactorialSequence factorials_prime(const std::vector<BigInt>& set, const BigInt& prime, std::size_t n_max);

/// n!_S for n <= n_max < |S|, as the product over relevant primes.
std::vector<BigInt> bhargava_factorials(const std::vector<BigInt>& set, std::size_t n_max);

/// Valuation-greedy p-ordering on the integers themselves.
std::vector<std::uint64_t> greedy_valuations(const std::vector<BigInt>& set, const BigInt& prime, std::size_t n_max);

/// n!_S from greedy_valuations, with no tree machinery.
std::vector<BigInt> greedy_bhargava_oracle(const std::vector<BigInt>& set, std::size_t n_max);

}  // namespace treefac

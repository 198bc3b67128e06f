#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "treefac/adelic.hpp"
#include "treefac/error.hpp"
#include "treefac/factorials.hpp"

using namespace treefac;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> xs) {
  std::vector<BigInt> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_SUITE("adelic") {

TEST_CASE("initial segments give ordinary factorials") {
  std::vector<BigInt> set;
  for (int i = 0; i <= 12; ++i) set.emplace_back(i);
  const auto f = bhargava_factorials(set, 12);
  for (std::uint64_t n = 0; n <= 12; ++n) CHECK(f[n] == oracle::factorial(n));
}

TEST_CASE("even numbers") {
  const auto f = bhargava_factorials(ints({0, 2, 4, 6, 8}), 4);
  // n!_S = 2^n n! for an arithmetic progression of step 2
  CHECK(f == ints({1, 2, 8, 48, 384}));
}

TEST_CASE("agrees with the Vandermonde gcd oracle") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 25; ++i) {
    std::set<long> picked;
    const std::size_t size = 3 + rng() % 5;
    while (picked.size() < size) picked.insert(static_cast<long>(rng() % 200) - 100);
    std::vector<BigInt> set(picked.begin(), picked.end());
    const std::size_t n = set.size() - 1;
    const auto expected = oracle::vandermonde_factorials(set, n);
    CHECK(bhargava_factorials(set, n) == expected);
    CHECK(greedy_bhargava_oracle(set, n) == expected);
  }
}

TEST_CASE("tree valuations match the greedy p-ordering") {
  const auto set = ints({1, 5, 9, 13, 30, 31, 64, 100});
  for (long p : {2, 3, 5, 7}) {
    const auto tree = factorials_prime(set, BigInt(p), set.size() - 1);
    const auto greedy = greedy_valuations(set, BigInt(p), set.size() - 1);
    REQUIRE(tree.size() == greedy.size());
    for (std::size_t k = 0; k < greedy.size(); ++k) CHECK(tree[k] == greedy[k]);
    CHECK(tree.provenance_name() == "adelic");
  }
  CHECK_THROWS_AS(factorials_prime(set, BigInt(2), set.size()), IndexOutOfRange);
}

TEST_CASE("regular trees give Legendre valuations") {
  for (std::uint64_t p : {2, 3, 5}) {
    const auto seq = factorials_weighting(TreeSource::regular(static_cast<std::uint32_t>(p)), 40);
    for (std::uint64_t n = 0; n <= 40; ++n) {
      CHECK(seq[n] == legendre(n, p));
      CHECK(legendre(n, p) == oracle::valuation_of_factorial(n, p));
    }
  }
}

TEST_CASE("valuations and separating depth") {
  CHECK(valuation(BigInt(48), 2) == 4);
  CHECK(valuation(BigInt(-81), 3) == 4);
  CHECK(valuation(BigInt(7), 2) == 0);
  CHECK(separating_depth(ints({0, 1, 2, 3}), 2) == 2);
  CHECK(separating_depth(ints({0, 8}), 2) == 4);
  CHECK(separating_depth(ints({5}), 3) == 1);
  // one chain of shared classes, then two singletons
  const auto t = adelic_tree({ints({0, 8}), 2, 4});
  CHECK(t.size() == 6);
}

TEST_CASE("prime factors") {
  CHECK(prime_factors(BigInt(360)) == ints({2, 3, 5}));
  CHECK(prime_factors(BigInt(-97)) == ints({97}));
  // product of two primes above the trial division bound
  const BigInt a("1000000007"), b("998244353");
  CHECK(prime_factors(a * b) == std::vector<BigInt>{b, a});
  const BigInt m("2305843009213693951");  // 2^61 - 1
  CHECK(prime_factors(m * 6) == std::vector<BigInt>{2, 3, m});
  CHECK(relevant_primes(ints({0, 1, 2, 3})) == ints({2, 3}));
  CHECK(relevant_primes(ints({10})).empty());
}

}  // TEST_SUITE

#include "treefac/adelic.hpp"

#include <algorithm>

#include <boost/multiprecision/gmp.hpp>

#include "treefac/error.hpp"
#include "treefac/source.hpp"

namespace treefac {

namespace {

std::vector<BigInt> sorted_distinct(std::vector<BigInt> set) {
  if (set.empty()) throw InvalidArgument("integer set must be nonempty");
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
    throw InvalidArgument("integer set has repeated elements");
  }
  return set;
}

void check_range(const std::vector<BigInt>& set, std::size_t n_max) {
  if (n_max >= set.size()) {
    throw IndexOutOfRange("index " + std::to_string(n_max) + " needs a set with more than " +
                          std::to_string(set.size()) + " elements");
  }
}

}  // namespace

RootedTree adelic_tree(const AdelicTreeSpec& spec) {
  return expand(TreeSource::adelic(spec.set, spec.prime), spec.depth);
}

std::uint64_t valuation(BigInt x, const BigInt& prime) {
  if (x == 0) throw InvalidArgument("valuation of zero");
  std::uint64_t v = 0;
  while (x % prime == 0) {
    x /= prime;
    ++v;
  }
  return v;
}

std::uint32_t separating_depth(const std::vector<BigInt>& set, const BigInt& prime) {
  std::uint64_t deepest = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      deepest = std::max(deepest, valuation(set[j] - set[i], prime));
    }
  }
  return static_cast<std::uint32_t>(deepest + 1);
}

std::uint64_t legendre(std::uint64_t n, std::uint64_t prime) {
  if (prime < 2) throw InvalidArgument("legendre needs a prime");
  std::uint64_t total = 0;
  for (std::uint64_t q = n / prime; q > 0; q /= prime) total += q;
  return total;
}

FactorialSequence factorials_prime(const std::vector<BigInt>& set, const BigInt& prime, std::size_t n_max) {
  const auto s = sorted_distinct(set);
  check_range(s, n_max);
  // Singleton classes are leaves, so the source is already finite at the
  // separating depth.
  auto seq = factorials_weighting(TreeSource::adelic(s, prime), n_max);
  seq.provenance = Provenance::Adelic;
  return seq;
}

std::vector<BigInt> bhargava_factorials(const std::vector<BigInt>& set, std::size_t n_max) {
  const auto s = sorted_distinct(set);
  check_range(s, n_max);
  std::vector<BigInt> out(n_max + 1, BigInt(1));
  for (const BigInt& p : relevant_primes(s)) {
    const auto seq = factorials_prime(s, p, n_max);
    for (std::size_t n = 0; n <= n_max; ++n) {
      const Rational& e = seq[n];
      if (boost::multiprecision::denominator(e) != 1) throw std::logic_error("non-integral valuation");
      const auto exponent = boost::multiprecision::numerator(e).convert_to<unsigned>();
      out[n] *= boost::multiprecision::pow(p, exponent);
    }
  }
  return out;
}

std::vector<std::uint64_t> greedy_valuations(const std::vector<BigInt>& set, const BigInt& prime,
                                             std::size_t n_max) {
  const auto s = sorted_distinct(set);
  check_range(s, n_max);
  std::vector<bool> used(s.size(), false);
  std::vector<std::uint64_t> score(s.size(), 0);  // sum of val_p(s - s_j) over chosen s_j
  std::vector<std::uint64_t> out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::size_t pick = s.size();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!used[i] && (pick == s.size() || score[i] < score[pick])) pick = i;
    }
    out.push_back(score[pick]);
    used[pick] = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!used[i]) score[i] += valuation(s[i] - s[pick], prime);
    }
  }
  return out;
}

std::vector<BigInt> greedy_bhargava_oracle(const std::vector<BigInt>& set, std::size_t n_max) {
  const auto s = sorted_distinct(set);
  check_range(s, n_max);
  std::vector<BigInt> out(n_max + 1, BigInt(1));
  for (const BigInt& p : relevant_primes(s)) {
    const auto vals = greedy_valuations(s, p, n_max);
    for (std::size_t n = 0; n <= n_max; ++n) out[n] *= boost::multiprecision::pow(p, static_cast<unsigned>(vals[n]));
  }
  return out;
}

}  // namespace treefac

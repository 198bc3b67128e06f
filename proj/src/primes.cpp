#include <algorithm>
#include <random>

#include <boost/multiprecision/miller_rabin.hpp>

#include "treefac/adelic.hpp"
#include "treefac/source.hpp"

namespace treefac {
namespace {

using boost::multiprecision::gcd;

// Pollard rho with Brent's cycle detection. n is odd and composite.
BigInt pollard_brent(const BigInt& n, std::mt19937_64& rng) {
  for (;;) {
    const BigInt c = BigInt(rng() % 1000 + 1);
    BigInt y = BigInt(rng()) % n;
    BigInt x, ys;
    BigInt g = 1, q = 1;
    std::uint64_t r = 1;
    const std::uint64_t m = 128;
    auto f = [&](const BigInt& v) { return (v * v + c) % n; };
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = (q * (x > y ? x - y : y - x)) % n;
        }
        g = gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(BigInt n, std::vector<BigInt>& out, std::mt19937_64& rng) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const BigInt d = pollard_brent(n, rng);
  factor_into(d, out, rng);
  factor_into(n / d, out, rng);
}

}  // namespace

std::vector<BigInt> prime_factors(const BigInt& value) {
  BigInt n = value < 0 ? BigInt(-value) : value;
  std::vector<BigInt> out;
  for (std::uint64_t p = 2; p < 10000 && BigInt(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.emplace_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) {
    std::mt19937_64 rng(0x5eed);
    factor_into(n, out, rng);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<BigInt> relevant_primes(const std::vector<BigInt>& set) {
  std::vector<BigInt> primes;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const BigInt diff = set[j] - set[i];
      if (diff == 0) continue;
      for (auto& p : prime_factors(diff)) primes.push_back(std::move(p));
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

}  // namespace treefac

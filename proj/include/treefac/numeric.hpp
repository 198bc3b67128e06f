#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace treefac {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p" or "p/q" with nonnegative integers. Returns nullopt on malformed input.
std::optional<Rational> parse_rational(std::string_view text);

/// Parses a signed decimal integer of arbitrary size.
std::optional<BigInt> parse_bigint(std::string_view text);

/// "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational& value);

/// Shortest round-trip decimal, always carrying a fractional part ("7.0", "1.5").
std::string format_double(double value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

/// A positive count or infinity. Used for leaf capacities and for N_{T,chi}.
class Count {
 public:
  constexpr Count() = default;
  static constexpr Count finite(std::uint64_t value) { return Count(value, false); }
  static constexpr Count infinity() { return Count(0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr std::uint64_t value() const { return value_; }

  /// True when `n` is strictly below this count.
  constexpr bool exceeds(std::uint64_t n) const { return infinite_ || n < value_; }

  friend constexpr bool operator==(const Count&, const Count&) = default;

 private:
  constexpr Count(std::uint64_t value, bool infinite) : value_(value), infinite_(infinite) {}
  std::uint64_t value_ = 1;
  bool infinite_ = false;
};

using Capacity = Count;

std::string to_string(const Count& count);

}  // namespace treefac

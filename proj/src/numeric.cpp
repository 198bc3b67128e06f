#include "treefac/numeric.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace treefac {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

std::optional<BigInt> parse_bigint(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (!all_digits(text)) return std::nullopt;
  BigInt value(std::string{text});
  return negative ? BigInt(-value) : value;
}

std::optional<Rational> parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!all_digits(num_text)) return std::nullopt;
  BigInt num(std::string{num_text});
  BigInt den = 1;
  if (slash != std::string_view::npos) {
    const auto den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) return std::nullopt;
    den = BigInt(std::string{den_text});
    if (den == 0) return std::nullopt;
  }
  return Rational(num, den);
}

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  std::string out(buffer.data(), end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string to_string(const Count& count) {
  return count.is_infinite() ? std::string("inf") : std::to_string(count.value());
}

}  // namespace treefac

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "treefac/numeric.hpp"
#include "treefac/tree.hpp"

namespace treefac {

class TreeSource;

struct RegularRule {
  std::uint32_t degree = 2;
  Rational length = 1;
};

/// Vertices at depth k have branching[k] children through edges of length
/// lengths[k] (0-based). Both lists repeat their last entry forever.
struct SphericalRule {
  std::vector<std::uint32_t> branching;
  std::vector<Rational> lengths;

  std::uint32_t branching_at(std::size_t depth) const {
    return branching[std::min(depth, branching.size() - 1)];
  }
  const Rational& length_at(std::size_t depth) const { return lengths[std::min(depth, lengths.size() - 1)]; }
};

/// Edge uv of the base gets its length multiplied by lambda^{|u|}.
struct LambdaRule {
  std::shared_ptr<const TreeSource> base;
  Rational lambda;
};

struct AdelicRule {
  std::vector<BigInt> set;  // sorted, distinct
  BigInt prime = 2;
};

/// A finite tree or a generator rule that can be expanded to any depth.
class TreeSource {
 public:
  using Rule = std::variant<RootedTree, RegularRule, SphericalRule, LambdaRule, AdelicRule>;

  static TreeSource explicit_tree(RootedTree tree);
  static TreeSource regular(std::uint32_t degree, Rational length = 1);
  static TreeSource spherical(std::vector<std::uint32_t> branching, std::vector<Rational> lengths);
  static TreeSource lambda_scaled(TreeSource base, Rational lambda);
  /// Sorts the set; throws InvalidArgument on duplicates, an empty set or a non-prime p.
  static TreeSource adelic(std::vector<BigInt> set, BigInt prime);

  const Rule& rule() const { return rule_; }
  bool is_explicit() const { return std::holds_alternative<RootedTree>(rule_); }
  const RootedTree* tree() const { return std::get_if<RootedTree>(&rule_); }

  /// Generator spec accepted by parse_generator_spec (explicit trees print as "explicit").
  std::string describe() const;

 private:
  explicit TreeSource(Rule rule) : rule_(std::move(rule)) {}
  Rule rule_;
};

/// regular d=<int> length=<rat>
/// spherical b=<int,...> length=<rat,...>
/// lambda base=(<spec>) lambda=<rat>      (parentheses optional)
/// adelic p=<prime> set=<int,...>
TreeSource parse_generator_spec(std::string_view text);

/// Depth-h truncation, numbered breadth first. An explicit tree no taller
/// than h comes back unchanged. Non-leaf vertices at depth h
/// become leaves with their cut capacity (infinity, or the class size for
/// adelic sources).
/// Throws DepthBudgetExceeded past max_nodes vertices.
RootedTree expand(const TreeSource& source, std::uint32_t depth, std::size_t max_nodes = 10'000'000);

/// Per-level description of a spherically symmetric source: at depth k
/// (1-based) there are count[k-1] vertices, each joined to its parent by an
/// edge of length length[k-1]. Returns false for other sources.
struct LevelProfile {
  std::vector<double> log_count;     // natural log of the vertex count
  std::vector<BigInt> count;         // exact count, filled only when exact
  std::vector<Rational> length;      // edge lengths, filled only when exact
  std::vector<double> log_length;
};

bool is_spherically_symmetric(const TreeSource& source);
LevelProfile level_profile(const TreeSource& source, std::uint32_t depth, bool exact);

bool is_prime(std::uint64_t n);
/// Deterministic below 2^64, Miller-Rabin with 25 rounds above.
bool is_prime(const BigInt& n);

}  // namespace treefac

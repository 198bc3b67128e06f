#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "treefac/numeric.hpp"
#include "treefac/tree.hpp"

namespace treefac {

/// Terms grouped by generation: groups[0] holds the d zeros and groups[n]
/// (n >= 1) holds the d^n terms of generation n, nondecreasing overall.
struct BiasedSequence {
  std::uint32_t d = 2;
  std::vector<std::vector<Rational>> groups;

  /// Number of generations after the zeros.
  std::uint32_t depth() const { return groups.empty() ? 0 : static_cast<std::uint32_t>(groups.size() - 1); }
  std::vector<Rational> flatten() const;
  /// Throws InvalidArgument on bad group sizes, nonzero leading terms or a decrease.
  void validate() const;
};

/// Regular tree vertices of generation n are labelled 0..d^n-1 breadth
/// first, so the parent of label k is k / d. perms[n][r] is the label of
/// rank r in the order of generation n. Missing generations use the
/// identity.
struct OrderChoice {
  std::vector<std::vector<std::uint64_t>> perms;

  std::uint64_t label(std::uint32_t generation, std::uint64_t rank) const;
  /// Throws InvalidArgument if some entry is not a permutation of the right size.
  void validate(std::uint32_t d, std::uint32_t depth) const;
};

struct BiasCheck {
  bool ok = true;
  std::optional<std::uint32_t> generation;  // first failing generation
  std::optional<std::size_t> index;         // its first term in the flattening
};

/// a_{n+1,1} > 2 d^{n+1} sum_{i<=n} a_{i,d^i} for every generation in range.
BiasCheck is_sufficiently_biased(const BiasedSequence& seq);

/// Lengths on the depth-`depth` truncation of the d-regular tree, with the
/// cut vertices as capacity-infinity leaves. Vertices of each generation
/// get consecutive ids in the order of `orders`. Throws NotBiased when a
/// length leaves [a_{n,1}/2, a_{n,i}].
RootedTree realize_lengths(const BiasedSequence& seq, const OrderChoice& orders, std::uint32_t depth);

/// Length of the edge into the vertex with breadth-first label `label`.
std::vector<std::vector<Rational>> realized_lengths_by_label(const BiasedSequence& seq, const OrderChoice& orders,
                                                             std::uint32_t depth);

struct RoundtripReport {
  RootedTree tree;  // the realized truncation
  std::vector<Rational> expected;
  std::vector<Rational> produced;
  std::vector<std::uint32_t> trace_generation;  // generation of the vertex chosen at each step
};

/// Runs the weighting process on the realized tree and compares the
/// first d + sum d^n terms. One extra generation of long edges is attached
/// below the cut so that the cut vertices behave like interior vertices.
/// Throws Mismatch on the first differing term, or when a step revisits an
/// earlier generation.
RoundtripReport verify_roundtrip(const BiasedSequence& seq, const OrderChoice& orders, std::uint32_t depth);

/// CSV rows "n,i,a" with n the generation, i the 1-based index within it
/// and a a rational. A header row is optional. Throws ParseError.
BiasedSequence parse_biased_csv(std::istream& in);
BiasedSequence parse_biased_csv(std::string_view text);

}  // namespace treefac

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treefac/numeric.hpp"

namespace treefac {

using NodeId = std::uint32_t;
inline constexpr NodeId kRoot = 0;

/// One line of an explicit tree: the edge into the node is described by
/// `parent` and `length`; leaves carry a capacity.
struct Node {
  NodeId id = 0;
  std::optional<NodeId> parent;
  std::optional<Rational> length;
  std::optional<Capacity> capacity;
};

/// Finite rooted tree with positive rational edge lengths and leaf capacities.
///
/// Invariants (checked on construction): the root is node 0 and is the only
/// node without a parent; ids are contiguous and topologically numbered
/// (parent < child); every non-root node has a positive length; a node has
/// a capacity exactly when it is a leaf. The root is a leaf only when it is
/// the only node.
class RootedTree {
 public:
  /// Validates and takes ownership of `nodes` (any order). Throws StructureError.
  static RootedTree from_nodes(std::vector<Node> nodes);

  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const { return nodes_.size() - 1; }
  const std::vector<Node>& nodes() const { return nodes_; }

  std::optional<NodeId> parent(NodeId v) const { return nodes_[v].parent; }
  /// Length of the edge parent(v) -> v. Precondition: v is not the root.
  const Rational& length(NodeId v) const { return *nodes_[v].length; }
  std::optional<Capacity> capacity(NodeId v) const { return nodes_[v].capacity; }
  std::span<const NodeId> children(NodeId v) const;
  bool is_leaf(NodeId v) const { return nodes_[v].capacity.has_value(); }
  /// Number of edges between the root and v.
  std::uint32_t generation(NodeId v) const { return generation_[v]; }
  /// Sum of edge lengths on [root, v].
  Rational distance(NodeId v) const;

  std::vector<NodeId> leaves() const;
  /// Path [root, v] as a list of node ids, root first.
  std::vector<NodeId> path_from_root(NodeId v) const;

  friend bool operator==(const RootedTree& a, const RootedTree& b);

 private:
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> child_offset_;
  std::vector<NodeId> child_list_;
  std::vector<std::uint32_t> generation_;
};

/// Incremental construction for code and tests. Leaves that never receive a
/// capacity get the standard capacity 1.
class TreeBuilder {
 public:
  TreeBuilder();
  NodeId add_child(NodeId parent, Rational length);
  NodeId add_child(NodeId parent, Rational length, Capacity capacity);
  void set_capacity(NodeId v, Capacity capacity);
  RootedTree build() const;

 private:
  std::vector<Node> nodes_;
};

/// Reads the line-based tree format:
///   node <id> parent=<id|-> [length=<num>[/<den>]] [capacity=<uint|inf>]
/// Throws ParseError (with line number) or StructureError.
RootedTree parse_tree_file(std::string_view text);

/// Writes `tree` in the format accepted by parse_tree_file.
std::string write_tree_file(const RootedTree& tree);

/// Suppresses every non-root vertex with exactly one child by merging its
/// two incident edges. Output is renumbered breadth first, children in the
/// order of their original ids.
RootedTree canonical_skeleton(const RootedTree& tree);

/// Canonical string of the rooted metric tree (with capacities) up to
/// isomorphism. Two trees share a signature iff their skeletons are
/// isomorphic as rooted metric trees with capacities.
std::string metric_signature(const RootedTree& tree);

}  // namespace treefac

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "treefac/numeric.hpp"
#include "treefac/source.hpp"
#include "treefac/tree.hpp"

namespace treefac {

namespace detail {

struct ChildSpec {
  std::uint64_t token = 0;
  Rational length;
  std::optional<Capacity> capacity;  // set for leaves
};

class Expander {
 public:
  virtual ~Expander() = default;
  virtual std::uint64_t root_token() const { return 0; }
  virtual std::optional<Capacity> root_capacity() const { return std::nullopt; }
  virtual void children(std::uint64_t token, std::uint32_t depth, std::vector<ChildSpec>& out) = 0;
  virtual Capacity cut_capacity(std::uint64_t /*token*/, std::uint32_t /*depth*/) { return Capacity::infinity(); }
};

std::unique_ptr<Expander> make_expander(const TreeSource& source);

}  // namespace detail

/// Arena over a TreeSource. Children are materialized on first access; ids
/// are handed out in materialization order. Explicit sources are loaded
/// up front and keep their own ids.
class LazyTree {
 public:
  static constexpr std::size_t kDefaultMaxNodes = 10'000'000;

  explicit LazyTree(const TreeSource& source, std::size_t max_nodes = kDefaultMaxNodes);
  LazyTree(LazyTree&&) noexcept;
  LazyTree& operator=(LazyTree&&) noexcept;
  ~LazyTree();

  std::size_t size() const { return nodes_.size(); }

  /// Materializes the children of v if needed. Throws DepthBudgetExceeded
  /// when the node limit would be passed.
  std::uint32_t child_count(NodeId v);
  NodeId child(NodeId v, std::uint32_t i) const { return child_list_[nodes_[v].first_child + i]; }

  bool is_leaf(NodeId v) const { return nodes_[v].capacity.has_value(); }
  std::optional<Capacity> capacity(NodeId v) const { return nodes_[v].capacity; }
  Capacity cut_capacity(NodeId v);
  const Rational& length(NodeId v) const { return nodes_[v].length; }
  std::optional<NodeId> parent(NodeId v) const;
  std::uint32_t depth(NodeId v) const { return nodes_[v].depth; }
  bool expanded(NodeId v) const { return nodes_[v].expanded; }

 private:
  struct Entry {
    NodeId parent = 0;
    std::uint32_t depth = 0;
    std::uint32_t first_child = 0;
    std::uint32_t child_count = 0;
    bool expanded = false;
    std::optional<Capacity> capacity;
    std::uint64_t token = 0;
    Rational length;
  };

  void materialize(NodeId v);

  std::shared_ptr<const TreeSource> source_;  // expanders refer into its rule
  std::unique_ptr<detail::Expander> expander_;
  std::vector<Entry> nodes_;
  std::vector<NodeId> child_list_;
  std::vector<detail::ChildSpec> scratch_;
  std::size_t max_nodes_;
};

}  // namespace treefac

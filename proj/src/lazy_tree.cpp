#include "treefac/lazy_tree.hpp"

#include <map>

#include "treefac/error.hpp"

namespace treefac {
namespace detail {
namespace {

class ExplicitExpander final : public Expander {
 public:
  explicit ExplicitExpander(const RootedTree& tree) : tree_(tree) {}
  std::optional<Capacity> root_capacity() const override { return tree_.capacity(kRoot); }
  void children(std::uint64_t token, std::uint32_t, std::vector<ChildSpec>& out) override {
    for (NodeId c : tree_.children(static_cast<NodeId>(token))) out.push_back({c, tree_.length(c), tree_.capacity(c)});
  }

 private:
  const RootedTree& tree_;
};

class RegularExpander final : public Expander {
 public:
  explicit RegularExpander(const RegularRule& rule) : rule_(rule) {}
  void children(std::uint64_t, std::uint32_t, std::vector<ChildSpec>& out) override {
    for (std::uint32_t i = 0; i < rule_.degree; ++i) out.push_back({0, rule_.length, std::nullopt});
  }

 private:
  const RegularRule& rule_;
};

class SphericalExpander final : public Expander {
 public:
  explicit SphericalExpander(const SphericalRule& rule) : rule_(rule) {}
  void children(std::uint64_t, std::uint32_t depth, std::vector<ChildSpec>& out) override {
    const auto b = rule_.branching_at(depth);
    for (std::uint32_t i = 0; i < b; ++i) out.push_back({0, rule_.length_at(depth), std::nullopt});
  }

 private:
  const SphericalRule& rule_;
};

class LambdaExpander final : public Expander {
 public:
  explicit LambdaExpander(const LambdaRule& rule) : base_(make_expander(*rule.base)), lambda_(rule.lambda) {}
  std::uint64_t root_token() const override { return base_->root_token(); }
  std::optional<Capacity> root_capacity() const override { return base_->root_capacity(); }
  void children(std::uint64_t token, std::uint32_t depth, std::vector<ChildSpec>& out) override {
    const auto first = out.size();
    base_->children(token, depth, out);
    const Rational& scale = power(depth);
    for (auto i = first; i < out.size(); ++i) out[i].length *= scale;
  }
  Capacity cut_capacity(std::uint64_t token, std::uint32_t depth) override {
    return base_->cut_capacity(token, depth);
  }

 private:
  const Rational& power(std::uint32_t k) {
    if (powers_.empty()) powers_.push_back(1);
    while (powers_.size() <= k) powers_.push_back(powers_.back() * lambda_);
    return powers_[k];
  }

  std::unique_ptr<Expander> base_;
  Rational lambda_;
  std::vector<Rational> powers_;
};

// Residue classes of S modulo p^k. A class with a single element is a leaf
// of capacity 1; the root always expands.
class AdelicExpander final : public Expander {
 public:
  explicit AdelicExpander(const AdelicRule& rule) : prime_(rule.prime) {
    Class root;
    root.members.resize(rule.set.size());
    for (std::size_t i = 0; i < rule.set.size(); ++i) root.members[i] = i;
    set_ = rule.set;
    classes_.push_back(std::move(root));
    moduli_.push_back(1);
  }

  void children(std::uint64_t token, std::uint32_t depth, std::vector<ChildSpec>& out) override {
    while (moduli_.size() <= depth + 1) moduli_.push_back(moduli_.back() * prime_);
    const BigInt& modulus = moduli_[depth + 1];
    std::map<BigInt, std::vector<std::size_t>> groups;
    for (std::size_t m : classes_[token].members) {
      BigInt r = set_[m] % modulus;
      if (r < 0) r += modulus;
      groups[r].push_back(m);
    }
    for (auto& [residue, members] : groups) {
      const auto id = classes_.size();
      const bool single = members.size() == 1;
      classes_.push_back(Class{std::move(members)});
      out.push_back({id, Rational(1), single ? std::optional<Capacity>(Capacity::finite(1)) : std::nullopt});
    }
  }

  std::optional<Capacity> root_capacity() const override { return std::nullopt; }

  Capacity cut_capacity(std::uint64_t token, std::uint32_t) override {
    return Capacity::finite(classes_[token].members.size());
  }

 private:
  struct Class {
    std::vector<std::size_t> members;
  };
  BigInt prime_;
  std::vector<BigInt> set_;
  std::vector<Class> classes_;
  std::vector<BigInt> moduli_;
};

}  // namespace

std::unique_ptr<Expander> make_expander(const TreeSource& source) {
  struct Visitor {
    std::unique_ptr<Expander> operator()(const RootedTree& t) const { return std::make_unique<ExplicitExpander>(t); }
    std::unique_ptr<Expander> operator()(const RegularRule& r) const { return std::make_unique<RegularExpander>(r); }
    std::unique_ptr<Expander> operator()(const SphericalRule& r) const {
      return std::make_unique<SphericalExpander>(r);
    }
    std::unique_ptr<Expander> operator()(const LambdaRule& r) const { return std::make_unique<LambdaExpander>(r); }
    std::unique_ptr<Expander> operator()(const AdelicRule& r) const { return std::make_unique<AdelicExpander>(r); }
  };
  return std::visit(Visitor{}, source.rule());
}

}  // namespace detail

LazyTree::LazyTree(const TreeSource& source, std::size_t max_nodes)
    : max_nodes_(max_nodes) {
  if (const RootedTree* tree = source.tree()) {
    // Keep the tree's own ids.
    nodes_.resize(tree->size());
    child_list_.reserve(tree->edge_count());
    for (NodeId v = 0; v < tree->size(); ++v) {
      Entry& e = nodes_[v];
      if (auto p = tree->parent(v)) {
        e.parent = *p;
        e.length = tree->length(v);
      }
      e.depth = tree->generation(v);
      e.capacity = tree->capacity(v);
      e.token = v;
      e.expanded = true;
      e.first_child = static_cast<std::uint32_t>(child_list_.size());
      const auto kids = tree->children(v);
      e.child_count = static_cast<std::uint32_t>(kids.size());
      child_list_.insert(child_list_.end(), kids.begin(), kids.end());
    }
    return;
  }
  source_ = std::make_shared<const TreeSource>(source);
  expander_ = detail::make_expander(*source_);
  Entry root;
  root.token = expander_->root_token();
  root.capacity = expander_->root_capacity();
  nodes_.push_back(std::move(root));
}

LazyTree::LazyTree(LazyTree&&) noexcept = default;
LazyTree& LazyTree::operator=(LazyTree&&) noexcept = default;
LazyTree::~LazyTree() = default;

std::optional<NodeId> LazyTree::parent(NodeId v) const {
  if (v == kRoot) return std::nullopt;
  return nodes_[v].parent;
}

std::uint32_t LazyTree::child_count(NodeId v) {
  if (!nodes_[v].expanded) materialize(v);
  return nodes_[v].child_count;
}

Capacity LazyTree::cut_capacity(NodeId v) {
  if (nodes_[v].capacity) return *nodes_[v].capacity;
  if (!expander_) return Capacity::infinity();  // explicit trees
  return expander_->cut_capacity(nodes_[v].token, nodes_[v].depth);
}

void LazyTree::materialize(NodeId v) {
  Entry& e = nodes_[v];
  e.expanded = true;
  if (e.capacity) return;
  scratch_.clear();
  expander_->children(e.token, e.depth, scratch_);
  if (nodes_.size() + scratch_.size() > max_nodes_) {
    throw DepthBudgetExceeded("lazy expansion would exceed " + std::to_string(max_nodes_) + " vertices");
  }
  const auto first = static_cast<NodeId>(nodes_.size());
  const auto depth = e.depth + 1;
  nodes_[v].first_child = static_cast<std::uint32_t>(child_list_.size());
  nodes_[v].child_count = static_cast<std::uint32_t>(scratch_.size());
  for (std::size_t i = 0; i < scratch_.size(); ++i) {
    Entry child;
    child.parent = v;
    child.depth = depth;
    child.capacity = scratch_[i].capacity;
    child.token = scratch_[i].token;
    child.length = std::move(scratch_[i].length);
    nodes_.push_back(std::move(child));
    child_list_.push_back(first + static_cast<NodeId>(i));
  }
}

}  // namespace treefac

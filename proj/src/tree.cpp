#include "treefac/tree.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "treefac/error.hpp"

namespace treefac {

RootedTree RootedTree::from_nodes(std::vector<Node> nodes) {
  if (nodes.empty()) throw StructureError("tree has no nodes");
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && nodes[i].id == nodes[i - 1].id) {
      throw StructureError("duplicate node id " + std::to_string(nodes[i].id));
    }
    if (nodes[i].id != i) {
      throw StructureError("node ids must be contiguous from 0; missing id " + std::to_string(i));
    }
  }

  RootedTree tree;
  const std::size_t n = nodes.size();
  std::vector<std::uint32_t> child_count(n, 0);
  for (const Node& node : nodes) {
    if (node.id == kRoot) {
      if (node.parent) throw StructureError("root 0 must not have a parent");
      if (node.length) throw StructureError("root 0 must not have an edge length");
      continue;
    }
    if (!node.parent) throw StructureError("node " + std::to_string(node.id) + " has no parent");
    if (*node.parent >= node.id) {
      throw StructureError("node " + std::to_string(node.id) +
                           " violates topological numbering (parent must have a smaller id)");
    }
    if (!node.length) throw StructureError("node " + std::to_string(node.id) + " has no edge length");
    if (*node.length <= 0) {
      throw StructureError("node " + std::to_string(node.id) + " has a nonpositive edge length");
    }
    ++child_count[*node.parent];
  }
  for (const Node& node : nodes) {
    const bool leaf = child_count[node.id] == 0;
    if (!leaf && node.capacity) {
      throw StructureError("internal node " + std::to_string(node.id) + " carries a capacity");
    }
    if (leaf && !node.capacity) {
      throw StructureError("leaf " + std::to_string(node.id) + " has no capacity");
    }
    if (leaf && !node.capacity->is_infinite() && node.capacity->value() == 0) {
      throw StructureError("leaf " + std::to_string(node.id) + " has zero capacity");
    }
  }

  tree.child_offset_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) tree.child_offset_[v + 1] = tree.child_offset_[v] + child_count[v];
  tree.child_list_.resize(n - 1);
  std::vector<std::uint32_t> fill(tree.child_offset_.begin(), tree.child_offset_.end() - 1);
  tree.generation_.assign(n, 0);
  for (const Node& node : nodes) {
    if (node.id == kRoot) continue;
    tree.child_list_[fill[*node.parent]++] = node.id;
    tree.generation_[node.id] = tree.generation_[*node.parent] + 1;
  }
  tree.nodes_ = std::move(nodes);
  return tree;
}

std::span<const NodeId> RootedTree::children(NodeId v) const {
  return {child_list_.data() + child_offset_[v], child_offset_[v + 1] - child_offset_[v]};
}

Rational RootedTree::distance(NodeId v) const {
  Rational total = 0;
  for (; v != kRoot; v = *nodes_[v].parent) total += *nodes_[v].length;
  return total;
}

std::vector<NodeId> RootedTree::leaves() const {
  std::vector<NodeId> out;
  for (const Node& node : nodes_) {
    if (node.capacity) out.push_back(node.id);
  }
  return out;
}

std::vector<NodeId> RootedTree::path_from_root(NodeId v) const {
  std::vector<NodeId> path;
  for (;; v = *nodes_[v].parent) {
    path.push_back(v);
    if (v == kRoot) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool operator==(const RootedTree& a, const RootedTree& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Node& x = a.nodes_[i];
    const Node& y = b.nodes_[i];
    if (x.parent != y.parent || x.length != y.length || x.capacity != y.capacity) return false;
  }
  return true;
}

TreeBuilder::TreeBuilder() { nodes_.push_back(Node{kRoot, std::nullopt, std::nullopt, std::nullopt}); }

NodeId TreeBuilder::add_child(NodeId parent, Rational length) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{id, parent, std::move(length), std::nullopt});
  return id;
}

NodeId TreeBuilder::add_child(NodeId parent, Rational length, Capacity capacity) {
  const NodeId id = add_child(parent, std::move(length));
  nodes_[id].capacity = capacity;
  return id;
}

void TreeBuilder::set_capacity(NodeId v, Capacity capacity) { nodes_[v].capacity = capacity; }

RootedTree TreeBuilder::build() const {
  std::vector<bool> has_child(nodes_.size(), false);
  for (const Node& node : nodes_) {
    if (node.parent) has_child[*node.parent] = true;
  }
  std::vector<Node> nodes = nodes_;
  for (Node& node : nodes) {
    if (!has_child[node.id] && !node.capacity) node.capacity = Capacity::finite(1);
  }
  return RootedTree::from_nodes(std::move(nodes));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<NodeId> parse_id(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  NodeId value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<NodeId>(c - '0');
  }
  return value;
}

}  // namespace

RootedTree parse_tree_file(std::string_view text) {
  std::vector<Node> nodes;
  std::vector<std::size_t> line_of;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto tokens = split_ws(line);
    if (tokens[0] != "node") throw ParseError(line_no, "expected 'node', got '" + std::string(tokens[0]) + "'");
    if (tokens.size() < 3) throw ParseError(line_no, "expected 'node <id> parent=<id|->'");
    Node node;
    const auto id = parse_id(tokens[1]);
    if (!id) throw ParseError(line_no, "invalid node id '" + std::string(tokens[1]) + "'");
    node.id = *id;
    bool saw_parent = false;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const auto eq = tokens[i].find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value, got '" + std::string(tokens[i]) + "'");
      const auto key = tokens[i].substr(0, eq);
      const auto value = tokens[i].substr(eq + 1);
      if (key == "parent") {
        saw_parent = true;
        if (value != "-") {
          const auto parent = parse_id(value);
          if (!parent) throw ParseError(line_no, "invalid parent id '" + std::string(value) + "'");
          node.parent = *parent;
        }
      } else if (key == "length") {
        const auto length = parse_rational(value);
        if (!length) throw ParseError(line_no, "invalid length '" + std::string(value) + "'");
        if (*length <= 0) throw ParseError(line_no, "edge length must be positive");
        node.length = *length;
      } else if (key == "capacity") {
        if (value == "inf") {
          node.capacity = Capacity::infinity();
        } else {
          const auto cap = parse_bigint(value);
          if (!cap || value.front() == '-' || value.front() == '+') {
            throw ParseError(line_no, "invalid capacity '" + std::string(value) + "'");
          }
          if (*cap <= 0) throw ParseError(line_no, "capacity must be a positive integer or inf");
          if (*cap > std::numeric_limits<std::uint64_t>::max()) throw ParseError(line_no, "capacity too large");
          node.capacity = Capacity::finite(cap->convert_to<std::uint64_t>());
        }
      } else {
        throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
      }
    }
    if (!saw_parent) throw ParseError(line_no, "missing parent=");
    nodes.push_back(std::move(node));
    line_of.push_back(line_no);
  }

  // Standard capacity for leaves without a capacity clause.
  std::vector<bool> has_child;
  for (const Node& node : nodes) {
    if (node.parent) {
      if (*node.parent >= has_child.size()) has_child.resize(*node.parent + 1, false);
      has_child[*node.parent] = true;
    }
  }
  for (Node& node : nodes) {
    const bool internal = node.id < has_child.size() && has_child[node.id];
    if (!internal && !node.capacity) node.capacity = Capacity::finite(1);
  }
  return RootedTree::from_nodes(std::move(nodes));
}

std::string write_tree_file(const RootedTree& tree) {
  std::ostringstream out;
  for (const Node& node : tree.nodes()) {
    out << "node " << node.id << " parent=";
    if (node.parent) {
      out << *node.parent << " length=" << to_string(*node.length);
    } else {
      out << '-';
    }
    if (node.capacity) out << " capacity=" << to_string(*node.capacity);
    out << '\n';
  }
  return out.str();
}

RootedTree canonical_skeleton(const RootedTree& tree) {
  // BFS over the skeleton: each kept vertex walks down through valence-2
  // vertices to find its skeleton children.
  std::vector<Node> out;
  out.push_back(Node{kRoot, std::nullopt, std::nullopt, tree.capacity(kRoot)});
  std::deque<std::pair<NodeId, NodeId>> queue;  // (original, new id)
  queue.emplace_back(kRoot, kRoot);
  while (!queue.empty()) {
    const auto [orig, mapped] = queue.front();
    queue.pop_front();
    for (NodeId child : tree.children(orig)) {
      Rational length = tree.length(child);
      NodeId end = child;
      while (tree.children(end).size() == 1) {
        end = tree.children(end)[0];
        length += tree.length(end);
      }
      const auto id = static_cast<NodeId>(out.size());
      out.push_back(Node{id, mapped, length, tree.capacity(end)});
      queue.emplace_back(end, id);
    }
  }
  return RootedTree::from_nodes(std::move(out));
}

namespace {

std::string signature_of(const RootedTree& tree, NodeId v) {
  if (tree.is_leaf(v)) return "(" + to_string(*tree.capacity(v)) + ")";
  std::vector<std::string> parts;
  for (NodeId c : tree.children(v)) parts.push_back(to_string(tree.length(c)) + ":" + signature_of(tree, c));
  std::sort(parts.begin(), parts.end());
  std::string out = "[";
  for (const auto& p : parts) out += p + ",";
  out += "]";
  return out;
}

}  // namespace

std::string metric_signature(const RootedTree& tree) {
  const RootedTree skeleton = canonical_skeleton(tree);
  return signature_of(skeleton, kRoot);
}

}  // namespace treefac

#include "corpus.hpp"

#include <algorithm>
#include <functional>

namespace corpus {

using treefac::Capacity;
using treefac::NodeId;
using treefac::Rational;

namespace {

struct Branch {
  int len;
  const Shape* sub;
  std::size_t size;  // edges, including the top one
  std::string sig;
};

}  // namespace

Corpus::Corpus(std::size_t max_edges) : by_edges_(max_edges + 1) {
  for (std::size_t e = 0; e <= max_edges; ++e) build(e);
}

std::vector<const Shape*> Corpus::all() const {
  std::vector<const Shape*> out;
  for (const auto& level : by_edges_) {
    for (const auto& s : level) out.push_back(s.get());
  }
  return out;
}

void Corpus::build(std::size_t e) {
  auto& out = by_edges_[e];
  if (e == 0) {
    for (int c = 0; c < 3; ++c) {
      auto s = std::make_unique<Shape>();
      s->cap = c;
      s->sig = "L" + std::to_string(c);
      out.push_back(std::move(s));
    }
    return;
  }
  std::vector<Branch> branches;
  for (std::size_t s = 1; s <= e; ++s) {
    for (const auto& sub : by_edges_[s - 1]) {
      for (int len = 0; len < 3; ++len) {
        branches.push_back({len, sub.get(), s, std::to_string(len) + ":" + sub->sig});
      }
    }
  }
  // Multisets of branches with total size e, as non-increasing index lists.
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t remaining, std::size_t max_index) {
    if (remaining == 0) {
      auto s = std::make_unique<Shape>();
      std::vector<std::string> parts;
      for (auto i : pick) {
        s->kids.emplace_back(branches[i].len, branches[i].sub);
        parts.push_back(branches[i].sig);
      }
      std::sort(parts.begin(), parts.end());
      s->sig = "(";
      for (const auto& p : parts) s->sig += p + ",";
      s->sig += ")";
      out.push_back(std::move(s));
      return;
    }
    for (std::size_t i = 0; i <= max_index && i < branches.size(); ++i) {
      if (branches[i].size > remaining) continue;
      pick.push_back(i);
      rec(remaining - branches[i].size, i);
      pick.pop_back();
    }
  };
  rec(e, branches.size() - 1);
}

treefac::RootedTree to_tree(const Shape& shape) {
  static const Rational lengths[] = {Rational(1), Rational(3, 2), Rational(2)};
  auto cap_of = [](int c) { return c == 2 ? Capacity::infinity() : Capacity::finite(static_cast<std::uint64_t>(c + 1)); };
  if (shape.kids.empty()) {
    return treefac::RootedTree::from_nodes({treefac::Node{0, std::nullopt, std::nullopt, cap_of(shape.cap)}});
  }
  treefac::TreeBuilder b;
  std::function<void(const Shape&, NodeId)> add = [&](const Shape& s, NodeId at) {
    for (const auto& [len, sub] : s.kids) {
      if (sub->kids.empty()) {
        b.add_child(at, lengths[len], cap_of(sub->cap));
      } else {
        add(*sub, b.add_child(at, lengths[len]));
      }
    }
  };
  add(shape, 0);
  return b.build();
}

}  // namespace corpus

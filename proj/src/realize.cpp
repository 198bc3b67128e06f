#include "treefac/realize.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "treefac/error.hpp"
#include "treefac/source.hpp"
#include "treefac/weighting.hpp"

namespace treefac {
namespace {

constexpr std::uint64_t kMaxVertices = 10'000'000;

std::vector<std::uint64_t> level_sizes(std::uint32_t d, std::uint32_t depth) {
  std::vector<std::uint64_t> sizes{1};
  for (std::uint32_t n = 1; n <= depth; ++n) {
    if (sizes.back() > kMaxVertices / d) throw InvalidArgument("realized tree would be too large");
    sizes.push_back(sizes.back() * d);
  }
  return sizes;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<Rational> BiasedSequence::flatten() const {
  std::vector<Rational> out;
  for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

void BiasedSequence::validate() const {
  if (d < 2) throw InvalidArgument("degree must be at least 2");
  if (groups.empty()) throw InvalidArgument("sequence has no generation 0");
  if (groups[0].size() != d) throw InvalidArgument("generation 0 must hold d zeros");
  for (const auto& z : groups[0]) {
    if (z != 0) throw InvalidArgument("generation 0 must hold d zeros");
  }
  const auto sizes = level_sizes(d, depth());
  for (std::uint32_t n = 1; n <= depth(); ++n) {
    if (groups[n].size() != sizes[n]) {
      throw InvalidArgument("generation " + std::to_string(n) + " must hold " + std::to_string(sizes[n]) + " terms");
    }
  }
  const auto flat = flatten();
  for (std::size_t k = 1; k < flat.size(); ++k) {
    if (flat[k] < flat[k - 1]) throw InvalidArgument("sequence decreases at index " + std::to_string(k));
  }
}

std::uint64_t OrderChoice::label(std::uint32_t generation, std::uint64_t rank) const {
  if (generation < perms.size() && !perms[generation].empty()) return perms[generation][rank];
  return rank;
}

void OrderChoice::validate(std::uint32_t d, std::uint32_t depth) const {
  const auto sizes = level_sizes(d, depth);
  for (std::uint32_t n = 0; n < perms.size() && n <= depth; ++n) {
    const auto& p = perms[n];
    if (p.empty()) continue;
    if (p.size() != sizes[n]) throw InvalidArgument("order for generation " + std::to_string(n) + " has the wrong size");
    std::vector<bool> seen(p.size(), false);
    for (auto x : p) {
      if (x >= p.size() || seen[x]) {
        throw InvalidArgument("order for generation " + std::to_string(n) + " is not a permutation");
      }
      seen[x] = true;
    }
  }
}

BiasCheck is_sufficiently_biased(const BiasedSequence& seq) {
  seq.validate();
  BiasCheck check;
  Rational sum = 0;
  Rational scale = 1;
  std::size_t index = seq.groups[0].size();
  for (std::uint32_t n = 0; n + 1 < seq.groups.size(); ++n) {
    sum += seq.groups[n].back();
    scale *= seq.d;
    if (!(seq.groups[n + 1].front() > 2 * scale * sum)) {
      check.ok = false;
      check.generation = n + 1;
      check.index = index;
      return check;
    }
    index += seq.groups[n + 1].size();
  }
  return check;
}

std::vector<std::vector<Rational>> realized_lengths_by_label(const BiasedSequence& seq, const OrderChoice& orders,
                                                             std::uint32_t depth) {
  seq.validate();
  if (depth == 0) throw InvalidArgument("depth must be at least 1");
  if (depth > seq.depth()) throw InvalidArgument("sequence has only " + std::to_string(seq.depth()) + " generations");
  orders.validate(seq.d, depth);
  const std::uint32_t d = seq.d;
  const auto sizes = level_sizes(d, depth);

  std::vector<std::vector<Rational>> len(depth + 1);
  for (std::uint32_t n = 1; n <= depth; ++n) {
    const auto& a = seq.groups[n];
    len[n].assign(sizes[n], Rational(0));
    // seen[j][label]: vertices of generation n already processed below that generation-j label.
    std::vector<std::vector<std::uint64_t>> seen(n);
    for (std::uint32_t j = 1; j < n; ++j) seen[j].assign(sizes[j], 0);
    for (std::uint64_t rank = 0; rank < sizes[n]; ++rank) {
      const std::uint64_t label = orders.label(n, rank);
      Rational value = a[rank];
      std::uint64_t ancestor = label;
      std::uint64_t below = 1;  // d^{n-j}
      for (std::uint32_t j = n - 1; j >= 1; --j) {
        ancestor /= d;
        below *= d;
        value -= (below + seen[j][ancestor]) * len[j][ancestor];
        ++seen[j][ancestor];
      }
      if (value < a.front() / 2 || value > a[rank]) {
        throw NotBiased("length " + to_string(value) + " at generation " + std::to_string(n) + ", rank " +
                        std::to_string(rank + 1) + " is outside [" + to_string(a.front() / 2) + ", " +
                        to_string(a[rank]) + "]");
      }
      len[n][label] = value;
    }
  }
  return len;
}

namespace {

RootedTree build_tree(std::uint32_t d, const OrderChoice& orders, const std::vector<std::vector<Rational>>& len,
                      std::optional<Rational> pad) {
  const auto depth = static_cast<std::uint32_t>(len.size() - 1);
  const auto sizes = level_sizes(d, depth);
  std::vector<std::vector<std::uint64_t>> rank_of(depth + 1);
  std::vector<NodeId> offset(depth + 1, 0);
  rank_of[0] = {0};
  for (std::uint32_t n = 1; n <= depth; ++n) {
    offset[n] = offset[n - 1] + static_cast<NodeId>(sizes[n - 1]);
    rank_of[n].resize(sizes[n]);
    for (std::uint64_t r = 0; r < sizes[n]; ++r) rank_of[n][orders.label(n, r)] = r;
  }
  std::vector<Node> nodes;
  nodes.push_back(Node{kRoot, std::nullopt, std::nullopt, std::nullopt});
  for (std::uint32_t n = 1; n <= depth; ++n) {
    for (std::uint64_t r = 0; r < sizes[n]; ++r) {
      const std::uint64_t label = orders.label(n, r);
      const NodeId parent = offset[n - 1] + static_cast<NodeId>(rank_of[n - 1][label / d]);
      std::optional<Capacity> cap;
      if (n == depth && !pad) cap = Capacity::infinity();
      nodes.push_back(Node{offset[n] + static_cast<NodeId>(r), parent, len[n][label], cap});
    }
  }
  if (pad) {
    for (std::uint64_t r = 0; r < sizes[depth]; ++r) {
      for (std::uint32_t c = 0; c < d; ++c) {
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.push_back(Node{id, offset[depth] + static_cast<NodeId>(r), *pad, Capacity::infinity()});
      }
    }
  }
  return RootedTree::from_nodes(std::move(nodes));
}

}  // namespace

RootedTree realize_lengths(const BiasedSequence& seq, const OrderChoice& orders, std::uint32_t depth) {
  return build_tree(seq.d, orders, realized_lengths_by_label(seq, orders, depth), std::nullopt);
}

RoundtripReport verify_roundtrip(const BiasedSequence& seq, const OrderChoice& orders, std::uint32_t depth) {
  const auto len = realized_lengths_by_label(seq, orders, depth);
  RoundtripReport report{build_tree(seq.d, orders, len, std::nullopt), {}, {}, {}};
  for (std::uint32_t n = 0; n <= depth; ++n) {
    report.expected.insert(report.expected.end(), seq.groups[n].begin(), seq.groups[n].end());
  }
  const Rational pad = report.expected.back() + 1;
  const RootedTree padded = build_tree(seq.d, orders, len, pad);

  WeightingProcess process(TreeSource::explicit_tree(padded));
  for (std::size_t k = 0; k < report.expected.size(); ++k) {
    const auto rec = process.step();
    if (!rec) throw Mismatch("weighting stopped after " + std::to_string(k) + " terms");
    report.produced.push_back(rec->value);
    report.trace_generation.push_back(padded.generation(rec->vertex));
  }
  for (std::size_t k = 0; k < report.expected.size(); ++k) {
    if (report.produced[k] != report.expected[k]) {
      throw Mismatch("term " + std::to_string(k) + ": expected " + to_string(report.expected[k]) + ", got " +
                     to_string(report.produced[k]));
    }
    if (k > 0 && report.trace_generation[k] < report.trace_generation[k - 1]) {
      throw Mismatch("step " + std::to_string(k) + " returns to generation " +
                     std::to_string(report.trace_generation[k]));
    }
  }
  return report;
}

BiasedSequence parse_biased_csv(std::istream& in) {
  std::map<std::uint32_t, std::map<std::uint64_t, Rational>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    const bool header = first && !fields.empty() && fields[0] == "n";
    first = false;
    if (header) continue;
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 fields n,i,a");
    std::uint64_t n = 0, i = 0;
    try {
      std::size_t used = 0;
      n = std::stoull(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument("n");
      i = std::stoull(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("i");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad generation or index");
    }
    if (i == 0) throw ParseError(line_no, "indices start at 1");
    const auto a = parse_rational(fields[2]);
    if (!a) throw ParseError(line_no, "bad term '" + fields[2] + "'");
    if (!rows[static_cast<std::uint32_t>(n)].emplace(i, *a).second) throw ParseError(line_no, "duplicate row");
  }
  BiasedSequence seq;
  if (rows.empty() || rows.begin()->first != 0) throw ParseError(line_no, "generation 0 is missing");
  seq.d = static_cast<std::uint32_t>(rows[0].size());
  std::uint32_t expect = 0;
  for (const auto& [n, terms] : rows) {
    if (n != expect++) throw ParseError(line_no, "generation " + std::to_string(expect - 1) + " is missing");
    std::vector<Rational> group;
    std::uint64_t k = 1;
    for (const auto& [i, a] : terms) {
      if (i != k++) throw ParseError(line_no, "generation " + std::to_string(n) + " skips index " + std::to_string(k - 1));
      group.push_back(a);
    }
    seq.groups.push_back(std::move(group));
  }
  try {
    seq.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(line_no, e.what());
  }
  return seq;
}

BiasedSequence parse_biased_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_biased_csv(in);
}

}  // namespace treefac

#include "treefac/source.hpp"

#include <cmath>
#include <deque>

#include <boost/multiprecision/miller_rabin.hpp>

#include "treefac/error.hpp"
#include "treefac/lazy_tree.hpp"

namespace treefac {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % q == 0) return n == q;
  }
  for (std::uint64_t q = 17; q <= n / q; q += 2) {
    if (n % q == 0) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n <= std::numeric_limits<std::uint64_t>::max()) return is_prime(n.convert_to<std::uint64_t>());
  return boost::multiprecision::miller_rabin_test(n, 25);
}

TreeSource TreeSource::explicit_tree(RootedTree tree) { return TreeSource(std::move(tree)); }

TreeSource TreeSource::regular(std::uint32_t degree, Rational length) {
  if (degree < 2) throw InvalidArgument("regular tree needs degree >= 2");
  if (length <= 0) throw InvalidArgument("edge length must be positive");
  return TreeSource(RegularRule{degree, std::move(length)});
}

TreeSource TreeSource::spherical(std::vector<std::uint32_t> branching, std::vector<Rational> lengths) {
  if (branching.empty() || lengths.empty()) throw InvalidArgument("spherical source needs b= and length= lists");
  for (auto b : branching) {
    if (b == 0) throw InvalidArgument("branching numbers must be positive");
  }
  for (const auto& l : lengths) {
    if (l <= 0) throw InvalidArgument("edge length must be positive");
  }
  return TreeSource(SphericalRule{std::move(branching), std::move(lengths)});
}

TreeSource TreeSource::lambda_scaled(TreeSource base, Rational lambda) {
  if (lambda <= 0) throw InvalidArgument("lambda must be positive");
  return TreeSource(LambdaRule{std::make_shared<const TreeSource>(std::move(base)), std::move(lambda)});
}

TreeSource TreeSource::adelic(std::vector<BigInt> set, BigInt prime) {
  if (set.empty()) throw InvalidArgument("integer set must be nonempty");
  if (!is_prime(prime)) throw InvalidArgument(prime.str() + " is not prime");
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
    throw InvalidArgument("integer set has repeated elements");
  }
  return TreeSource(AdelicRule{std::move(set), prime});
}

namespace {

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += fmt(items[i]);
  }
  return out;
}

}  // namespace

std::string TreeSource::describe() const {
  struct Visitor {
    std::string operator()(const RootedTree&) const { return "explicit"; }
    std::string operator()(const RegularRule& r) const {
      return "regular d=" + std::to_string(r.degree) + " length=" + to_string(r.length);
    }
    std::string operator()(const SphericalRule& r) const {
      return "spherical b=" + join(r.branching, [](auto b) { return std::to_string(b); }) +
             " length=" + join(r.lengths, [](const Rational& l) { return to_string(l); });
    }
    std::string operator()(const LambdaRule& r) const {
      return "lambda base=(" + r.base->describe() + ") lambda=" + to_string(r.lambda);
    }
    std::string operator()(const AdelicRule& r) const {
      return "adelic p=" + r.prime.str() + " set=" + join(r.set, [](const BigInt& s) { return s.str(); });
    }
  };
  return std::visit(Visitor{}, rule_);
}

namespace {

[[noreturn]] void spec_error(const std::string& msg) { throw ParseError(1, "generator spec: " + msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// key=value pairs separated by whitespace.
std::vector<std::pair<std::string_view, std::string_view>> key_values(std::string_view s) {
  std::vector<std::pair<std::string_view, std::string_view>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i == start) break;
    const auto token = s.substr(start, i - start);
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) spec_error("expected key=value, got '" + std::string(token) + "'");
    out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  return out;
}

Rational rational_arg(std::string_view v) {
  const auto r = parse_rational(v);
  if (!r) spec_error("invalid rational '" + std::string(v) + "'");
  return *r;
}

std::uint64_t uint_arg(std::string_view v) {
  const auto b = parse_bigint(v);
  if (!b || v.front() == '-' || v.front() == '+' || *b > std::numeric_limits<std::uint32_t>::max()) {
    spec_error("invalid integer '" + std::string(v) + "'");
  }
  return b->convert_to<std::uint64_t>();
}

}  // namespace

TreeSource parse_generator_spec(std::string_view text) {
  text = trim(text);
  const auto space = text.find_first_of(" \t");
  const auto kind = text.substr(0, space);
  const auto rest = space == std::string_view::npos ? std::string_view{} : trim(text.substr(space));

  try {
    if (kind == "lambda") {
      if (rest.substr(0, 5) != "base=") spec_error("lambda spec must start with base=");
      const auto marker = rest.rfind(" lambda=");
      if (marker == std::string_view::npos) spec_error("lambda spec needs lambda=");
      auto base = trim(rest.substr(5, marker - 5));
      if (base.size() >= 2 && base.front() == '(' && base.back() == ')') base = trim(base.substr(1, base.size() - 2));
      const auto lambda = rational_arg(trim(rest.substr(marker + 8)));
      return TreeSource::lambda_scaled(parse_generator_spec(base), lambda);
    }

    const auto kv = key_values(rest);
    auto find = [&](std::string_view key) -> std::string_view {
      std::optional<std::string_view> found;
      for (const auto& [k, v] : kv) {
        if (k == key) {
          if (found) spec_error("repeated key '" + std::string(key) + "'");
          found = v;
        }
      }
      if (!found) spec_error(std::string(kind) + " spec needs " + std::string(key) + "=");
      return *found;
    };
    auto check_keys = [&](std::initializer_list<std::string_view> allowed) {
      for (const auto& [k, v] : kv) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
          spec_error("unknown key '" + std::string(k) + "'");
        }
      }
    };

    if (kind == "regular") {
      check_keys({"d", "length"});
      return TreeSource::regular(static_cast<std::uint32_t>(uint_arg(find("d"))), rational_arg(find("length")));
    }
    if (kind == "spherical") {
      check_keys({"b", "length"});
      std::vector<std::uint32_t> b;
      for (auto item : split(find("b"), ',')) b.push_back(static_cast<std::uint32_t>(uint_arg(item)));
      std::vector<Rational> lengths;
      for (auto item : split(find("length"), ',')) lengths.push_back(rational_arg(item));
      return TreeSource::spherical(std::move(b), std::move(lengths));
    }
    if (kind == "adelic") {
      check_keys({"p", "set"});
      const auto p = parse_bigint(find("p"));
      if (!p || *p < 2) spec_error("invalid prime");
      std::vector<BigInt> set;
      for (auto item : split(find("set"), ',')) {
        const auto s = parse_bigint(item);
        if (!s) spec_error("invalid integer '" + std::string(item) + "'");
        set.push_back(*s);
      }
      return TreeSource::adelic(std::move(set), *p);
    }
  } catch (const InvalidArgument& e) {
    spec_error(e.what());
  }
  spec_error("unknown generator kind '" + std::string(kind) + "'");
}

RootedTree expand(const TreeSource& source, std::uint32_t depth, std::size_t max_nodes) {
  if (const RootedTree* tree = source.tree()) {
    std::uint32_t height = 0;
    for (NodeId v = 0; v < tree->size(); ++v) height = std::max(height, tree->generation(v));
    if (height <= depth) return *tree;
  }
  LazyTree arena(source, max_nodes);
  std::vector<Node> out;
  std::deque<std::pair<NodeId, NodeId>> queue;  // (arena id, output id)
  out.push_back(Node{kRoot, std::nullopt, std::nullopt, std::nullopt});
  queue.emplace_back(kRoot, kRoot);
  while (!queue.empty()) {
    const auto [v, mapped] = queue.front();
    queue.pop_front();
    if (arena.is_leaf(v)) {
      out[mapped].capacity = arena.capacity(v);
      continue;
    }
    if (arena.depth(v) == depth) {
      out[mapped].capacity = arena.cut_capacity(v);
      continue;
    }
    const auto count = arena.child_count(v);
    for (std::uint32_t i = 0; i < count; ++i) {
      const NodeId c = arena.child(v, i);
      const auto id = static_cast<NodeId>(out.size());
      out.push_back(Node{id, mapped, arena.length(c), std::nullopt});
      queue.emplace_back(c, id);
    }
  }
  return RootedTree::from_nodes(std::move(out));
}

bool is_spherically_symmetric(const TreeSource& source) {
  const auto& rule = source.rule();
  if (std::holds_alternative<RegularRule>(rule) || std::holds_alternative<SphericalRule>(rule)) return true;
  if (const auto* lam = std::get_if<LambdaRule>(&rule)) return is_spherically_symmetric(*lam->base);
  return false;
}

LevelProfile level_profile(const TreeSource& source, std::uint32_t depth, bool exact) {
  if (!is_spherically_symmetric(source)) throw InvalidArgument("source is not spherically symmetric");
  LevelProfile profile;
  Rational lambda = 1;
  const TreeSource* base = &source;
  while (const auto* lam = std::get_if<LambdaRule>(&base->rule())) {
    lambda *= lam->lambda;
    base = lam->base.get();
  }
  const double log_lambda = std::log(to_double(lambda));
  double log_count = 0;
  BigInt count = 1;
  Rational lambda_power = 1;
  for (std::uint32_t k = 1; k <= depth; ++k) {
    std::uint32_t b = 0;
    const Rational* len = nullptr;
    if (const auto* reg = std::get_if<RegularRule>(&base->rule())) {
      b = reg->degree;
      len = &reg->length;
    } else {
      const auto& sph = std::get<SphericalRule>(base->rule());
      b = sph.branching_at(k - 1);
      len = &sph.length_at(k - 1);
    }
    log_count += std::log(static_cast<double>(b));
    profile.log_count.push_back(log_count);
    profile.log_length.push_back(std::log(to_double(*len)) + (k - 1) * log_lambda);
    if (exact) {
      count *= b;
      profile.count.push_back(count);
      profile.length.push_back(*len * lambda_power);
      lambda_power *= lambda;
    }
  }
  return profile;
}

}  // namespace treefac

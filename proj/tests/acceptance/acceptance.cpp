// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when a
// criterion fails, unless it was listed with --known-failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "corpus.hpp"
#include "treefac/adelic.hpp"
#include "treefac/error.hpp"
#include "treefac/factorials.hpp"
#include "treefac/flow.hpp"
#include "treefac/realize.hpp"

using namespace treefac;

namespace {

// ---------------------------------------------------------------------------
// shared helpers

struct Outcome {
  bool pass = true;
  std::string detail;
};

unsigned worker_count() { return std::max(1u, std::min(std::thread::hardware_concurrency(), 16u)); }

template <class F>
void parallel_for(std::size_t count, F&& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < worker_count(); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Superadditivity bookkeeping across criteria 1 to 5.
struct SuperadditivityLedger {
  std::mutex mu;
  std::size_t sequences = 0;
  std::size_t violations = 0;
  std::string first;

  void check(const std::vector<Rational>& a, const std::string& label) {
    const auto v = superadditivity_violation(a);
    std::lock_guard lock(mu);
    ++sequences;
    if (v) {
      if (violations++ == 0) {
        first = label + " at (" + std::to_string(v->first) + ", " + std::to_string(v->second) + ")";
      }
    }
  }
} super;

std::size_t term_count(const RootedTree& tree, std::size_t cap) {
  const auto n = capacity_bound(tree);
  return n.is_infinite() ? cap : std::min<std::size_t>(cap, n.value());
}

struct RandomTreeSpec {
  std::size_t min_edges, max_edges;
  bool need_infinite;
};

RootedTree random_tree(std::mt19937_64& rng, const RandomTreeSpec& spec) {
  static const Rational lengths[] = {Rational(1), Rational(3, 2), Rational(2)};
  const std::size_t edges = spec.min_edges + rng() % (spec.max_edges - spec.min_edges + 1);
  TreeBuilder b;
  std::vector<NodeId> parent_of(edges + 1, 0);
  std::vector<bool> has_child(edges + 1, false);
  for (std::size_t i = 1; i <= edges; ++i) {
    parent_of[i] = static_cast<NodeId>(rng() % i);
    has_child[parent_of[i]] = true;
  }
  std::vector<std::size_t> leaves;
  for (std::size_t i = 1; i <= edges; ++i) {
    if (!has_child[i]) leaves.push_back(i);
  }
  // capacity code 0 = infinity
  std::vector<std::uint64_t> cap(edges + 1, 1);
  for (auto l : leaves) cap[l] = rng() % 3;
  if (spec.need_infinite && std::none_of(leaves.begin(), leaves.end(), [&](auto l) { return cap[l] == 0; })) {
    cap[leaves[rng() % leaves.size()]] = 0;
  }
  for (std::size_t i = 1; i <= edges; ++i) {
    const Rational& len = lengths[rng() % 3];
    if (has_child[i]) {
      b.add_child(parent_of[i], len);
    } else {
      b.add_child(parent_of[i], len, cap[i] == 0 ? Capacity::infinity() : Capacity::finite(cap[i]));
    }
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// 1. exhaustive corpus of weighted rooted trees up to isomorphism

Outcome criterion1() {
  const corpus::Corpus trees(6);
  const auto all = trees.all();
  std::set<std::string> seen;
  for (const auto* s : all) seen.insert(s->sig);
  std::atomic<std::size_t> mismatches{0};
  std::atomic<std::size_t> compared_terms{0};
  std::mutex mu;
  std::string first_bad;
  parallel_for(all.size(), [&](std::size_t i) {
    const RootedTree tree = corpus::to_tree(*all[i]);
    const std::size_t n = term_count(tree, 12);
    const auto w = factorials_weighting(TreeSource::explicit_tree(tree), n - 1);
    const auto g = factorials_greedy_oracle(tree, n - 1);
    const auto m = factorials_minmax(tree, n - 1);
    compared_terms += n;
    if (w.values != g.values || w.values != m.values || w.size() != n) {
      std::lock_guard lock(mu);
      if (mismatches++ == 0) first_bad = all[i]->sig;
    }
    super.check(w.values, "corpus tree " + all[i]->sig);
  });
  Outcome o;
  o.pass = mismatches == 0 && seen.size() == all.size();
  std::ostringstream d;
  d << all.size() << " trees up to isomorphism, " << compared_terms.load() << " terms, " << mismatches.load()
    << " mismatches";
  if (!first_bad.empty()) d << " (first " << first_bad << ")";
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion2() {
  std::vector<RootedTree> trees;
  std::mt19937_64 rng(20240214);
  for (int i = 0; i < 200; ++i) trees.push_back(random_tree(rng, {1, 30, false}));
  std::atomic<std::size_t> bad{0};
  parallel_for(trees.size(), [&](std::size_t i) {
    const std::size_t n = term_count(trees[i], 100);
    const auto canonical = factorials_weighting(TreeSource::explicit_tree(trees[i]), n - 1);
    super.check(canonical.values, "random tree " + std::to_string(i));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto s = factorials_weighting(TreeSource::explicit_tree(trees[i]), n - 1,
                                          TieBreakPolicy::seeded(seed * 7919 + i));
      if (s.values != canonical.values) ++bad;
    }
  });
  return {bad == 0, "200 trees x 20 seeds, " + std::to_string(bad.load()) + " differing runs"};
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  std::ostringstream d;
  std::vector<BigInt> set;
  for (int i = 0; i <= 12; ++i) set.emplace_back(i);
  const auto f = bhargava_factorials(set, 12);
  BigInt fact = 1;
  bool ok = f.size() == 13;
  for (std::size_t n = 0; ok && n <= 12; ++n) {
    if (n > 0) fact *= n;
    ok = f[n] == fact;
  }
  d << "{0..12}: " << (ok ? "n! exactly" : "mismatch") << " (12!_S = " << f.back() << ")";
  o.pass = ok;
  for (std::uint64_t p : {2, 3, 5}) {
    const auto seq = factorials_weighting(TreeSource::regular(static_cast<std::uint32_t>(p)), 64);
    BigInt nf = 1;
    std::size_t bad = 0;
    for (std::uint64_t n = 0; n <= 64; ++n) {
      if (n > 0) nf *= n;
      BigInt x = nf;
      std::uint64_t e = 0;
      while (x % p == 0) {
        x /= p;
        ++e;
      }
      if (seq[n] != e) ++bad;
    }
    super.check(seq.values, "regular d=" + std::to_string(p));
    d << "; p=" << p << ": " << bad << " mismatches";
    o.pass = o.pass && bad == 0;
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const auto seq = factorials_weighting(TreeSource::regular(2), 4096);
  super.check(seq.values, "binary tree to 4096");
  const double ratio = to_double(seq[4096]) / 4096.0;
  const bool ratio_ok = std::abs(ratio - 1.0) < 0.01;
  const auto r = effective_resistance(TreeSource::regular(2), 30, SolveMode::Exact);
  bool exact_ok = r.per_depth_exact.size() == 30;
  for (std::size_t h = 1; exact_ok && h <= 30; ++h) {
    exact_ok = r.per_depth_exact[h - 1] && *r.per_depth_exact[h - 1] == 1 - Rational(1, BigInt(1) << h);
    if (h > 1) exact_ok = exact_ok && *r.per_depth_exact[h - 2] < *r.per_depth_exact[h - 1];
  }
  // the reduction on explicit truncations gives the same values
  for (std::uint32_t h = 1; exact_ok && h <= 10; ++h) {
    exact_ok = effective_resistance(expand(TreeSource::regular(2), h)) == 1 - Rational(1, 1 << h);
  }
  o.pass = ratio_ok && exact_ok;
  std::ostringstream d;
  d << "a_4096/4096 = " << format_double(ratio) << ", R_h = 1 - 2^-h for h <= 30: " << (exact_ok ? "yes" : "no");
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
  std::vector<RootedTree> trees;
  std::mt19937_64 rng(5551212);
  for (int i = 0; i < 100; ++i) trees.push_back(random_tree(rng, {1, 12, true}));
  std::atomic<std::size_t> exact_bad{0}, ratio_bad{0};
  std::vector<double> gaps(trees.size(), 0);
  std::vector<double> offsets(trees.size(), 0);  // |a_n - nR| stays bounded
  parallel_for(trees.size(), [&](std::size_t i) {
    const auto& t = trees[i];
    const Rational r = effective_resistance(t);
    if (laplacian_H_finite(t) != r) ++exact_bad;
    const auto seq = factorials_weighting(TreeSource::explicit_tree(t), 10000);
    gaps[i] = std::abs(to_double(seq[10000]) / 10000.0 - to_double(r));
    offsets[i] = std::abs(to_double(seq[10000] - 10000 * r));
    if (gaps[i] >= 1e-3) ++ratio_bad;
    super.check(seq.values, "finite tree " + std::to_string(i));
  });
  std::ostringstream d;
  d << "Laplacian != reduction: " << exact_bad.load() << "/100; |a_n/n - R| >= 1e-3 at n=10^4: " << ratio_bad.load()
    << "/100 (largest gap " << format_double(*std::max_element(gaps.begin(), gaps.end())) << ", largest |a_n - nR| "
    << format_double(*std::max_element(offsets.begin(), offsets.end())) << ")";
  return {exact_bad == 0 && ratio_bad == 0, d.str()};
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
  std::ostringstream d;
  d << super.sequences << " sequences from criteria 1-5, " << super.violations << " violations";
  if (super.violations) d << " (first " << super.first << ")";
  return {super.violations == 0 && super.sequences > 0, d.str()};
}

// ---------------------------------------------------------------------------

Outcome criterion7() {
  const auto src = TreeSource::regular(2);
  WeightingProcess process(src);
  process.run(1 << 14);
  const auto flow = unit_current_flow(src, 8);
  const auto report = equidistribution_check(process, flow, 3);
  std::ostringstream d;
  d << "n = " << report.n << ", " << report.edges.size() << " edges, max |w/n - 2^-|e|| = "
    << format_double(report.max_deviation);
  double worst_vs_closed_form = 0;
  for (const auto& e : report.edges) {
    worst_vs_closed_form = std::max(worst_vs_closed_form, std::abs(e.normalized_weight - std::ldexp(1.0, -static_cast<int>(e.depth))));
  }
  return {report.edges.size() == 14 && worst_vs_closed_form < 0.02 && report.n == (1u << 14), d.str()};
}

// ---------------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  std::ostringstream d;
  for (std::uint32_t deg : {2, 3}) {
    const auto est = branching_number_estimate(TreeSource::regular(deg));
    const bool ok = est.lo <= deg && deg <= est.hi && est.hi - est.lo <= Rational(1, 20) && !est.below_range &&
                    !est.above_range;
    o.pass = o.pass && ok;
    d << (deg == 2 ? "" : "; ") << "d=" << deg << ": [" << to_string(est.lo) << ", " << to_string(est.hi) << "]";
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------

// Strictly above the bias bound at the start of every generation, and
// spaced within a generation by more than the sum of the earlier maxima.
BiasedSequence spaced_sequence(std::uint32_t d, std::uint32_t depth, std::mt19937_64& rng) {
  BiasedSequence s;
  s.d = d;
  s.groups.emplace_back(d, Rational(0));
  Rational sum = 0, scale = 1;
  for (std::uint32_t n = 1; n <= depth; ++n) {
    scale *= d;
    Rational value = n == 1 ? Rational(5 + rng() % 20) : 2 * scale * sum + 1 + rng() % 50;
    std::vector<Rational> g;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(scale); ++i) {
      g.push_back(value);
      value += sum + 1 + rng() % 7;
    }
    sum += g.back();
    s.groups.push_back(std::move(g));
  }
  return s;
}

OrderChoice random_orders(std::uint32_t d, std::uint32_t depth, std::mt19937_64& rng) {
  OrderChoice o;
  o.perms.emplace_back();
  std::uint64_t size = 1;
  for (std::uint32_t n = 1; n <= depth; ++n) {
    size *= d;
    std::vector<std::uint64_t> p(size);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    o.perms.push_back(std::move(p));
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::ostringstream d;
  std::mt19937_64 rng(909);
  for (std::uint32_t deg : {2u, 3u}) {
    std::size_t ok = 0, runs = 0, integer_bad = 0;
    std::string first_failure;
    std::size_t max_terms = 0;
    for (std::uint32_t depth = 1; depth <= 4; ++depth) {
      for (int trial = 0; trial < 3; ++trial) {
        const auto seq = spaced_sequence(deg, depth, rng);
        const auto orders = trial == 0 ? OrderChoice{} : random_orders(deg, depth, rng);
        ++runs;
        try {
          const auto lens = realized_lengths_by_label(seq, orders, depth);
          for (const auto& g : lens) {
            for (const auto& l : g) integer_bad += denominator(l) != 1;
          }
          const auto report = verify_roundtrip(seq, orders, depth);
          max_terms = std::max(max_terms, report.expected.size());
          ++ok;
        } catch (const Error& e) {
          if (first_failure.empty()) first_failure = "depth " + std::to_string(depth) + ": " + e.kind() + " " + e.what();
        }
      }
    }
    const bool pass = ok == runs && integer_bad == 0;
    o.pass = o.pass && pass;
    d << (deg == 2 ? "" : "; ") << "d=" << deg << ": " << ok << "/" << runs << " roundtrips exact";
    if (max_terms) d << " (up to " << max_terms << " terms)";
    if (integer_bad) d << ", " << integer_bad << " non-integer lengths";
    if (!first_failure.empty()) d << ", first failure " << first_failure;
  }
  // Two orders on the same sequence: same factorials, different metric trees.
  const auto seq = spaced_sequence(2, 3, rng);
  OrderChoice other = random_orders(2, 3, rng);
  other.perms[1] = {1, 0};
  other.perms[2] = {0, 2, 1, 3};
  try {
    const auto a = verify_roundtrip(seq, {}, 3);
    const auto b = verify_roundtrip(seq, other, 3);
    const bool differ = metric_signature(a.tree) != metric_signature(b.tree);
    o.pass = o.pass && differ && a.produced == b.produced;
    d << "; twin trees " << (differ ? "differ" : "coincide");
  } catch (const Error& e) {
    o.pass = false;
    d << "; twin check failed: " << e.what();
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion10() {
  Outcome o;
  std::ostringstream d;
  const auto src = TreeSource::regular(2);
  const auto base = factorials_removed(src, 0, 2048, {}, 12);
  const auto plain = factorials_weighting(src, 2048);
  bool same_base = base.values == plain.values;
  o.pass = same_base;
  d << "t=0 equals the plain sequence: " << (same_base ? "yes" : "no");
  for (std::size_t t : {1, 2}) {
    const auto r = factorials_removed(src, t, 2048, {}, 12);
    std::size_t above = 0;
    for (std::size_t n = 0; n <= 2048; ++n) above += r[n] > base[n];
    const double gap = std::abs(to_double(r[2048] - base[2048])) / 2048.0;
    o.pass = o.pass && above == 0 && gap < 0.05;
    d << "; t=" << t << ": " << above << " terms above, |diff|/n = " << format_double(gap);
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion11() {
  Outcome o;
  std::ostringstream d;
  WalkConfig config;
  config.trials = 100000;
  config.seed = 11;
  TreeBuilder b;
  NodeId v = 0;
  for (int i = 0; i < 9; ++i) v = b.add_child(v, 1);
  b.add_child(v, 1, Capacity::infinity());
  const auto path = TreeSource::explicit_tree(b.build());
  const auto w = random_walk_escape(path, config, 10);
  const double sigma_path = std::sqrt(0.1 * 0.9 / 1e5);
  const bool path_ok = std::abs(w.estimate - 0.1) <= 3 * sigma_path;
  d << "path h=10: " << format_double(w.estimate) << " vs 0.1 (" << format_double((w.estimate - 0.1) / sigma_path)
    << " sigma)";
  const auto binary = TreeSource::regular(2);
  const double exact = to_double(exact_escape_probability(binary, 10));
  const auto wb = random_walk_escape(binary, config, 10);
  const double sigma = std::sqrt(exact * (1 - exact) / 1e5);
  const bool binary_ok = std::abs(wb.estimate - exact) <= 3 * sigma;
  d << "; binary h=10: " << format_double(wb.estimate) << " vs " << format_double(exact) << " ("
    << format_double((wb.estimate - exact) / sigma) << " sigma)";
  o.pass = path_ok && binary_ok && w.unresolved == 0 && wb.unresolved == 0;
  o.detail = d.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-failure") == 0 && i + 1 < argc) {
      known.insert(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: " << argv[0] << " [--only N]... [--known-failure N]...\n";
      return 2;
    }
  }
  struct Criterion {
    int id;
    double budget_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, 60, criterion1},  {2, 30, criterion2},  {3, 10, criterion3}, {4, 30, criterion4},
      {5, 120, criterion5}, {6, 1e9, criterion6}, {7, 30, criterion7}, {8, 60, criterion8},
      {9, 30, criterion9},  {10, 1e9, criterion10}, {11, 60, criterion11},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << secs;
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << o.detail << "  [" << t.str() << " s"
              << (in_time ? "" : ", over budget") << "]" << (pass || !known.count(c.id) ? "" : "  (known failure)")
              << std::endl;
    if (!pass && !known.count(c.id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}

#include "treefac/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "treefac/adelic.hpp"
#include "treefac/error.hpp"
#include "treefac/factorials.hpp"
#include "treefac/flow.hpp"
#include "treefac/realize.hpp"
#include "treefac/source.hpp"
#include "treefac/weighting.hpp"

namespace treefac::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IOError : public Error {
 public:
  explicit IOError(const std::string& message) : Error("IOError", message) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rational rational_flag(const std::string& name, const std::string& text) {
  auto r = parse_rational(text);
  if (!r) throw UsageError(name + ": expected a rational, got '" + text + "'");
  return *r;
}

// One integer per line, '#' comments and blank lines skipped.
std::string lines_as_list(const std::string& text) {
  std::stringstream ss(text);
  std::string line, joined;
  while (std::getline(ss, line)) {
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!joined.empty()) joined += ',';
    joined += line;
  }
  return joined;
}

std::vector<BigInt> integer_list(const std::string& text) {
  std::vector<BigInt> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    auto v = parse_bigint(item);
    if (!v) throw UsageError("--set: bad integer '" + item + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw UsageError("--set is empty");
  return out;
}

struct SourceFlags {
  std::string tree_file;
  std::string gen;
};

void add_source_flags(CLI::App* cmd, SourceFlags& flags) {
  auto* t = cmd->add_option("--tree", flags.tree_file, "Tree file");
  auto* g = cmd->add_option("--gen", flags.gen, "Generator spec");
  t->excludes(g);
}

TreeSource load_source(const SourceFlags& flags) {
  if (!flags.tree_file.empty()) return TreeSource::explicit_tree(parse_tree_file(read_file(flags.tree_file)));
  if (!flags.gen.empty()) return parse_generator_spec(flags.gen);
  throw UsageError("one of --tree or --gen is required");
}

std::uint32_t tree_height(const RootedTree& tree) {
  std::uint32_t h = 0;
  for (NodeId v = 0; v < tree.size(); ++v) h = std::max(h, tree.generation(v));
  return h;
}

/// Explicit tree as given, or the truncation of a generator.
RootedTree finite_tree(const TreeSource& source, std::optional<std::uint32_t> depth, const std::string& what) {
  if (const auto* t = source.tree()) return depth ? expand(source, *depth) : *t;
  if (!depth) throw UsageError(what + " on a generator needs --depth");
  return expand(source, *depth);
}

void rational_columns(std::ostream& out, const Rational& v) {
  out << numerator(v) << ',' << denominator(v) << ',' << format_double(to_double(v));
}

int cmd_factorials(std::ostream& out, const SourceFlags& src, std::size_t n, std::optional<std::uint32_t> depth,
                   std::size_t t, std::optional<std::uint64_t> seed, const std::string& method, bool csv, bool trace) {
  const TreeSource source = load_source(src);
  const TieBreakPolicy policy = seed ? TieBreakPolicy::seeded(*seed) : TieBreakPolicy::canonical();
  FactorialSequence seq;
  std::vector<StepRecord> steps;
  if (t > 0) {
    seq = factorials_removed(source, t, n, policy, depth);
  } else if (method == "greedy") {
    seq = factorials_greedy_oracle(finite_tree(source, depth, "greedy"), n);
  } else if (method == "minmax") {
    seq = factorials_minmax(finite_tree(source, depth, "minmax"), n);
  } else {
    WeightingProcess process(depth ? TreeSource::explicit_tree(expand(source, *depth)) : source, policy);
    while (process.steps() <= n) {
      auto rec = process.step();
      if (!rec) break;
      steps.push_back(*rec);
    }
    seq.values = process.values();
  }
  if (trace && steps.empty()) throw UsageError("--trace is only available for the weighting process");

  if (csv) {
    out << "n,a_n_num,a_n_den,a_n_float" << (trace ? ",vertex,case" : "") << '\n';
    for (std::size_t k = 0; k < seq.size(); ++k) {
      out << k << ',';
      rational_columns(out, seq[k]);
      if (trace) out << ',' << steps[k].vertex << ',' << step_case_name(steps[k].kind);
      out << '\n';
    }
    return 0;
  }
  out << "source: " << source.describe() << '\n';
  for (std::size_t k = 0; k < seq.size(); ++k) {
    out << "a_" << k << " = " << to_string(seq[k]);
    if (trace) out << "  (vertex " << steps[k].vertex << ", case " << step_case_name(steps[k].kind) << ')';
    out << '\n';
  }
  if (seq.size() < n + 1) out << "sequence stops after " << seq.size() << " terms\n";
  if (seq.size() >= 2) {
    const auto est = limit_estimate(seq);
    out << "a_n/n at n=" << seq.size() - 1 << ": " << format_double(to_double(est.value)) << " (max a_k/k "
        << format_double(to_double(est.lower_bound)) << ")" << (est.likely_divergent ? ", likely divergent" : "")
        << '\n';
  }
  return 0;
}

int cmd_oracle_check(std::ostream& out, const SourceFlags& src, std::size_t n, std::optional<std::uint32_t> depth) {
  const TreeSource source = load_source(src);
  const RootedTree tree = finite_tree(source, depth, "oracle-check");
  const Count bound = capacity_bound(tree);
  if (!bound.is_infinite() && n >= bound.value()) n = bound.value() - 1;
  const auto w = factorials_weighting(TreeSource::explicit_tree(tree), n);
  const auto g = factorials_greedy_oracle(tree, n);
  const auto m = factorials_minmax(tree, n);
  for (std::size_t k = 0; k <= n; ++k) {
    if (w[k] != g[k] || w[k] != m[k]) {
      throw Mismatch("n=" + std::to_string(k) + ": weighting " + to_string(w[k]) + ", greedy " + to_string(g[k]) +
                     ", minmax " + to_string(m[k]));
    }
  }
  out << "OK: weighting == greedy == minmax\n";
  return 0;
}

int cmd_adelic(std::ostream& out, const std::string& set_text, std::optional<std::size_t> n,
               const std::string& prime_text) {
  const auto set = integer_list(set_text);
  const std::size_t n_max = n ? *n : set.size() - 1;
  if (!prime_text.empty()) {
    const auto p = parse_bigint(prime_text);
    if (!p) throw UsageError("--p: bad integer '" + prime_text + "'");
    const auto seq = factorials_prime(set, *p, n_max);
    out << "n,valuation\n";
    for (std::size_t k = 0; k < seq.size(); ++k) out << k << ',' << to_string(seq[k]) << '\n';
    return 0;
  }
  const auto f = bhargava_factorials(set, n_max);
  out << "n,factorial\n";
  for (std::size_t k = 0; k < f.size(); ++k) out << k << ',' << f[k] << '\n';
  return 0;
}

int cmd_flow(std::ostream& out, const SourceFlags& src, std::optional<std::uint32_t> depth, SolveMode mode, bool csv,
             std::optional<std::uint64_t> trials, std::uint64_t seed) {
  const TreeSource source = load_source(src);
  if (!depth) {
    if (!source.tree()) throw UsageError("flow on a generator needs --depth");
    depth = tree_height(*source.tree());
  }
  if (trials && csv) throw UsageError("--trials cannot be combined with --csv");
  const auto flow = unit_current_flow(source, *depth, mode);
  const RootedTree& tree = flow.tree;
  if (csv) {
    out << "edge_parent,edge_child,flow_num,flow_den,flow_float\n";
    for (NodeId v = 1; v < tree.size(); ++v) {
      out << *tree.parent(v) << ',' << v << ',';
      if (flow.exact) {
        out << numerator(flow.flow[v]) << ',' << denominator(flow.flow[v]);
      } else {
        out << ',';
      }
      out << ',' << format_double(flow.flow_float[v]) << '\n';
    }
    return 0;
  }
  const auto r = effective_resistance(source, *depth, mode);
  out << "source: " << source.describe() << '\n';
  out << "mode: " << r.mode_name() << '\n';
  for (std::size_t k = 0; k < r.per_depth.size(); ++k) {
    out << "R_" << k + 1 << " = ";
    if (r.exact && r.per_depth_exact[k]) {
      out << to_string(*r.per_depth_exact[k]) << " (" << format_double(r.per_depth[k]) << ")";
    } else {
      out << format_double(r.per_depth[k]);
    }
    out << '\n';
  }
  out << "energy = ";
  if (flow.exact) {
    out << to_string(flow.energy()) << '\n';
  } else {
    out << format_double(flow.energy_float()) << '\n';
  }
  out << "conservation defect = " << format_double(flow.conservation_defect()) << '\n';
  if (trials) {
    WalkConfig config;
    config.trials = *trials;
    config.seed = seed;
    const auto walk = random_walk_escape(source, config, *depth);
    out << "escape: " << format_double(walk.estimate) << " +- " << format_double(walk.std_error) << " over "
        << walk.trials << " walks";
    if (walk.unresolved) out << " (" << walk.unresolved << " unresolved)";
    out << '\n';
    if (tree.size() <= kFloatThreshold) {
      const auto exact = exact_escape_probability(source, *depth);
      out << "exact escape: " << to_string(exact) << " (" << format_double(to_double(exact)) << ")\n";
    }
  }
  return 0;
}

int cmd_branching(std::ostream& out, const SourceFlags& src, const BranchingOptions& options, bool csv, bool trace) {
  const TreeSource source = load_source(src);
  const auto est = branching_number_estimate(source, options);
  if (csv) {
    out << "lo_num,lo_den,lo_float,hi_num,hi_den,hi_float\n";
    rational_columns(out, est.lo);
    out << ',';
    rational_columns(out, est.hi);
    out << '\n';
  } else {
    out << "branching number in [" << to_string(est.lo) << ", " << to_string(est.hi) << "]";
    if (est.below_range) out << " (at or below lambda-lo)";
    if (est.above_range) out << " (at or above lambda-hi)";
    out << '\n';
  }
  if (trace) {
    for (const auto& e : est.evaluations) {
      out << "# lambda=" << to_string(e.lambda) << ' ' << classification_name(e.verdict);
      for (const auto& [h, r] : e.resistances) out << ' ' << h << ':' << format_double(r);
      out << '\n';
    }
  }
  return 0;
}

int cmd_realize(std::ostream& out, const std::string& input, std::optional<std::uint32_t> depth,
                std::optional<std::uint64_t> seed, bool check) {
  if (input.empty()) throw UsageError("realize needs --input");
  const auto seq = parse_biased_csv(read_file(input));
  const std::uint32_t h = depth ? *depth : seq.depth();
  OrderChoice orders;
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::uint64_t size = 1;
    orders.perms.emplace_back();
    for (std::uint32_t n = 1; n <= h; ++n) {
      size *= seq.d;
      std::vector<std::uint64_t> p(size);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      orders.perms.push_back(std::move(p));
    }
  }
  if (check) {
    const auto bias = is_sufficiently_biased(seq);
    if (!bias.ok) out << "warning: bias condition fails at generation " << *bias.generation << '\n';
    const auto report = verify_roundtrip(seq, orders, h);
    out << "OK: roundtrip matches " << report.expected.size() << " terms\n";
    return 0;
  }
  out << write_tree_file(realize_lengths(seq, orders, h));
  return 0;
}

int cmd_equidist(std::ostream& out, const SourceFlags& src, std::size_t n, std::uint32_t depth,
                 std::optional<std::uint32_t> flow_depth, std::optional<std::uint64_t> seed, bool csv) {
  const TreeSource source = load_source(src);
  std::uint32_t fd = flow_depth ? *flow_depth : depth + 8;
  if (const auto* t = source.tree(); t && !flow_depth) fd = std::max(depth, tree_height(*t));
  if (fd < depth) throw UsageError("--flow-depth must be at least --depth");
  const auto flow = unit_current_flow(source, fd);
  WeightingProcess process(source, seed ? TieBreakPolicy::seeded(*seed) : TieBreakPolicy::canonical());
  process.run(n);
  const auto report = equidistribution_check(process, flow, depth);
  if (csv) {
    out << "edge_parent,edge_child,depth,normalized_weight,flow,deviation\n";
    for (const auto& e : report.edges) {
      out << *flow.tree.parent(e.child) << ',' << e.child << ',' << e.depth << ',' << format_double(e.normalized_weight)
          << ',' << format_double(e.flow) << ',' << format_double(std::abs(e.normalized_weight - e.flow)) << '\n';
    }
    return 0;
  }
  out << "n = " << report.n << ", edges of depth <= " << depth << ": " << report.edges.size() << '\n';
  out << "max deviation = " << format_double(report.max_deviation) << " at edge " << *flow.tree.parent(report.worst_edge)
      << "-" << report.worst_edge << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tree factorials, electrical flows and realizations"};
  app.require_subcommand(1);

  SourceFlags src;
  std::size_t n = 10;
  std::optional<std::size_t> n_opt;
  std::optional<std::uint32_t> depth;
  std::optional<std::uint32_t> flow_depth;
  std::size_t t = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string method = "weighting";
  bool csv = false, trace = false, exact = false, use_float = false, check = false;
  std::string set_text, set_file, prime_text, input;
  std::string lambda_lo = "1", lambda_hi = "4", tol = "1/20";
  std::uint32_t equi_depth = 3;

  auto* fac = app.add_subcommand("factorials", "Tree factorial sequence a_0..a_n");
  add_source_flags(fac, src);
  fac->add_option("--n", n, "Largest index");
  fac->add_option("--depth", depth, "Truncate the source at this depth");
  fac->add_option("--t", t, "Drop the t largest pairings (removed variant)");
  fac->add_option("--seed", seed, "Seeded random tie-breaking");
  fac->add_option("--method", method, "weighting, greedy or minmax")
      ->check(CLI::IsMember({"weighting", "greedy", "minmax"}));
  fac->add_flag("--csv", csv, "CSV output");
  fac->add_flag("--trace", trace, "Show the chosen vertex and case per step");

  auto* oc = app.add_subcommand("oracle-check", "Compare weighting, greedy and min-max");
  add_source_flags(oc, src);
  oc->add_option("--n", n, "Largest index (clamped below N)");
  oc->add_option("--depth", depth, "Truncate the source at this depth");

  auto* ad = app.add_subcommand("adelic", "Generalized factorials of an integer set");
  auto* set_opt = ad->add_option("--set", set_text, "Comma separated integers");
  ad->add_option("--set-file", set_file, "File with one integer per line")->excludes(set_opt);
  ad->add_option("--n", n_opt, "Largest index");
  ad->add_option("--p", prime_text, "Only the valuations at this prime");
  ad->add_flag("--csv", csv, "CSV output (always on)");

  auto* fl = app.add_subcommand("flow", "Effective resistance and unit current flow");
  add_source_flags(fl, src);
  fl->add_option("--depth", depth, "Truncation depth");
  auto* ex = fl->add_flag("--exact", exact, "Exact rational arithmetic");
  auto* fo = fl->add_flag("--float", use_float, "Floating point");
  ex->excludes(fo);
  fl->add_flag("--csv", csv, "Per-edge flows as CSV");
  fl->add_option("--trials", trials, "Also estimate the escape probability by random walks");
  fl->add_option("--seed", seed, "Random walk seed");

  auto* br = app.add_subcommand("branching", "Bracket the branching number by bisection");
  add_source_flags(br, src);
  br->add_option("--lambda-lo", lambda_lo, "Lower end of the search");
  br->add_option("--lambda-hi", lambda_hi, "Upper end of the search");
  br->add_option("--tol", tol, "Bracket width");
  br->add_flag("--csv", csv, "CSV output");
  br->add_flag("--trace", trace, "Show every evaluation");

  auto* re = app.add_subcommand("realize", "Lengths on the regular tree from a biased sequence");
  re->add_option("--input", input, "CSV rows n,i,a");
  re->add_option("--depth", depth, "Generations to realize");
  re->add_option("--seed", seed, "Random order within each generation");
  re->add_flag("--check", check, "Verify the roundtrip instead of printing the tree");

  auto* eq = app.add_subcommand("equidist", "Normalized weights against the unit current flow");
  add_source_flags(eq, src);
  eq->add_option("--n", n, "Number of weighting steps");
  eq->add_option("--depth", equi_depth, "Compare edges down to this depth");
  eq->add_option("--flow-depth", flow_depth, "Truncation used for the flow");
  eq->add_option("--seed", seed, "Seeded random tie-breaking");
  eq->add_flag("--csv", csv, "CSV output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fac->parsed()) return cmd_factorials(out, src, n, depth, t, seed, method, csv, trace);
    if (oc->parsed()) return cmd_oracle_check(out, src, n, depth);
    if (ad->parsed()) {
      if (!set_file.empty()) set_text = lines_as_list(read_file(set_file));
      if (set_text.empty()) throw UsageError("adelic needs --set or --set-file");
      return cmd_adelic(out, set_text, n_opt, prime_text);
    }
    if (fl->parsed()) {
      const SolveMode mode = exact ? SolveMode::Exact : use_float ? SolveMode::Float : SolveMode::Auto;
      return cmd_flow(out, src, depth, mode, csv, trials, seed.value_or(0));
    }
    if (br->parsed()) {
      BranchingOptions options;
      options.lambda_lo = rational_flag("--lambda-lo", lambda_lo);
      options.lambda_hi = rational_flag("--lambda-hi", lambda_hi);
      options.tol = rational_flag("--tol", tol);
      return cmd_branching(out, src, options, csv, trace);
    }
    if (re->parsed()) return cmd_realize(out, input, depth, seed, check);
    if (eq->parsed()) return cmd_equidist(out, src, n, equi_depth, flow_depth, seed, csv);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace treefac::cli

// gapamp: command-line front end for the instance, scheme, composition and
// estimation tools. Exit status: 0 ok, 1 negative answer under --fail-on-no,
// 2 usage, file or precondition error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapamp/gapamp.hpp"

namespace {

using namespace gapamp;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Error raised after the cause has been reported; carries only the exit code.
struct Abort {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw FileError("write failed for '" + path + "'");
}

// "-" or empty means stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

template <typename Parse>
auto load(const std::string& path, Parse parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw FileError(path + ": " + e.what());
  }
}

DagInstance load_instance(const std::string& path) {
  return load(path, [](const std::string& t) { return parse_instance(t); });
}
Scheme load_scheme(const std::string& path) {
  return load(path, [](const std::string& t) { return parse_scheme(t); });
}
LeafSet load_leafset(const std::string& path) {
  return load(path, [](const std::string& t) { return parse_leafset(t); });
}
PathSolution load_solution(const std::string& path) {
  return load(path, [](const std::string& t) { return parse_solution(t); });
}

void require_valid(const DagInstance& inst, const std::string& path) {
  const auto vs = validate_instance(inst);
  if (vs.empty()) return;
  std::cerr << "gapamp: " << path << ": invalid instance\n";
  for (const auto& v : vs) std::cerr << "  " << to_string(v.kind) << " at " << v.location << '\n';
  throw Abort{kError};
}

// "1,3,4" or "1 3 4".
std::vector<std::uint64_t> parse_number_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::uint64_t v = 0;
    if (!detail::parse_uint(token, v)) throw CLI::ValidationError("bad number '" + token + "' in list");
    out.push_back(v);
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

struct Seed {
  std::optional<std::uint64_t> given;

  std::uint64_t resolve() const {
    if (given) return *given;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
};

void add_seed(CLI::App* cmd, Seed& seed) {
  cmd->add_option("--seed", seed.given, "RNG seed; a fresh one is drawn and recorded when omitted");
}

std::string join(const std::vector<LeafNumber>& xs, char sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(xs[i]);
  }
  return s;
}

// ---- subcommands -----------------------------------------------------------

struct GenArgs {
  bool yes = false;
  bool no = false;
  int k = 2;
  int pad = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  const DagInstance inst = a.yes ? gen_yes_instance(a.k, a.pad) : gen_no_instance(a.k);
  emit(a.out, serialize_instance(inst));
  return kOk;
}

struct ValidateArgs {
  std::string path;
  bool fail_on_no = false;
};

int run_validate(const ValidateArgs& a) {
  const DagInstance inst = load_instance(a.path);
  const auto vs = validate_instance(inst);
  if (vs.empty()) {
    std::cout << "VALID n=" << inst.graph().vertex_count() << " m=" << inst.graph().arc_count()
              << " k=" << inst.k() << '\n';
    return kOk;
  }
  std::cout << "INVALID\n";
  for (const auto& v : vs) std::cout << "  " << to_string(v.kind) << " at " << v.location << '\n';
  return a.fail_on_no ? kNegative : kOk;
}

struct SolveArgs {
  std::string path;
  bool all = false;
  bool max = false;
  std::string subset;
  std::string subset_file;
  bool witness = false;
  std::string out;
  std::size_t budget = 8;
  unsigned jobs = 1;
  bool fail_on_no = false;
};

int run_solve(const SolveArgs& a) {
  const DagInstance inst = load_instance(a.path);
  require_valid(inst, a.path);
  const auto total = inst.k();

  auto report = [&](const PathSolution& sol, std::size_t served) {
    std::cout << "SERVED " << served << '/' << total << '\n';
    if (a.witness) std::cout << serialize_solution(sol);
    if (!a.out.empty()) write_file(a.out, serialize_solution(sol));
  };

  if (a.max) {
    MaxServedOptions opts;
    opts.request_budget = a.budget;
    opts.jobs = a.jobs;
    const MaxServed m = max_served(inst, opts);
    report(m.witness, static_cast<std::size_t>(m.count));
    std::cout << "subset: " << join(std::vector<LeafNumber>(m.subset.begin(), m.subset.end()), ',') << '\n';
    return kOk;
  }

  RequestSubset subset;
  if (a.all) {
    subset = all_requests(inst);
  } else {
    std::vector<std::uint64_t> picked;
    if (!a.subset_file.empty()) {
      picked = load_leafset(a.subset_file).members();
    } else {
      picked = parse_number_list(a.subset);
    }
    for (std::uint64_t r : picked) {
      if (r < 1 || r > static_cast<std::uint64_t>(total)) {
        std::cerr << "gapamp: request " << r << " outside 1.." << total << '\n';
        return kError;
      }
      subset.push_back(static_cast<int>(r));
    }
  }
  SolverOptions opts;
  opts.subset_budget = a.budget;
  const Decision d = decide_disjoint_paths(inst, subset, opts);
  if (!d.feasible) {
    std::cout << "INFEASIBLE\n";
    return a.fail_on_no ? kNegative : kOk;
  }
  report(*d.witness, d.witness->paths.size());
  return kOk;
}

struct SampleArgs {
  int k = 2;
  int d = 2;
  Seed seed;
  std::string out;
};

int run_scheme_sample(const SampleArgs& a) {
  const std::uint64_t seed = a.seed.resolve();
  const Scheme s = random_scheme(TreeShape(a.k, a.d), seed);
  emit(a.out, "# seed: " + std::to_string(seed) + "\n" + serialize_scheme(s));
  return kOk;
}

struct CheckArgs {
  std::string scheme;
  std::string leafset;
  bool fail_on_no = false;
};

int run_scheme_check(const CheckArgs& a) {
  const Scheme s = load_scheme(a.scheme);
  const LeafSet set = load_leafset(a.leafset);
  if (!(set.shape() == s.shape())) {
    std::cerr << "gapamp: leaf set is over T(" << set.shape().k() << ',' << set.shape().d()
              << ") but the scheme is over T(" << s.shape().k() << ',' << s.shape().d() << ")\n";
    return kError;
  }
  const auto c = find_collision(set, s);
  if (!c) {
    std::cout << "NO COLLISION\n";
    return a.fail_on_no ? kNegative : kOk;
  }
  std::cout << format_certificate(*c) << '\n' << "leaves: " << join(c->witnesses, ',') << '\n';
  return kOk;
}

struct HeavyArgs {
  std::string leafset;
  std::uint64_t q = 2;
};

int run_scheme_heavy(const HeavyArgs& a) {
  const LeafSet set = load_leafset(a.leafset);
  const HeavySet f = build_heavy_set_F(set, a.q);
  const TreeShape& t = set.shape();
  const Fraction floor(1, static_cast<std::int64_t>(4 * a.q));
  bool dense = true;
  for (const auto& m : f.members) {
    const NodeRef u = t.locate(m.node);
    if (u.depth == t.d()) continue;
    for (int i = 1; i <= t.k(); ++i) dense = dense && frac(set, child_ref(t, u, i)) >= floor;
  }
  std::cout << "tau: " << f.tau << '\n'
            << "layers: " << f.layers << '\n'
            << "members: " << f.members.size() << '\n'
            << "leaves_sum: " << f.leaves_sum << '\n'
            << "bound: " << f.bound.str() << '\n'
            << "children_dense: " << (dense ? "yes" : "no") << '\n'
            << "sum_meets_bound: " << (BigRational(f.leaves_sum) >= f.bound ? "yes" : "no") << '\n';
  for (const auto& m : f.members) {
    std::cout << "member " << m.anchor.to_string() << " -> " << m.node.to_string() << " steps "
              << m.steps << '\n';
  }
  return kOk;
}

struct SearchArgs {
  int k = 2;
  int d = 2;
  std::uint64_t q = 2;
  bool brute_force = false;
  std::uint64_t max_schemes = 10'000'000;
  std::uint64_t max_subsets = 10'000'000;
  std::optional<std::uint64_t> sample;
  Seed seed;
  bool no_timing = false;
  std::string out;
};

int run_scheme_search(const SearchArgs& a) {
  const TreeShape shape(a.k, a.d);
  SearchLimits limits{a.max_schemes, a.max_subsets};
  SearchReport r;
  std::optional<std::uint64_t> seed;
  try {
    r = exhaustive_universal_search(shape, a.q, a.brute_force ? CollisionTest::BruteForce : CollisionTest::Fast,
                                    limits);
  } catch (const GuardExceeded& e) {
    if (!a.sample) throw;
    std::cerr << "gapamp: " << e.what() << "; sampling " << *a.sample << " schemes instead\n";
    seed = a.seed.resolve();
    r = sampled_universal_search(shape, a.q, *a.sample, *seed);
  }
  if (seed) std::cout << "seed: " << *seed << '\n';
  std::cout << serialize_report(r, !a.no_timing);
  if (r.scheme && !a.out.empty()) write_file(a.out, serialize_scheme(*r.scheme));
  return kOk;
}

struct ComposeArgs {
  std::string path;
  std::string scheme;
  std::string out;
  std::string map;
  std::string dot;
};

int run_compose(const ComposeArgs& a) {
  const DagInstance base = load_instance(a.path);
  require_valid(base, a.path);
  const Scheme s = load_scheme(a.scheme);
  const ComposedInstance j = compose(base, s);
  emit(a.out, serialize_instance(j.instance));
  if (!a.map.empty()) write_file(a.map, serialize_composition_map(j));
  if (!a.dot.empty()) write_file(a.dot, to_dot(j, base.graph().vertex_count()));
  if (!a.out.empty() && a.out != "-") {
    std::cout << "copies: " << j.copies.size() << '\n'
              << "vertices: " << j.instance.graph().vertex_count() << '\n'
              << "arcs: " << j.instance.graph().arc_count() << '\n'
              << "connector_arcs: " << j.connector_arcs << '\n'
              << "requests: " << j.instance.k() << '\n';
  }
  return kOk;
}

struct LiftArgs {
  std::string base;
  std::string solution;
  std::string scheme;
  std::string composed;
  std::string out;
};

int run_lift(const LiftArgs& a) {
  const DagInstance base = load_instance(a.base);
  require_valid(base, a.base);
  const PathSolution sol = load_solution(a.solution);
  const Scheme s = load_scheme(a.scheme);
  const ComposedInstance j = compose(base, s);
  if (!a.composed.empty()) {
    const DagInstance given = load_instance(a.composed);
    if (!(canonicalize(given) == canonicalize(j.instance))) {
      std::cerr << "gapamp: " << a.composed << " is not the composition of " << a.base << " with "
                << a.scheme << '\n';
      return kError;
    }
  }
  const PathSolution lifted = lift_solution(base, sol, s, j);
  const SolutionCheck check = verify_solution(j.instance, lifted, all_requests(j.instance));
  if (!check.ok) {
    std::cerr << "gapamp: lifted solution failed verification: " << check.violations.front() << '\n';
    return kError;
  }
  std::cout << "SERVED " << lifted.paths.size() << '/' << j.instance.k() << '\n';
  if (!a.out.empty()) write_file(a.out, serialize_solution(lifted));
  return kOk;
}

struct EstimateCommon {
  std::uint64_t trials = 10000;
  Seed seed;
  unsigned jobs = 1;
  std::string records;
};

void add_estimate_common(CLI::App* cmd, EstimateCommon& c) {
  cmd->add_option("--trials", c.trials, "number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  add_seed(cmd, c.seed);
  cmd->add_option("--jobs", c.jobs, "worker threads; results do not depend on it")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--records", c.records, "write one 'trial <t> <0|1>' line per trial here");
}

int finish_estimate(const EstimateCommon& c, std::uint64_t seed, const EstimateReport& r) {
  std::cout << "seed: " << seed << '\n' << serialize_report(r);
  if (!c.records.empty()) write_file(c.records, serialize_trials(r));
  return kOk;
}

struct NoCollisionArgs {
  std::string leafset;
  std::optional<std::uint64_t> q;
  EstimateCommon common;
};

int run_estimate_nocollision(const NoCollisionArgs& a) {
  const LeafSet set = load_leafset(a.leafset);
  const std::uint64_t seed = a.common.seed.resolve();
  EstimateOptions opts;
  opts.jobs = a.common.jobs;
  opts.record_trials = !a.common.records.empty();
  opts.q = a.q;
  return finish_estimate(a.common, seed, estimate_no_collision_probability(set, a.common.trials, seed, opts));
}

struct PermArgs {
  std::uint64_t ell = 16;
  std::uint64_t z = 2;
  int k = 2;
  std::vector<std::string> sets;
  EstimateCommon common;
};

int run_estimate_perm(const PermArgs& a) {
  std::optional<std::vector<std::vector<std::uint64_t>>> sets;
  if (!a.sets.empty()) {
    sets.emplace();
    for (const auto& s : a.sets) sets->push_back(parse_number_list(s));
  }
  const std::uint64_t seed = a.common.seed.resolve();
  EstimateOptions opts;
  opts.jobs = a.common.jobs;
  opts.record_trials = !a.common.records.empty();
  return finish_estimate(a.common, seed,
                         permutation_intersection_experiment(a.ell, a.z, a.k, a.common.trials, seed, sets, opts));
}

struct AuditArgs {
  int k = 2;
  int d = 2;
  std::uint64_t q = 2;
  EstimateCommon common;
};

int run_estimate_audit(const AuditArgs& a) {
  const std::uint64_t seed = a.common.seed.resolve();
  const AuditReport r = union_bound_audit(TreeShape(a.k, a.d), a.q, a.common.trials, seed, a.common.jobs);
  std::cout << "seed: " << seed << '\n' << serialize_report(r);
  return kOk;
}

struct DepthArgs {
  int k = 2;
  std::uint64_t q = 2;
};

int run_depth(const DepthArgs& a) {
  std::cout << required_depth(a.k, a.q).str() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gapamp: disjoint-paths instances, tree schemes and gap-amplifying composition"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  int code = kOk;
  std::function<int()> action;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a generated instance");
  auto* yes_flag = gen_cmd->add_flag("--yes", gen.yes, "k parallel request paths");
  auto* no_flag = gen_cmd->add_flag("--no", gen.no, "k requests through one bottleneck vertex");
  yes_flag->excludes(no_flag);
  gen_cmd->add_option("-k", gen.k, "number of requests")->capture_default_str();
  gen_cmd->add_option("--pad", gen.pad, "interior vertices per path (--yes)")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.out, "output file (default stdout)");
  gen_cmd->callback([&] {
    if (!gen.yes && !gen.no) throw CLI::RequiredError("--yes or --no");
    action = [&] { return run_gen(gen); };
  });

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "check an instance file");
  val_cmd->add_option("instance", val.path, "instance file")->required();
  val_cmd->add_flag("--fail-on-no", val.fail_on_no, "exit 1 when the instance is invalid");
  val_cmd->callback([&] { action = [&] { return run_validate(val); }; });

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "decide or maximise simultaneously served requests");
  solve_cmd->add_option("instance", solve.path, "instance file")->required();
  auto* all_opt = solve_cmd->add_flag("--all", solve.all, "serve every request");
  auto* sub_opt = solve_cmd->add_option("--subset", solve.subset, "request indices, e.g. 1,3,4");
  auto* subf_opt = solve_cmd->add_option("--subset-file", solve.subset_file, "leafset file naming the requests");
  auto* max_opt = solve_cmd->add_flag("--max", solve.max, "largest servable subset");
  solve_cmd->add_flag("--witness", solve.witness, "print the paths");
  solve_cmd->add_option("-o,--output", solve.out, "write the solution file here");
  solve_cmd->add_option("--budget", solve.budget, "largest request set the solver accepts")->capture_default_str();
  solve_cmd->add_option("--jobs", solve.jobs, "worker threads for --max")->capture_default_str();
  solve_cmd->add_flag("--fail-on-no", solve.fail_on_no, "exit 1 when infeasible");
  for (auto* o : {all_opt, sub_opt, subf_opt, max_opt}) {
    for (auto* p : {all_opt, sub_opt, subf_opt, max_opt}) {
      if (o != p) o->excludes(p);
    }
  }
  solve_cmd->callback([&] {
    if (!solve.all && !solve.max && sub_opt->count() == 0 && subf_opt->count() == 0) {
      throw CLI::RequiredError("one of --all, --subset, --subset-file, --max");
    }
    action = [&] { return run_solve(solve); };
  });

  auto* scheme_cmd = app.add_subcommand("scheme", "sample, check and search tree schemes");
  scheme_cmd->require_subcommand(1);

  SampleArgs sample;
  auto* sample_cmd = scheme_cmd->add_subcommand("sample", "uniformly random scheme");
  sample_cmd->add_option("-k", sample.k, "tree arity")->capture_default_str();
  sample_cmd->add_option("-d", sample.d, "tree depth")->capture_default_str();
  add_seed(sample_cmd, sample.seed);
  sample_cmd->add_option("-o,--output", sample.out, "output file (default stdout)");
  sample_cmd->callback([&] { action = [&] { return run_scheme_sample(sample); }; });

  CheckArgs check;
  auto* check_cmd = scheme_cmd->add_subcommand("check", "first collision of a leaf set");
  check_cmd->add_option("scheme", check.scheme, "scheme file")->required();
  check_cmd->add_option("leafset", check.leafset, "leafset file")->required();
  check_cmd->add_flag("--fail-on-no", check.fail_on_no, "exit 1 when there is no collision");
  check_cmd->callback([&] { action = [&] { return run_scheme_check(check); }; });

  HeavyArgs heavy;
  auto* heavy_cmd = scheme_cmd->add_subcommand("heavy", "dense node family of a leaf set");
  heavy_cmd->add_option("leafset", heavy.leafset, "leafset file")->required();
  heavy_cmd->add_option("-q", heavy.q, "density parameter")->capture_default_str();
  heavy_cmd->callback([&] { action = [&] { return run_scheme_heavy(heavy); }; });

  SearchArgs search;
  auto* search_cmd = scheme_cmd->add_subcommand("search", "look for a scheme colliding with every q-subset");
  search_cmd->add_option("-k", search.k, "tree arity")->capture_default_str();
  search_cmd->add_option("-d", search.d, "tree depth")->capture_default_str();
  search_cmd->add_option("-q", search.q, "q-subsets have at least k^d/q leaves")->capture_default_str();
  search_cmd->add_flag("--brute-force", search.brute_force, "enumerate collisions from the definition");
  search_cmd->add_option("--max-schemes", search.max_schemes, "enumeration guard")->capture_default_str();
  search_cmd->add_option("--max-subsets", search.max_subsets, "enumeration guard")->capture_default_str();
  search_cmd->add_option("--sample", search.sample, "when a guard trips, sample this many schemes");
  add_seed(search_cmd, search.seed);
  search_cmd->add_flag("--no-timing", search.no_timing, "omit elapsed time from the report");
  search_cmd->add_option("-o,--output", search.out, "write a found scheme here");
  search_cmd->callback([&] { action = [&] { return run_scheme_search(search); }; });

  ComposeArgs comp;
  auto* comp_cmd = app.add_subcommand("compose", "build the composed instance J from I and a scheme");
  comp_cmd->add_option("instance", comp.path, "base instance file")->required();
  comp_cmd->add_option("--scheme", comp.scheme, "scheme file")->required();
  comp_cmd->add_option("-o,--output", comp.out, "composed instance (default stdout)");
  comp_cmd->add_option("--map", comp.map, "write the leaf/copy map here");
  comp_cmd->add_option("--dot", comp.dot, "write a Graphviz rendering here");
  comp_cmd->callback([&] { action = [&] { return run_compose(comp); }; });

  LiftArgs lift;
  auto* lift_cmd = app.add_subcommand("lift", "turn a full solution of I into one of J");
  lift_cmd->add_option("instance", lift.base, "base instance file")->required();
  lift_cmd->add_option("solution", lift.solution, "solution file serving every request of I")->required();
  lift_cmd->add_option("--scheme", lift.scheme, "scheme file")->required();
  lift_cmd->add_option("--composed", lift.composed, "check against this composed instance file");
  lift_cmd->add_option("-o,--output", lift.out, "write the lifted solution here");
  lift_cmd->callback([&] { action = [&] { return run_lift(lift); }; });

  auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo experiments");
  est_cmd->require_subcommand(1);

  NoCollisionArgs noc;
  auto* noc_cmd = est_cmd->add_subcommand("nocollision", "probability a random scheme misses a leaf set");
  noc_cmd->add_option("leafset", noc.leafset, "leafset file")->required();
  noc_cmd->add_option("-q", noc.q, "attach the depth-dependent bound when it applies");
  add_estimate_common(noc_cmd, noc.common);
  noc_cmd->callback([&] { action = [&] { return run_estimate_nocollision(noc); }; });

  PermArgs perm;
  auto* perm_cmd = est_cmd->add_subcommand("perm", "random permutations of fixed sets with no common image");
  perm_cmd->add_option("--ell", perm.ell, "ground set size")->capture_default_str();
  perm_cmd->add_option("--z", perm.z, "sets have at least ell/z elements")->capture_default_str();
  perm_cmd->add_option("-k", perm.k, "number of permutations")->capture_default_str();
  perm_cmd->add_option("--set", perm.sets, "explicit set, e.g. 1,2 (repeat k times)");
  add_estimate_common(perm_cmd, perm.common);
  perm_cmd->callback([&] { action = [&] { return run_estimate_perm(perm); }; });

  AuditArgs audit;
  auto* audit_cmd = est_cmd->add_subcommand("audit", "fraction of random schemes hitting every q-subset");
  audit_cmd->add_option("-k", audit.k, "tree arity")->capture_default_str();
  audit_cmd->add_option("-d", audit.d, "tree depth")->capture_default_str();
  audit_cmd->add_option("-q", audit.q, "q-subset parameter")->capture_default_str();
  add_estimate_common(audit_cmd, audit.common);
  audit_cmd->callback([&] { action = [&] { return run_estimate_audit(audit); }; });

  DepthArgs depth;
  auto* depth_cmd = app.add_subcommand("depth", "tree depth the universal-scheme bound needs");
  depth_cmd->add_option("-k", depth.k, "number of requests")->capture_default_str();
  depth_cmd->add_option("-q", depth.q, "gap")->capture_default_str();
  depth_cmd->callback([&] { action = [&] { return run_depth(depth); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    code = action();
  } catch (const Abort& a) {
    code = a.code;
  } catch (const std::exception& e) {
    std::cerr << "gapamp: " << e.what() << '\n';
    code = kError;
  }
  std::cout.flush();
  return code;
}

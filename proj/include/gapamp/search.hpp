#pragma once

// Universal schemes at small scale, and Monte Carlo checks of the random
// scheme arguments.
//
// Randomized routines derive the seed of trial t as trial_seed(master, t), so
// a report depends only on (parameters, master seed), never on --jobs.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gapamp/collision.hpp"
#include "gapamp/heavy.hpp"
#include "gapamp/random.hpp"
#include "gapamp/scheme.hpp"
#include "gapamp/tree.hpp"

namespace gapamp {

class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;
// Bound comparisons are conclusive only with this many successes and failures.
inline constexpr std::uint64_t kConclusiveFloor = 10;

struct EstimateReport {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;  // trials where the measured event happened
  double estimate = 0.0;
  double std_error = 0.0;
  double half_width99 = 0.0;
  std::optional<double> bound;
  std::string bound_label;
  // estimate - 3 * std_error <= bound
  std::optional<bool> consistent;
  bool conclusive = false;
  std::vector<std::uint8_t> per_trial;  // filled only when requested
};

namespace detail {

inline EstimateReport summarize(std::uint64_t trials, std::uint64_t successes,
                                std::optional<double> bound, std::string label) {
  EstimateReport r;
  r.trials = trials;
  r.successes = successes;
  r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
  r.half_width99 = kZ99 * r.std_error;
  r.bound = bound;
  r.bound_label = std::move(label);
  if (bound) r.consistent = r.estimate - 3.0 * r.std_error <= *bound;
  r.conclusive = successes >= kConclusiveFloor && trials - successes >= kConclusiveFloor;
  return r;
}

// Runs event(t) for t in [0, trials) over `jobs` threads in contiguous chunks.
inline std::vector<std::uint8_t> run_trials(std::uint64_t trials, unsigned jobs,
                                            const std::function<bool(std::uint64_t)>& event) {
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(trials), 0);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::uint64_t>(trials, 1))));
  auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t t = lo; t < hi; ++t) hit[static_cast<std::size_t>(t)] = event(t) ? 1 : 0;
  };
  if (jobs == 1) {
    chunk(0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t per = (trials + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      const std::uint64_t lo = std::min(trials, per * j);
      const std::uint64_t hi = std::min(trials, lo + per);
      pool.emplace_back(chunk, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return hit;
}

inline std::uint64_t factorial_capped(std::uint64_t n, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (r > cap / i) return cap + 1;
    r *= i;
  }
  return r;
}

}  // namespace detail

struct EstimateOptions {
  unsigned jobs = 1;
  bool record_trials = false;
  // When set and d >= required_depth(k, q), the exp(-k^d) bound is attached.
  std::optional<std::uint64_t> q;
};

// Fraction of random schemes with no collision against the fixed set A.
inline EstimateReport estimate_no_collision_probability(const LeafSet& a, std::uint64_t trials,
                                                         std::uint64_t seed,
                                                         const EstimateOptions& options = {}) {
  if (trials < 1) throw PreconditionError("estimate: trials must be >= 1");
  const TreeShape shape = a.shape();
  auto hits = detail::run_trials(trials, options.jobs, [&](std::uint64_t t) {
    return !find_collision(a, random_scheme(shape, trial_seed(seed, t))).has_value();
  });
  std::optional<double> bound;
  std::string label = "none (below required depth)";
  if (options.q && shape.k() >= 2 && BigInt(shape.d()) >= required_depth(shape.k(), *options.q)) {
    bound = std::exp(-static_cast<double>(shape.leaf_count()));
    label = "exp(-k^d)";
  }
  const auto successes = static_cast<std::uint64_t>(std::count(hits.begin(), hits.end(), 1));
  EstimateReport r = detail::summarize(trials, successes, bound, label);
  if (options.record_trials) r.per_trial = std::move(hits);
  return r;
}

// Probability that k independent uniform permutations of [ell] send
// X_1..X_k to images with empty common intersection, against exp(-ell/z^k).
inline EstimateReport permutation_intersection_experiment(
    std::uint64_t ell, std::uint64_t z, int k, std::uint64_t trials, std::uint64_t seed,
    std::optional<std::vector<std::vector<std::uint64_t>>> sets = std::nullopt,
    const EstimateOptions& options = {}) {
  if (ell < 1 || z < 1 || k < 1) throw PreconditionError("ell, z and k must be >= 1");
  if (trials < 1) throw PreconditionError("trials must be >= 1");
  std::vector<std::vector<std::uint64_t>> xs;
  if (sets) {
    xs = *sets;
    if (xs.size() != static_cast<std::size_t>(k)) {
      throw PreconditionError("expected " + std::to_string(k) + " sets, got " +
                              std::to_string(xs.size()));
    }
  } else {
    std::vector<std::uint64_t> base((ell + z - 1) / z);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = i + 1;
    xs.assign(static_cast<std::size_t>(k), base);
  }
  for (auto& x : xs) {
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    if (!x.empty() && (x.front() < 1 || x.back() > ell)) {
      throw PreconditionError("set element outside 1.." + std::to_string(ell));
    }
    if (x.size() * z < ell) {
      throw PreconditionError("set of size " + std::to_string(x.size()) + " is below ell/z = " +
                              std::to_string(ell) + "/" + std::to_string(z));
    }
  }
  auto hits = detail::run_trials(trials, options.jobs, [&](std::uint64_t t) {
    Rng rng(trial_seed(seed, t));
    std::vector<int> cover(static_cast<std::size_t>(ell), 0);
    for (const auto& x : xs) {
      const Permutation pi = random_permutation(rng, static_cast<std::size_t>(ell));
      for (std::uint64_t e : x) ++cover[pi[static_cast<std::size_t>(e - 1)] - 1];
    }
    return std::none_of(cover.begin(), cover.end(), [&](int c) { return c == k; });
  });
  const double bound = std::exp(-static_cast<double>(ell) /
                                std::pow(static_cast<double>(z), static_cast<double>(k)));
  const auto successes = static_cast<std::uint64_t>(std::count(hits.begin(), hits.end(), 1));
  EstimateReport r = detail::summarize(trials, successes, bound, "exp(-ell/z^k)");
  if (options.record_trials) r.per_trial = std::move(hits);
  return r;
}

enum class SearchOutcome { SchemeFound, NoneExists, SampledOnly };

inline const char* to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::SchemeFound: return "scheme found";
    case SearchOutcome::NoneExists: return "none exists";
    case SearchOutcome::SampledOnly: return "sampled-only";
  }
  return "unknown";
}

enum class CollisionTest { Fast, BruteForce };

struct SearchLimits {
  std::uint64_t max_schemes = 10'000'000;  // product over nodes of Leaves(v)!
  std::uint64_t max_subsets = 10'000'000;  // 2^(k^d)
};

struct SearchReport {
  TreeShape shape{1, 1};
  std::uint64_t q = 1;
  SearchOutcome outcome = SearchOutcome::NoneExists;
  std::uint64_t schemes_examined = 0;
  std::uint64_t subsets_examined = 0;
  double elapsed_seconds = 0.0;
  std::optional<Scheme> scheme;
};

namespace detail {

inline bool collides(const LeafSet& a, const Scheme& s, CollisionTest test) {
  return test == CollisionTest::Fast ? find_collision(a, s).has_value()
                                     : !brute_force_collisions(a, s).empty();
}

// Masks (bit i = leaf i + 1) of all subsets with at least ceil(k^d / q) leaves.
inline std::vector<std::uint64_t> q_subset_masks(const TreeShape& shape, std::uint64_t q) {
  const std::uint64_t n = shape.leaf_count();
  const std::uint64_t min_size = (n + q - 1) / q;
  std::vector<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::uint64_t>(std::popcount(mask)) >= min_size) out.push_back(mask);
  }
  return out;
}

inline LeafSet leafset_from_mask(const TreeShape& shape, std::uint64_t mask) {
  std::vector<char> present(static_cast<std::size_t>(shape.leaf_count()));
  for (std::size_t i = 0; i < present.size(); ++i) present[i] = (mask >> i) & 1u;
  return LeafSet(shape, std::move(present));
}

}  // namespace detail

// Walks every scheme in odometer order (nodes breadth-first, the last node
// varying fastest, each node's bijections in lexicographic order starting
// from the identity) and returns the first one colliding with every q-subset.
inline SearchReport exhaustive_universal_search(const TreeShape& shape, std::uint64_t q,
                                                CollisionTest test = CollisionTest::Fast,
                                                const SearchLimits& limits = {}) {
  if (q < 1) throw PreconditionError("search: q must be >= 1");
  std::uint64_t schemes = 1;
  for (std::uint64_t i = 0; i < shape.node_count(); ++i) {
    const std::uint64_t f = detail::factorial_capped(shape.leaves_below(shape.bfs_node(i).depth),
                                                     limits.max_schemes);
    if (f > limits.max_schemes || schemes > limits.max_schemes / f) {
      throw GuardExceeded("search: scheme count of T(" + std::to_string(shape.k()) + "," +
                          std::to_string(shape.d()) + ") exceeds " +
                          std::to_string(limits.max_schemes));
    }
    schemes *= f;
  }
  if (shape.leaf_count() >= 63 || (std::uint64_t{1} << shape.leaf_count()) > limits.max_subsets) {
    throw GuardExceeded("search: 2^" + std::to_string(shape.leaf_count()) +
                        " leaf subsets exceed " + std::to_string(limits.max_subsets));
  }

  const auto start = std::chrono::steady_clock::now();
  SearchReport report;
  report.shape = shape;
  report.q = q;
  const auto masks = detail::q_subset_masks(shape, q);
  std::vector<LeafSet> subsets;
  subsets.reserve(masks.size());
  for (std::uint64_t m : masks) subsets.push_back(detail::leafset_from_mask(shape, m));

  Scheme current = Scheme::identity(shape);
  std::vector<Permutation> perms = current.permutations();
  while (true) {
    ++report.schemes_examined;
    const Scheme s(shape, perms);
    bool universal = true;
    for (const LeafSet& a : subsets) {
      ++report.subsets_examined;
      if (!detail::collides(a, s, test)) {
        universal = false;
        break;
      }
    }
    if (universal) {
      report.outcome = SearchOutcome::SchemeFound;
      report.scheme = s;
      break;
    }
    std::size_t pos = perms.size();
    bool wrapped = true;
    while (pos-- > 0) {
      if (std::next_permutation(perms[pos].begin(), perms[pos].end())) {
        wrapped = false;
        break;
      }
    }
    if (wrapped) {
      report.outcome = SearchOutcome::NoneExists;
      break;
    }
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// Random schemes checked against every q-subset; never certifies absence.
inline SearchReport sampled_universal_search(const TreeShape& shape, std::uint64_t q,
                                             std::uint64_t trials, std::uint64_t seed) {
  if (q < 1) throw PreconditionError("search: q must be >= 1");
  if (shape.leaf_count() > 20) {
    throw GuardExceeded("search: k^d = " + std::to_string(shape.leaf_count()) + " exceeds 20");
  }
  const auto start = std::chrono::steady_clock::now();
  SearchReport report;
  report.shape = shape;
  report.q = q;
  report.outcome = SearchOutcome::SampledOnly;
  std::vector<LeafSet> subsets;
  for (std::uint64_t m : detail::q_subset_masks(shape, q)) subsets.push_back(detail::leafset_from_mask(shape, m));
  for (std::uint64_t t = 0; t < trials; ++t) {
    ++report.schemes_examined;
    Scheme s = random_scheme(shape, trial_seed(seed, t));
    bool universal = true;
    for (const LeafSet& a : subsets) {
      ++report.subsets_examined;
      if (!find_collision(a, s)) {
        universal = false;
        break;
      }
    }
    if (universal) {
      report.outcome = SearchOutcome::SchemeFound;
      report.scheme = std::move(s);
      break;
    }
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

struct AuditReport {
  TreeShape shape{1, 1};
  std::uint64_t q = 1;
  std::uint64_t schemes_sampled = 0;
  std::uint64_t universal_schemes = 0;
  double universal_fraction = 0.0;
  std::uint64_t q_subset_count = 0;
  // max over q-subsets A of the fraction of sampled schemes with no collision on A
  double max_no_collision_estimate = 0.0;
  // 1 - |q-subsets| * max_no_collision_estimate
  double union_bound_context = 0.0;
};

// Samples random schemes and checks each against every q-subset.
inline AuditReport union_bound_audit(const TreeShape& shape, std::uint64_t q, std::uint64_t trials,
                                     std::uint64_t seed, unsigned jobs = 1) {
  if (q < 1) throw PreconditionError("audit: q must be >= 1");
  if (trials < 1) throw PreconditionError("audit: trials must be >= 1");
  if (shape.leaf_count() > 20) {
    throw GuardExceeded("audit: k^d = " + std::to_string(shape.leaf_count()) + " exceeds 20");
  }
  const auto masks = detail::q_subset_masks(shape, q);
  std::vector<LeafSet> subsets;
  subsets.reserve(masks.size());
  for (std::uint64_t m : masks) subsets.push_back(detail::leafset_from_mask(shape, m));

  // misses[a]: sampled schemes with no collision on subset a.
  std::vector<std::atomic<std::uint64_t>> misses(subsets.size());
  auto universal = detail::run_trials(trials, jobs, [&](std::uint64_t t) {
    const Scheme s = random_scheme(shape, trial_seed(seed, t));
    bool all = true;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if (!find_collision(subsets[i], s)) {
        misses[i].fetch_add(1, std::memory_order_relaxed);
        all = false;
      }
    }
    return all;
  });

  AuditReport r;
  r.shape = shape;
  r.q = q;
  r.schemes_sampled = trials;
  r.universal_schemes = static_cast<std::uint64_t>(std::count(universal.begin(), universal.end(), 1));
  r.universal_fraction = static_cast<double>(r.universal_schemes) / static_cast<double>(trials);
  r.q_subset_count = subsets.size();
  std::uint64_t worst = 0;
  for (const auto& m : misses) worst = std::max(worst, m.load());
  r.max_no_collision_estimate = static_cast<double>(worst) / static_cast<double>(trials);
  r.union_bound_context = 1.0 - static_cast<double>(r.q_subset_count) * r.max_no_collision_estimate;
  return r;
}

// "key: value" reports.

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

inline std::string serialize_report(const EstimateReport& r) {
  std::ostringstream os;
  os << "trials: " << r.trials << '\n'
     << "successes: " << r.successes << '\n'
     << "estimate: " << format_double(r.estimate) << '\n'
     << "std_error: " << format_double(r.std_error) << '\n'
     << "half_width_99: " << format_double(r.half_width99) << '\n'
     << "bound: " << (r.bound ? format_double(*r.bound) : std::string("none")) << '\n'
     << "bound_formula: " << r.bound_label << '\n'
     << "consistent: " << (r.consistent ? (*r.consistent ? "yes" : "no") : "n/a") << '\n'
     << "conclusive: " << (r.conclusive ? "yes" : "no") << '\n';
  return os.str();
}

// One "trial <t> <0|1>" line per recorded trial.
inline std::string serialize_trials(const EstimateReport& r) {
  std::ostringstream os;
  for (std::size_t t = 0; t < r.per_trial.size(); ++t) {
    os << "trial " << t << ' ' << static_cast<int>(r.per_trial[t]) << '\n';
  }
  return os.str();
}

inline std::string serialize_report(const SearchReport& r, bool include_timing = true) {
  std::ostringstream os;
  os << "k: " << r.shape.k() << '\n'
     << "d: " << r.shape.d() << '\n'
     << "q: " << r.q << '\n'
     << "outcome: " << to_string(r.outcome) << '\n'
     << "schemes_examined: " << r.schemes_examined << '\n'
     << "subsets_examined: " << r.subsets_examined << '\n';
  if (include_timing) os << "elapsed_seconds: " << format_double(r.elapsed_seconds) << '\n';
  return os.str();
}

inline std::string serialize_report(const AuditReport& r) {
  std::ostringstream os;
  os << "k: " << r.shape.k() << '\n'
     << "d: " << r.shape.d() << '\n'
     << "q: " << r.q << '\n'
     << "schemes_sampled: " << r.schemes_sampled << '\n'
     << "universal_schemes: " << r.universal_schemes << '\n'
     << "universal_fraction: " << format_double(r.universal_fraction) << '\n'
     << "q_subsets: " << r.q_subset_count << '\n'
     << "max_no_collision_estimate: " << format_double(r.max_no_collision_estimate) << '\n'
     << "union_bound_context: " << format_double(r.union_bound_context) << '\n';
  return os.str();
}

}  // namespace gapamp

// Prints one PASS/FAIL line per primary criterion; exits nonzero if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "brute.hpp"
#include "weaksc/closure.hpp"
#include "weaksc/elicit.hpp"
#include "weaksc/gen.hpp"
#include "weaksc/oracle.hpp"
#include "weaksc/recognize.hpp"
#include "weaksc/sctree.hpp"

using namespace weaksc;
using namespace weaksc::testing;

namespace {

constexpr std::uint64_t kSeed = 20240611;

constexpr std::size_t kTreeRandomInstances = 10000;
constexpr std::size_t kTreeMaxCandidates = 8;
constexpr std::size_t kTreeMaxVoters = 8;
constexpr std::size_t kStructuralInstances = 1000;
constexpr std::size_t kMaxCandidates = 10;
constexpr std::size_t kElicitInstances = 200;
constexpr std::size_t kElicitMaxVoters = 200;
constexpr std::size_t kMaxDuplication = 5;

// query budgets
constexpr std::size_t kSearchPerCandidate = 10;
constexpr std::size_t kTotalLinear = 4;
constexpr std::size_t kTotalSort = 8;

constexpr double kExhaustive3Seconds = 60;
constexpr double kTreeOracleSeconds = 600;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

int failures = 0;

void criterion(const char* name, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s  %-34s %s [%.1fs]%s%s\n", v.pass ? "PASS" : "FAIL", name, v.detail.str().c_str(), secs,
              v.pass ? "" : "  first failure: ", v.first_failure.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string describe(const Profile& p) {
  std::string out;
  for (const auto& s : strs(p)) out += (out.empty() ? "" : ",") + s;
  return "{" + out + "}";
}

std::vector<Preference> subset_of(const std::vector<Preference>& all, std::uint64_t mask) {
  std::vector<Preference> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (mask >> i & 1) out.push_back(all[i]);
  return out;
}

// Largest component after deleting r, by plain graph search.
std::size_t brute_largest_component(const VoterTree& t, std::size_t r) {
  std::vector<bool> seen(t.size(), false);
  seen[r] = true;
  std::size_t best = 0;
  for (std::size_t s = 0; s < t.size(); ++s) {
    if (seen[s]) continue;
    std::size_t size = 0;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      ++size;
      for (auto w : t.neighbors(u))
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    best = std::max(best, size);
  }
  return best;
}

std::size_t brute_max_degree(const VoterTree& t) {
  std::vector<std::size_t> deg(t.size(), 0);
  for (auto [a, b] : t.edges()) ++deg[a], ++deg[b];
  return *std::max_element(deg.begin(), deg.end());
}

std::size_t log2_ceil(std::size_t x) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < x) ++k;
  return k;
}

// Generated weakly single crossing profile: a random single crossing tree,
// k random nodes kept (repeats allowed) and each duplicated dup times, shuffled.
Profile weakly_sc_instance(std::mt19937_64& rng, std::size_t m, std::size_t k, std::size_t dup) {
  const GenSpec spec{m, uniform(rng, 1, pair_count(m) + 1), Branching::random, 1, 1.0, rng()};
  const auto [nodes, tree] = gen_sc_tree_profile(spec);
  std::vector<std::size_t> keep(k);
  for (auto& i : keep) i = uniform(rng, 0, nodes.size() - 1);
  const auto kept = subsample_nodes(nodes, keep, dup);
  std::vector<Preference> prefs;
  for (const auto& v : kept.voters()) prefs.push_back(v.preference);
  std::shuffle(prefs.begin(), prefs.end(), rng);
  return Profile::from_preferences(std::move(prefs));
}

VoterSequence random_arrival(const Profile& p, std::mt19937_64& rng) {
  auto ids = VoterSequence::of(p).order();
  std::shuffle(ids.begin(), ids.end(), rng);
  return VoterSequence(ids);
}

void exhaustive_m3(Verdict& v) {
  const auto start = std::chrono::steady_clock::now();
  const auto perms = all_permutations(3);
  const std::uint64_t full = (1u << perms.size()) - 1;
  std::vector<bool> has_tree(full + 1, false);
  for (std::uint64_t mask = 1; mask <= full; ++mask) has_tree[mask] = brute_has_sc_tree(subset_of(perms, mask));

  std::size_t profiles = 0, yes = 0;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    ++profiles;
    const auto p = Profile::from_preferences(subset_of(perms, mask));
    bool independent = false;
    for (std::uint64_t super = mask; super <= full; ++super)
      if ((super & mask) == mask && has_tree[super]) independent = true;
    const bool fast = recognize_weakly_sc(p).yes();
    const bool brute = bruteforce_weakly_sc(p);
    yes += fast;
    if (fast != brute || fast != independent)
      v.fail(describe(p) + " recognize=" + std::to_string(fast) + " bruteforce=" + std::to_string(brute) +
             " superset=" + std::to_string(independent));
  }
  const double secs = elapsed_since(start);
  if (profiles != 63) v.fail("enumerated " + std::to_string(profiles) + " profiles");
  if (secs >= kExhaustive3Seconds) v.fail("took " + std::to_string(secs) + "s");
  v.detail << profiles << " profiles, " << yes << " weakly single crossing";
}

void check_tree_instance(Verdict& v, const Profile& p, std::size_t& found) {
  const auto built = build_sc_tree(p);
  const auto brute = bruteforce_sc_tree(p);
  const bool ok = std::holds_alternative<VoterTree>(built);
  if (ok != brute.has_value()) {
    v.fail(describe(p) + " build=" + std::to_string(ok) + " bruteforce=" + std::to_string(brute.has_value()));
    return;
  }
  if (!ok) return;
  ++found;
  const auto& t = std::get<VoterTree>(built);
  std::vector<Preference> nodes;
  for (const auto& node : t.nodes()) nodes.push_back(node.preference);
  std::vector<std::pair<std::size_t, std::size_t>> edges(t.edges().begin(), t.edges().end());
  if (!verify_single_crossing_tree(p, t) || !verify_single_crossing_tree(p, t, VerifyMode::paths) ||
      !brute_paths_single_crossing(nodes, edges))
    v.fail(describe(p) + " built tree does not verify");
}

void tree_oracle(Verdict& v) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t exhaustive = 0, random = 0, found = 0;
  const auto perms = all_permutations(4);
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> enumerate = [&](std::size_t from) {
    if (!pick.empty()) {
      std::vector<Preference> prefs;
      for (auto i : pick) prefs.push_back(perms[i]);
      check_tree_instance(v, Profile::from_preferences(std::move(prefs)), found);
      ++exhaustive;
    }
    if (pick.size() == 4) return;
    for (std::size_t i = from; i < perms.size(); ++i) {
      pick.push_back(i);
      enumerate(i + 1);
      pick.pop_back();
    }
  };
  enumerate(0);

  std::mt19937_64 rng(kSeed);
  for (; random < kTreeRandomInstances; ++random) {
    const std::size_t m = uniform(rng, 2, kTreeMaxCandidates);
    std::size_t factorial = 1;
    for (std::size_t i = 2; i <= m; ++i) factorial *= i;
    const std::size_t n = uniform(rng, 1, std::min(kTreeMaxVoters, factorial));
    Profile p(m);
    switch (random % 3) {
      case 0:
        p = random_distinct_profile(m, n, rng);
        break;
      default: {
        // distinct nodes of a generated tree, and in one case of two a stray extra
        const auto [nodes, tree] = gen_sc_tree_profile({m, pair_count(m) + 1, Branching::random, 1, 1.0, rng()});
        auto prefs = nodes.preferences();
        std::shuffle(prefs.begin(), prefs.end(), rng);
        prefs.erase(prefs.begin() + static_cast<std::ptrdiff_t>(std::min(prefs.size(), n)), prefs.end());
        if (random % 3 == 2) {
          const auto extra = random_preference(m, rng);
          if (std::find(prefs.begin(), prefs.end(), extra) == prefs.end()) {
            if (prefs.size() == kTreeMaxVoters) prefs.pop_back();
            prefs.push_back(extra);
          }
        }
        p = Profile::from_preferences(std::move(prefs));
      }
    }
    check_tree_instance(v, p, found);
  }
  const double secs = elapsed_since(start);
  if (secs >= kTreeOracleSeconds) v.fail("took " + std::to_string(secs) + "s");
  v.detail << exhaustive << " exhaustive (m=4, n<=4) + " << random << " random (m<=8, n<=8), " << found
           << " with a tree";
}

void worked_instance(Verdict& v) {
  const auto input = profile({"bacd", "acbd", "abdc"});
  const auto closed = triad_closure(input);
  if (!std::holds_alternative<ClosureResult>(closed)) return v.fail("closure failed");
  const auto& c = std::get<ClosureResult>(closed);
  if (c.added.size() != 1 || c.added[0].preference != pref("abcd")) return v.fail("closure added the wrong orders");
  const auto majority = brute_majority(input.preferences());
  if (!majority || *majority != pref("abcd")) v.fail("brute tally disagrees");
  const auto fixpoint = brute_fixpoint_closure(input.preferences());
  if (!fixpoint || fixpoint->size() != 4 || !fixpoint->contains(pref("abcd"))) v.fail("brute fixpoint disagrees");

  const auto r = recognize_weakly_sc(input);
  if (!r.yes()) return v.fail("not recognized");
  const auto& t = *r.tree;
  std::size_t center = t.size();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.degree(i) == t.size() - 1) center = i;
  if (t.size() != 4 || center == t.size() || t.node(center).preference != pref("abcd"))
    v.fail("closure tree is not a star centered at abcd");

  if (std::holds_alternative<VoterTree>(build_sc_tree(input))) v.fail("the input itself has a tree");
  if (bruteforce_sc_tree(input) || brute_has_sc_tree(input.preferences())) v.fail("brute force finds a tree on the input");
  v.detail << "adds abcd only; star at abcd; input alone has no tree";
}

void structural_bounds(Verdict& v) {
  std::mt19937_64 rng(kSeed + 1);
  std::size_t worst_closure = 0, worst_degree = 0, centroid_checked = 0;
  double worst_ratio = 0;
  for (std::size_t i = 0; i < kStructuralInstances; ++i) {
    const std::size_t m = uniform(rng, 2, kMaxCandidates);
    const auto p = weakly_sc_instance(rng, m, uniform(rng, 1, 40), uniform(rng, 1, 3));
    const auto r = recognize_weakly_sc(p);
    if (!r.yes()) {
      v.fail("generated instance rejected: " + describe(p));
      continue;
    }
    const std::size_t size = r.closure->closure.size();
    if (size > pair_count(m) + 1) v.fail("closure of " + std::to_string(size) + " at m=" + std::to_string(m));
    worst_closure = std::max(worst_closure, size);
    const auto& t = *r.tree;
    const std::size_t deg = brute_max_degree(t);
    if (t.size() > 1 && deg > m - 1) v.fail("degree " + std::to_string(deg) + " at m=" + std::to_string(m));
    worst_degree = std::max(worst_degree, deg);
    if (t.size() >= 3) {
      ++centroid_checked;
      const std::size_t largest = brute_largest_component(t, centroid_splitter(t));
      if (4 * largest > 3 * t.size())
        v.fail("splitter leaves " + std::to_string(largest) + " of " + std::to_string(t.size()));
      worst_ratio = std::max(worst_ratio, static_cast<double>(largest) / static_cast<double>(t.size()));
    }
  }
  v.detail << kStructuralInstances << " instances; max closure " << worst_closure << ", max degree " << worst_degree
           << ", worst splitter ratio " << worst_ratio << " over " << centroid_checked << " trees";
}

struct ElicitRun {
  Profile hidden;
  ElicitationReport report;
};

std::vector<ElicitRun> elicitation_runs() {
  std::mt19937_64 rng(kSeed + 2);
  std::vector<ElicitRun> runs;
  for (std::size_t i = 0; i < kElicitInstances; ++i) {
    const std::size_t m = uniform(rng, 2, kMaxCandidates);
    const std::size_t dup = uniform(rng, 1, kMaxDuplication);
    const std::size_t k = uniform(rng, 1, kElicitMaxVoters / dup);
    auto hidden = weakly_sc_instance(rng, m, k, dup);
    SimulatedOracle oracle(hidden);
    auto report = elicit_sequential(oracle, random_arrival(hidden, rng));
    runs.push_back({std::move(hidden), std::move(report)});
  }
  return runs;
}

void exactness(Verdict& v, const std::vector<ElicitRun>& runs) {
  std::size_t max_n = 0;
  for (const auto& r : runs) {
    max_n = std::max(max_n, r.hidden.size());
    if (!(r.report.profile == r.hidden)) v.fail("elicited profile differs on " + describe(r.hidden));
  }
  v.detail << runs.size() << " instances, n up to " << max_n;
}

void budgets(Verdict& v, const std::vector<ElicitRun>& runs) {
  double worst_total = 0, worst_search = 0;
  for (const auto& r : runs) {
    const std::size_t m = r.hidden.candidate_count(), n = r.hidden.size();
    for (const auto& rec : r.report.voters) {
      if (rec.search_queries > kSearchPerCandidate * m)
        v.fail("voter search used " + std::to_string(rec.search_queries) + " at m=" + std::to_string(m));
      worst_search = std::max(worst_search, static_cast<double>(rec.search_queries) / static_cast<double>(m));
    }
    const std::size_t total_cap = kTotalLinear * m * n + kTotalSort * std::min(m * m, n) * m * log2_ceil(m);
    if (r.report.total_queries > total_cap)
      v.fail("total " + std::to_string(r.report.total_queries) + " > " + std::to_string(total_cap));
    worst_total = std::max(worst_total, static_cast<double>(r.report.total_queries) / static_cast<double>(total_cap));
    const std::size_t sort_cap = std::min(n, pair_count(m) + 1);
    if (r.report.sorts > sort_cap)
      v.fail("sorts " + std::to_string(r.report.sorts) + " > " + std::to_string(sort_cap));
  }
  v.detail << "worst search/m " << worst_search << ", worst total/cap " << worst_total;
}

void adversary(Verdict& v) {
  for (std::size_t m : {4, 8})
    for (std::size_t n : {10, 50}) {
      AdversarialStarOracle oracle(m, n);
      const auto report = elicit_sequential(oracle, VoterSequence(oracle.voters()));
      const auto verdict = oracle.finalize(report.profile);
      const std::size_t floor = (n - 1) * m / 2;
      if (verdict.fooled) v.fail("fooled at m=" + std::to_string(m) + " n=" + std::to_string(n));
      if (report.total_queries < floor)
        v.fail(std::to_string(report.total_queries) + " < " + std::to_string(floor) + " at m=" + std::to_string(m) +
               " n=" + std::to_string(n));
      v.detail << "m=" << m << ",n=" << n << ": " << report.total_queries << ">=" << floor << "; ";
    }
}

void naive_dominance(Verdict& v) {
  std::mt19937_64 rng(kSeed + 3);
  std::size_t instances = 0, strict = 0;
  std::map<std::size_t, std::size_t> failing_by_m;
  for (std::size_t m = 2; m <= kMaxCandidates; ++m)
    for (std::size_t rep = 0; rep < 20; ++rep) {
      const std::size_t n = m * m + uniform(rng, 0, m * m);
      const auto hidden = weakly_sc_instance(rng, m, n, 1);
      const auto arrival = random_arrival(hidden, rng);
      SimulatedOracle a(hidden), b(hidden);
      const auto seq = elicit_sequential(a, arrival);
      const auto naive = naive_elicit_all(b, arrival);
      ++instances;
      if (seq.total_queries < naive.total_queries) {
        ++strict;
      } else {
        ++failing_by_m[m];
        v.fail("m=" + std::to_string(m) + " n=" + std::to_string(n) + ": " + std::to_string(seq.total_queries) +
               " vs naive " + std::to_string(naive.total_queries));
      }
    }
  v.detail << strict << "/" << instances << " strictly cheaper (m=2.." << kMaxCandidates << ", n in [m^2, 2m^2])";
  for (auto [m, count] : failing_by_m) v.detail << "; not at m=" << m << " x" << count;
}

}  // namespace

int main() {
  criterion("exhaustive-m3-recognition", exhaustive_m3);
  criterion("tree-recognition-oracle", tree_oracle);
  criterion("worked-closure-instance", worked_instance);
  criterion("structural-bounds", structural_bounds);
  const auto runs = elicitation_runs();
  criterion("elicitation-exactness", [&](Verdict& v) { exactness(v, runs); });
  criterion("query-budgets", [&](Verdict& v) { budgets(v, runs); });
  criterion("lower-bound-adversary", adversary);
  criterion("naive-baseline-dominance", naive_dominance);
  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}

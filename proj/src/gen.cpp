#include "weaksc/gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "weaksc/error.hpp"
#include "weaksc/recognize.hpp"

namespace weaksc {
namespace {

constexpr std::size_t kNoiseResampleLimit = 10000;
constexpr std::size_t kGrowthRestartLimit = 1000;

std::size_t draw(std::mt19937_64& rng, std::size_t bound) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

}  // namespace

std::string_view to_string(Branching b) {
  switch (b) {
    case Branching::path: return "path";
    case Branching::star: return "star";
    case Branching::random: return "random";
  }
  return "random";
}

Branching parse_branching(std::string_view s) {
  if (s == "path") return Branching::path;
  if (s == "star") return Branching::star;
  if (s == "random") return Branching::random;
  throw ArgumentError("unknown branching style '" + std::string(s) + "'");
}

namespace {

// nullopt when every node ran out of unused adjacent pairs first.
std::optional<std::pair<Profile, VoterTree>> grow_tree(const GenSpec& spec, std::mt19937_64& rng) {
  const std::size_t m = spec.m;
  std::vector<std::vector<Candidate>> orders{Preference::identity(m).order()};
  std::vector<TreeEdge> edges;
  std::vector<bool> used(pair_count(m), false);

  auto free_positions = [&](std::size_t node) {
    std::vector<std::size_t> out;
    const auto& o = orders[node];
    for (std::size_t k = 0; k + 1 < m; ++k)
      if (!used[pair_index(m, std::min(o[k], o[k + 1]), std::max(o[k], o[k + 1]))]) out.push_back(k);
    return out;
  };

  while (orders.size() < spec.node_count) {
    std::size_t site = 0;
    switch (spec.branching) {
      case Branching::path: site = orders.size() - 1; break;
      case Branching::star: site = 0; break;
      case Branching::random: site = draw(rng, orders.size()); break;
    }
    auto positions = free_positions(site);
    if (positions.empty()) {
      // Fall back to any site that can still grow.
      std::vector<std::size_t> sites;
      for (std::size_t s = 0; s < orders.size(); ++s)
        if (!free_positions(s).empty()) sites.push_back(s);
      if (sites.empty() || spec.branching == Branching::star) return std::nullopt;
      site = sites[draw(rng, sites.size())];
      positions = free_positions(site);
    }
    const std::size_t k = positions[draw(rng, positions.size())];
    auto order = orders[site];
    used[pair_index(m, std::min(order[k], order[k + 1]), std::max(order[k], order[k + 1]))] = true;
    std::swap(order[k], order[k + 1]);
    edges.emplace_back(site, orders.size());
    orders.push_back(std::move(order));
  }

  std::vector<Preference> prefs;
  std::vector<TreeNode> nodes;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    prefs.emplace_back(orders[i]);
    nodes.push_back({static_cast<VoterId>(i), prefs.back()});
  }
  auto profile = Profile::from_preferences(std::move(prefs));
  VoterTree tree(std::move(nodes), std::move(edges));
  if (!verify_single_crossing_tree(profile, tree)) throw InternalError("generated tree is not single crossing");
  return std::pair{std::move(profile), std::move(tree)};
}

}  // namespace

std::pair<Profile, VoterTree> gen_sc_tree_profile(const GenSpec& spec) {
  const std::size_t m = spec.m;
  if (m == 0) throw ArgumentError("generator needs at least one candidate");
  if (spec.node_count == 0) throw ArgumentError("generator needs at least one node");
  if (spec.node_count > pair_count(m) + 1)
    throw GenerationError("node_count " + std::to_string(spec.node_count) + " exceeds m(m-1)/2 + 1");

  std::mt19937_64 rng(spec.seed);
  for (std::size_t attempt = 0; attempt < kGrowthRestartLimit; ++attempt) {
    auto grown = grow_tree(spec, rng);
    if (grown) return std::move(*grown);
    if (spec.branching != Branching::random) break;
  }
  throw GenerationError("no unused adjacent pair left to grow the tree");
}


Profile subsample_nodes(const Profile& p, const std::vector<std::size_t>& keep, std::size_t duplication) {
  if (keep.empty()) throw ArgumentError("subsample needs at least one node");
  if (duplication == 0) throw ArgumentError("duplication factor must be positive");
  Profile out(p.candidate_count());
  VoterId next = 0;
  for (auto i : keep) {
    if (i >= p.size()) throw ArgumentError("subsample node index out of range");
    for (std::size_t d = 0; d < duplication; ++d) out.add(Voter{next++, p[i].preference});
  }
  return out;
}

Profile subsample_weakly_sc(const Profile& p, const VoterTree& t, const GenSpec& spec) {
  if (!verify_single_crossing_tree(p, t)) throw ArgumentError("subsample_weakly_sc: tree is not single crossing");
  if (spec.subsample_fraction >= 1.0) {
    std::vector<std::size_t> all(p.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return subsample_nodes(p, all, spec.duplication);
  }
  std::mt19937_64 rng(spec.seed ^ 0x5bd1e995ULL);
  const auto wanted = static_cast<std::size_t>(std::lround(spec.subsample_fraction * static_cast<double>(p.size())));
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::clamp<std::size_t>(wanted, 1, p.size()));
  std::sort(idx.begin(), idx.end());
  return subsample_nodes(p, idx, spec.duplication);
}

Profile gen_negative(NegativeKind kind, std::size_t m, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ArgumentError("gen_negative: need at least one voter");
  std::mt19937_64 rng(seed);
  if (kind == NegativeKind::condorcet_triple) {
    if (m < 3) throw ArgumentError("condorcet-triple negatives need at least 3 candidates");
    if (n < 3) throw ArgumentError("condorcet-triple negatives need at least 3 voters");
    std::vector<Preference> patterns;
    for (std::size_t shift = 0; shift < 3; ++shift) {
      std::vector<Candidate> order{shift % 3, (shift + 1) % 3, (shift + 2) % 3};
      for (Candidate c = 3; c < m; ++c) order.push_back(c);
      patterns.emplace_back(std::move(order));
    }
    std::vector<Preference> prefs;
    for (std::size_t i = 0; i < n; ++i) prefs.push_back(patterns[i % 3]);
    std::shuffle(prefs.begin() + 3, prefs.end(), rng);
    return Profile::from_preferences(std::move(prefs));
  }

  if (m == 0) throw ArgumentError("gen_negative: need at least one candidate");
  const bool check = m <= 4 && n <= 6;
  for (std::size_t attempt = 0; attempt < kNoiseResampleLimit; ++attempt) {
    std::vector<Preference> prefs;
    for (std::size_t i = 0; i < n; ++i) {
      auto order = Preference::identity(m).order();
      std::shuffle(order.begin(), order.end(), rng);
      prefs.emplace_back(std::move(order));
    }
    auto profile = Profile::from_preferences(std::move(prefs));
    if (!check || !recognize_weakly_sc(profile).yes()) return profile;
  }
  throw GenerationError("could not draw a non-weakly-single-crossing noise profile");
}

}  // namespace weaksc

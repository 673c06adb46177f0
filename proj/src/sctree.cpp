#include "weaksc/sctree.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "weaksc/error.hpp"

namespace weaksc {
namespace {

bool is_spanning_tree(std::size_t n, const std::vector<TreeEdge>& edges) {
  if (n == 0 || edges.size() != n - 1) return false;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : edges) {
    if (a >= n || b >= n || a == b) return false;
    const auto ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

std::vector<std::uint64_t> disagreement_mask(const PairSignature& a, const PairSignature& b) {
  std::vector<std::uint64_t> out(a.words().size());
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = a.words()[w] ^ b.words()[w];
  return out;
}

void check_same_voters(const Profile& p, const VoterTree& t) {
  if (p.size() != t.size()) throw ArgumentError("tree and profile have different voter sets");
  for (const auto& node : t.nodes()) {
    if (!p.contains_voter(node.voter))
      throw ArgumentError("tree voter " + std::to_string(node.voter) + " is not in the profile");
    if (p.preference_of(node.voter) != node.preference)
      throw ArgumentError("tree node for voter " + std::to_string(node.voter) + " carries a different preference");
  }
}

// Node sequence of the unique u..v path.
std::vector<std::size_t> tree_path(const VoterTree& t, std::size_t u, std::size_t v) {
  std::vector<std::size_t> parent(t.size(), t.size());
  std::vector<std::size_t> stack{u};
  parent[u] = u;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    for (auto y : t.neighbors(x)) {
      if (parent[y] != t.size()) continue;
      parent[y] = x;
      stack.push_back(y);
    }
  }
  std::vector<std::size_t> path{v};
  while (path.back() != u) path.push_back(parent[path.back()]);
  return path;
}

}  // namespace

VoterTree::VoterTree(std::vector<TreeNode> nodes, std::vector<TreeEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  if (nodes_.empty()) throw ArgumentError("a voter tree needs at least one node");
  if (!is_spanning_tree(nodes_.size(), edges_)) throw ArgumentError("edges do not form a spanning tree");
  std::vector<VoterId> ids;
  for (const auto& n : nodes_) ids.push_back(n.voter);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw ArgumentError("voter tree repeats a voter id");

  for (auto& [a, b] : edges_)
    if (a > b) std::swap(a, b);
  std::sort(edges_.begin(), edges_.end());
  adjacency_.resize(nodes_.size());
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::string_view to_string(NoTree::Reason reason) {
  switch (reason) {
    case NoTree::Reason::wrong_split_count: return "wrong-split-count";
    case NoTree::Reason::not_a_tree: return "not-a-tree";
    case NoTree::Reason::verification_failed: return "verification-failed";
  }
  return "unknown";
}

bool verify_single_crossing_tree(const Profile& p, const VoterTree& t, VerifyMode mode) {
  check_same_voters(p, t);
  if (mode == VerifyMode::cut) {
    std::vector<std::uint64_t> crossed;
    for (auto [a, b] : t.edges()) {
      const auto mask = disagreement_mask(PairSignature(t.node(a).preference), PairSignature(t.node(b).preference));
      crossed.resize(mask.size(), 0);
      for (std::size_t w = 0; w < mask.size(); ++w) {
        if (crossed[w] & mask[w]) return false;
        crossed[w] |= mask[w];
      }
    }
    return true;
  }

  for (std::size_t u = 0; u < t.size(); ++u) {
    for (std::size_t v = u + 1; v < t.size(); ++v) {
      Profile along(p.candidate_count());
      std::vector<VoterId> seq;
      for (auto x : tree_path(t, u, v)) {
        along.add(Voter{t.node(x).voter, t.node(x).preference});
        seq.push_back(t.node(x).voter);
      }
      if (!is_single_crossing_sequence(along, VoterSequence(std::move(seq)))) return false;
    }
  }
  return true;
}

std::vector<Split> candidate_pair_splits(const Profile& p) {
  const std::size_t n = p.size();
  const std::size_t m = p.candidate_count();
  std::vector<Split> splits;
  std::map<std::vector<bool>, std::size_t> seen;
  for (Candidate x = 0; x < m; ++x) {
    for (Candidate y = x + 1; y < m; ++y) {
      if (n == 0) continue;
      const bool anchor = p[0].preference.above(x, y);
      std::vector<bool> with_first(n);
      bool nontrivial = false;
      for (std::size_t i = 0; i < n; ++i) {
        with_first[i] = p[i].preference.above(x, y) == anchor;
        nontrivial = nontrivial || !with_first[i];
      }
      if (!nontrivial) continue;
      auto [it, fresh] = seen.try_emplace(with_first, splits.size());
      if (fresh) {
        Split s;
        for (std::size_t i = 0; i < n; ++i) (with_first[i] ? s.side_a : s.side_b).push_back(i);
        splits.push_back(std::move(s));
      }
      splits[it->second].pairs.emplace_back(x, y);
    }
  }
  return splits;
}

TreeOutcome build_sc_tree(const Profile& p) {
  if (p.empty()) throw ArgumentError("build_sc_tree: empty profile");
  if (!p.has_distinct_preferences()) throw ArgumentError("build_sc_tree: preferences must be distinct");
  const std::size_t n = p.size();

  std::vector<TreeNode> nodes;
  for (const auto& v : p.voters()) nodes.push_back({v.id, v.preference});
  if (n == 1) return VoterTree(std::move(nodes), {});

  // With distinct preferences every edge of a single crossing tree realizes a
  // different bipartition, and every bipartition is realized by one edge.
  const auto splits = candidate_pair_splits(p);
  if (splits.size() != n - 1)
    return NoTree{NoTree::Reason::wrong_split_count,
                  std::to_string(splits.size()) + " distinct bipartitions for " + std::to_string(n) + " voters"};

  std::vector<std::vector<bool>> on_a(splits.size(), std::vector<bool>(n, false));
  for (std::size_t s = 0; s < splits.size(); ++s)
    for (auto i : splits[s].side_a) on_a[s][i] = true;

  std::vector<TreeEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t separating = 0;
      for (const auto& side : on_a) separating += side[i] != side[j] ? 1 : 0;
      if (separating == 1) edges.emplace_back(i, j);
    }
  }
  if (!is_spanning_tree(n, edges))
    return NoTree{NoTree::Reason::not_a_tree, std::to_string(edges.size()) + " candidate edges do not form a tree"};

  VoterTree tree(std::move(nodes), std::move(edges));
  if (!verify_single_crossing_tree(p, tree))
    return NoTree{NoTree::Reason::verification_failed, "a candidate pair crosses more than one edge"};
  return tree;
}

VoterTree expand_duplicates(const VoterTree& t, const std::vector<std::vector<VoterId>>& groups) {
  if (groups.size() != t.size()) throw ArgumentError("expand_duplicates: one group per tree node required");
  auto nodes = t.nodes();
  auto edges = t.edges();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty() || groups[i].front() != t.node(i).voter)
      throw ArgumentError("expand_duplicates: group " + std::to_string(i) + " does not start with its node's voter");
    for (std::size_t k = 1; k < groups[i].size(); ++k) {
      edges.emplace_back(i, nodes.size());
      nodes.push_back({groups[i][k], t.node(i).preference});
    }
  }
  return VoterTree(std::move(nodes), std::move(edges));
}

std::vector<std::size_t> component_from(const VoterTree& t, const std::vector<bool>& alive, std::size_t start,
                                        std::size_t blocked) {
  std::vector<bool> seen(t.size(), false);
  seen[blocked] = true;
  seen[start] = true;
  std::vector<std::size_t> out{start};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (auto y : t.neighbors(out[head])) {
      if (!alive[y] || seen[y]) continue;
      seen[y] = true;
      out.push_back(y);
    }
  }
  return out;
}

std::size_t centroid_of(const VoterTree& t, const std::vector<bool>& alive) {
  const std::size_t n = t.size();
  std::vector<std::size_t> order;
  std::vector<std::size_t> parent(n, n);
  std::size_t root = n;
  for (std::size_t i = 0; i < n && root == n; ++i)
    if (alive[i]) root = i;
  if (root == n) throw ArgumentError("centroid_of: no alive nodes");

  parent[root] = root;
  order.push_back(root);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (auto y : t.neighbors(order[head])) {
      if (!alive[y] || parent[y] != n) continue;
      parent[y] = order[head];
      order.push_back(y);
    }
  }
  const std::size_t total = order.size();
  std::vector<std::size_t> below(n, 1);
  std::vector<std::size_t> heaviest(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto x = *it;
    if (x == root) continue;
    below[parent[x]] += below[x];
    heaviest[parent[x]] = std::max(heaviest[parent[x]], below[x]);
  }
  std::size_t best = n;
  for (auto x : order) {
    const std::size_t largest = std::max(heaviest[x], total - below[x]);
    if (largest <= total / 2 && x < best) best = x;
  }
  return best;
}

std::size_t centroid_splitter(const VoterTree& t) {
  if (t.size() < 3) throw ArgumentError("centroid_splitter: tree needs at least 3 nodes");
  return centroid_of(t, std::vector<bool>(t.size(), true));
}

std::size_t largest_component_without(const VoterTree& t, std::size_t r) {
  const std::vector<bool> alive(t.size(), true);
  std::size_t largest = 0;
  for (auto u : t.neighbors(r)) largest = std::max(largest, component_from(t, alive, u, r).size());
  return largest;
}

std::size_t max_degree(const VoterTree& t) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < t.size(); ++i) d = std::max(d, t.degree(i));
  return d;
}

std::optional<VoterTree> bruteforce_sc_tree(const Profile& p) {
  const std::size_t n = p.size();
  if (n == 0) throw ArgumentError("bruteforce_sc_tree: empty profile");
  if (n > kBruteforceTreeMaxVoters) throw ArgumentError("bruteforce_sc_tree: refusing more than 8 voters");

  std::vector<TreeNode> nodes;
  std::vector<PairSignature> sigs;
  for (const auto& v : p.voters()) {
    nodes.push_back({v.id, v.preference});
    sigs.emplace_back(v.preference);
  }
  if (n == 1) return VoterTree(std::move(nodes), {});

  const std::size_t words = sigs.front().words().size();
  std::vector<std::vector<std::uint64_t>> mask(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mask[i * n + j] = disagreement_mask(sigs[i], sigs[j]);

  std::vector<std::size_t> code(n - 2, 0);
  std::vector<std::size_t> degree(n);
  std::vector<TreeEdge> edges;
  std::vector<std::uint64_t> crossed(words);
  while (true) {
    // Decode the Prüfer sequence.
    std::fill(degree.begin(), degree.end(), 1);
    for (auto c : code) ++degree[c];
    edges.clear();
    for (auto c : code) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      edges.emplace_back(leaf, c);
      --degree[leaf];
      --degree[c];
    }
    std::size_t a = n, b = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] != 1) continue;
      (a == n ? a : b) = i;
    }
    edges.emplace_back(a, b);

    std::fill(crossed.begin(), crossed.end(), 0);
    bool ok = true;
    for (auto [u, v] : edges) {
      const auto& mk = mask[u * n + v];
      for (std::size_t w = 0; w < words && ok; ++w) {
        ok = (crossed[w] & mk[w]) == 0;
        crossed[w] |= mk[w];
      }
      if (!ok) break;
    }
    if (ok) {
      VoterTree tree(nodes, edges);
      if (!verify_single_crossing_tree(p, tree)) throw InternalError("bruteforce_sc_tree: mask check disagrees with verifier");
      return tree;
    }

    // Next sequence in lexicographic order.
    std::size_t pos = code.size();
    while (pos > 0 && code[pos - 1] == n - 1) code[--pos] = 0;
    if (pos == 0) return std::nullopt;
    ++code[pos - 1];
  }
}

}  // namespace weaksc

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "weaksc/prefs.hpp"

namespace weaksc {

struct TreeNode {
  VoterId voter = 0;
  Preference preference;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

using TreeEdge = std::pair<std::size_t, std::size_t>;

/// An unrooted tree whose nodes are voters. Immutable once built.
class VoterTree {
 public:
  /// Throws ArgumentError unless the edges form a spanning tree on the nodes
  /// and voter ids are distinct.
  VoterTree(std::vector<TreeNode> nodes, std::vector<TreeEdge> edges);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  /// Neighbors of node i in ascending index order.
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }
  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }

  friend bool operator==(const VoterTree& a, const VoterTree& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<TreeNode> nodes_;
  std::vector<TreeEdge> edges_;  // normalized (lo, hi), sorted
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// A voter bipartition induced by candidate pairs. Sides hold profile indices;
/// side_a always contains index 0.
struct Split {
  std::vector<std::size_t> side_a;
  std::vector<std::size_t> side_b;
  std::vector<CandidatePair> pairs;
};

struct NoTree {
  enum class Reason { wrong_split_count, not_a_tree, verification_failed };
  Reason reason;
  std::string detail;
};

std::string_view to_string(NoTree::Reason reason);

using TreeOutcome = std::variant<VoterTree, NoTree>;

enum class VerifyMode {
  /// Each candidate pair's stance changes across at most one edge.
  cut,
  /// Every node-to-node path, read as a voter sequence, is single crossing.
  paths,
};

/// Throws ArgumentError if t's voters or their preferences differ from p's.
bool verify_single_crossing_tree(const Profile& p, const VoterTree& t, VerifyMode mode = VerifyMode::cut);

/// Nontrivial voter bipartitions, one per distinct bipartition, in order of the
/// lexicographically first inducing pair.
std::vector<Split> candidate_pair_splits(const Profile& p);

/// Single crossing tree for a nonempty profile of distinct preferences; node i
/// is voter p[i]. Throws ArgumentError on empty or duplicated input.
TreeOutcome build_sc_tree(const Profile& p);

/// Attaches the extra voters of each group as pendant leaves of that group's
/// representative node. groups[i] must start with node i's voter id.
VoterTree expand_duplicates(const VoterTree& t, const std::vector<std::vector<VoterId>>& groups);

/// Centroid: every component left by its removal has at most floor(|t|/2)
/// nodes; the smaller index wins a tie. Requires |t| >= 3.
std::size_t centroid_splitter(const VoterTree& t);

/// Centroid of the connected node subset `alive` (any size >= 1).
std::size_t centroid_of(const VoterTree& t, const std::vector<bool>& alive);

/// Alive nodes reachable from `start` without entering `blocked`.
std::vector<std::size_t> component_from(const VoterTree& t, const std::vector<bool>& alive, std::size_t start,
                                        std::size_t blocked);

std::size_t max_degree(const VoterTree& t);

/// Largest component left after removing node r.
std::size_t largest_component_without(const VoterTree& t, std::size_t r);

/// First labeled tree in Prüfer order that is single crossing for p.
/// Enumerates n^(n-2) trees; refuses (ArgumentError) when n > 8.
std::optional<VoterTree> bruteforce_sc_tree(const Profile& p);

inline constexpr std::size_t kBruteforceTreeMaxVoters = 8;

}  // namespace weaksc

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "weaksc/prefs.hpp"
#include "weaksc/sctree.hpp"

namespace weaksc {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Branching { path, star, random };

struct GenSpec {
  std::size_t m = 3;
  /// At most m(m-1)/2 + 1.
  std::size_t node_count = 1;
  Branching branching = Branching::random;
  /// Copies of each kept preference.
  std::size_t duplication = 1;
  /// Fraction of tree nodes kept by subsample_weakly_sc (at least one is kept).
  double subsample_fraction = 1.0;
  std::uint64_t seed = 0;
};

std::string_view to_string(Branching b);
Branching parse_branching(std::string_view s);

/// Grows a tree from the identity order; each new edge swaps one adjacent pair
/// of the parent whose candidate pair no other edge has swapped. Voter ids and
/// node indices are 0..node_count-1.
std::pair<Profile, VoterTree> gen_sc_tree_profile(const GenSpec& spec);

/// Keeps a random subset of the tree's nodes, then duplicates each kept
/// preference spec.duplication times under fresh voter ids 0..n-1.
Profile subsample_weakly_sc(const Profile& p, const VoterTree& t, const GenSpec& spec);

/// Deterministic variant: keeps exactly the given node indices.
Profile subsample_nodes(const Profile& p, const std::vector<std::size_t>& keep, std::size_t duplication);

enum class NegativeKind { condorcet_triple, random_noise };

/// condorcet_triple: candidates 0,1,2 rotate through a cycle on top, the rest
/// follow in index order; voters cycle through the three patterns. random_noise:
/// i.i.d. uniform orders, resampled until rejected by the recognizer when
/// m <= 4 and n <= 6.
Profile gen_negative(NegativeKind kind, std::size_t m, std::size_t n, std::uint64_t seed);

}  // namespace weaksc

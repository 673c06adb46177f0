#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "weaksc/oracle.hpp"
#include "weaksc/prefs.hpp"
#include "weaksc/recognize.hpp"
#include "weaksc/sctree.hpp"

namespace weaksc {

/// ceil(log2(x)) for x >= 1; 0 for x <= 1.
std::size_t ceil_log2(std::size_t x);

/// Worst-case comparisons of elicit_full: m * ceil(log2 m).
std::size_t sort_query_bound(std::size_t m);

/// Total-query budget for sequential elicitation of n voters over m candidates:
/// 4mn + 8 min(m^2, n) m ceil(log2 m).
std::size_t sequential_query_budget(std::size_t m, std::size_t n);

/// Per-voter budget for one tree search: 10m.
std::size_t search_query_budget(std::size_t m);

/// Sorts the voter's candidates by merge sort over oracle comparisons.
Preference elicit_full(QueryOracle& o, VoterId voter);

/// Asks the m-1 consecutive pairs of `candidate`, stopping at the first
/// disagreement. Agreement on all of them forces equality by transitivity.
bool verify_equals(QueryOracle& o, VoterId voter, const Preference& candidate);

/// Locates the voter's preference among the nodes of a single crossing tree
/// by repeated centroid splitting, then confirms it with verify_equals.
/// Returns nullopt iff the voter's preference is not in the tree.
///
/// Throws ArgumentError unless `closure` has distinct preferences and `t` is a
/// single crossing tree for it.
std::optional<Preference> search_in_tree(QueryOracle& o, VoterId voter, const Profile& closure, const VoterTree& t);

/// The hidden profile is not weakly single crossing on trees.
class DomainViolation : public std::runtime_error {
 public:
  explicit DomainViolation(Certificate certificate);
  const Certificate& certificate() const { return certificate_; }

 private:
  Certificate certificate_;
};

struct VoterRecord {
  VoterId voter = 0;
  Preference preference;
  /// Distinct queries charged to this voter.
  std::size_t queries = 0;
  /// Of those, queries spent in the tree search (0 when no search ran).
  std::size_t search_queries = 0;
  bool searched = false;
  /// elicit_full ran for this voter.
  bool sorted = false;
};

struct ElicitationReport {
  Profile profile;
  std::vector<VoterRecord> voters;  // arrival order
  std::size_t total_queries = 0;
  std::size_t sorts = 0;
};

/// Sequential elicitation state: voters arrive one at a time and each is
/// released after elicit_next(). Keeps the distinct preferences seen so far
/// and the closure tree built from them, rebuilt only when that set grows.
class ElicitationSession {
 public:
  explicit ElicitationSession(QueryOracle& oracle);

  /// Elicits one arriving voter. Throws ArgumentError for a voter already
  /// released, DomainViolation as soon as the seen preferences leave the
  /// domain (the voter is still recorded).
  const VoterRecord& elicit_next(VoterId voter);

  /// Checks the final seen set against the domain without any queries.
  void check_domain() const;

  const std::vector<VoterRecord>& records() const { return records_; }
  const std::vector<Preference>& seen() const { return seen_; }
  std::size_t query_count() const { return counter_.query_count(); }
  std::size_t sort_count() const;

  /// Elicited voters, in the oracle's voter order.
  Profile profile() const;
  ElicitationReport report() const;

 private:
  struct ClosureTree {
    Profile closure;
    VoterTree tree;
  };
  const ClosureTree& closure_tree();

  QueryOracle& source_;
  CountingMemoOracle counter_;
  std::vector<Preference> seen_;
  std::vector<VoterRecord> records_;
  std::unordered_set<VoterId> released_;
  std::optional<ClosureTree> cache_;
  std::size_t cache_size_ = 0;
};

/// Elicits every voter of `arrival` in order, then checks the domain.
ElicitationReport elicit_sequential(QueryOracle& o, const VoterSequence& arrival);

/// Baseline: elicit_full for every voter of `voters`.
ElicitationReport naive_elicit_all(QueryOracle& o, const VoterSequence& voters);
ElicitationReport naive_elicit_all(QueryOracle& o);

}  // namespace weaksc

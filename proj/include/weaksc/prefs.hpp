#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace weaksc {

using Candidate = std::size_t;
using VoterId = std::int64_t;

/// Unordered candidate pair, stored with first < second.
struct CandidatePair {
  Candidate first = 0;
  Candidate second = 0;

  CandidatePair() = default;
  CandidatePair(Candidate x, Candidate y);

  auto operator<=>(const CandidatePair&) const = default;
};

/// Number of unordered pairs over m candidates.
constexpr std::size_t pair_count(std::size_t m) { return m * (m - (m > 0 ? 1 : 0)) / 2; }

/// Position of {x, y} (x < y) in the lexicographic enumeration of pairs.
std::size_t pair_index(std::size_t m, Candidate x, Candidate y);

/// A strict linear order over candidates 0..m-1, most preferred first.
///
/// Both the order and its inverse (rank) are kept so that a pairwise
/// comparison costs two array reads.
class Preference {
 public:
  /// Throws ArgumentError unless `order` is a permutation of 0..m-1 with m >= 1.
  explicit Preference(std::vector<Candidate> order);

  static Preference identity(std::size_t m);

  std::size_t size() const { return order_.size(); }
  const std::vector<Candidate>& order() const { return order_; }
  std::size_t rank(Candidate c) const { return rank_.at(c); }

  /// Unchecked comparison: true iff x is ranked above y.
  bool above(Candidate x, Candidate y) const { return rank_[x] < rank_[y]; }

  friend bool operator==(const Preference& a, const Preference& b) { return a.order_ == b.order_; }
  friend auto operator<=>(const Preference& a, const Preference& b) { return a.order_ <=> b.order_; }

 private:
  std::vector<Candidate> order_;
  std::vector<std::size_t> rank_;
};

/// x ≻ y in p. Throws ArgumentError when x == y or either is out of range.
bool prefers(const Preference& p, Candidate x, Candidate y);

/// Pairs ordered differently by p and q, sorted.
std::vector<CandidatePair> disagreement_pairs(const Preference& p, const Preference& q);

struct Voter {
  VoterId id = 0;
  Preference preference;

  friend bool operator==(const Voter&, const Voter&) = default;
};

/// An ordered collection of voters over a common candidate count.
///
/// operator== compares voter-by-voter (ids and order). same_multiset()
/// compares the multisets of preferences and ignores ids and order.
class Profile {
 public:
  /// Empty profile over m candidates.
  explicit Profile(std::size_t m);
  Profile(std::size_t m, std::vector<Voter> voters);

  /// Voter ids 0..n-1 in sequence order. `prefs` must be nonempty.
  static Profile from_preferences(std::vector<Preference> prefs);

  std::size_t candidate_count() const { return m_; }
  std::size_t size() const { return voters_.size(); }
  bool empty() const { return voters_.empty(); }
  const std::vector<Voter>& voters() const { return voters_; }
  const Voter& operator[](std::size_t i) const { return voters_[i]; }

  bool contains_voter(VoterId id) const;
  std::size_t index_of(VoterId id) const;
  const Preference& preference_of(VoterId id) const { return voters_[index_of(id)].preference; }

  std::vector<Preference> preferences() const;
  /// Distinct preferences in order of first occurrence.
  std::vector<Preference> distinct_preferences() const;
  bool has_distinct_preferences() const;

  void add(Voter v);

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  std::size_t m_;
  std::vector<Voter> voters_;
};

bool same_multiset(const Profile& a, const Profile& b);

/// A permutation of a profile's voter ids. Ids must be distinct.
class VoterSequence {
 public:
  VoterSequence() = default;
  explicit VoterSequence(std::vector<VoterId> order);

  /// Voters in profile order.
  static VoterSequence of(const Profile& p);

  const std::vector<VoterId>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }
  VoterSequence reversed() const;

  /// True iff the sequence contains exactly p's voter ids.
  bool covers(const Profile& p) const;

 private:
  std::vector<VoterId> order_;
};

enum class PairwiseOutcome : std::int8_t { second_wins = -1, tie = 0, first_wins = 1 };

/// Pairwise majority outcomes for every ordered candidate pair.
class MajorityRelation {
 public:
  MajorityRelation(std::size_t m, std::vector<PairwiseOutcome> outcomes);

  std::size_t candidate_count() const { return m_; }
  /// Outcome of x against y. outcome(x, y) is the negation of outcome(y, x).
  PairwiseOutcome outcome(Candidate x, Candidate y) const;
  bool beats(Candidate x, Candidate y) const { return outcome(x, y) == PairwiseOutcome::first_wins; }

  friend bool operator==(const MajorityRelation&, const MajorityRelation&) = default;

 private:
  std::size_t m_;
  // one entry per pair in pair_index() order, from the smaller candidate's view
  std::vector<PairwiseOutcome> outcomes_;
};

/// Strict majority per pair; duplicates count with multiplicity.
MajorityRelation majority_relation(std::span<const Preference> prefs);

/// The linear order equal to r, or nullopt when r has a tie or a cycle.
std::optional<Preference> as_linear_order(const MajorityRelation& r);

/// True iff along s, the voters preferring x over y are contiguous for every pair.
bool is_single_crossing_sequence(const Profile& p, const VoterSequence& s);

struct Dedup {
  /// First occurrence of each preference, keeping its voter id.
  Profile distinct;
  /// groups[i] = ids of all voters holding distinct[i], in profile order.
  std::vector<std::vector<VoterId>> groups;
};

Dedup dedupe(const Profile& p);

/// Packed "x above y" bits over all pairs x < y, in pair_index() order.
///
/// The bitwise majority of three signatures is the signature of the majority
/// relation of those three preferences, which makes triple scans cheap.
class PairSignature {
 public:
  PairSignature() = default;
  explicit PairSignature(const Preference& p);

  static PairSignature majority_of(const PairSignature& a, const PairSignature& b,
                                   const PairSignature& c);

  bool test(std::size_t pair) const { return (words_[pair / 64] >> (pair % 64)) & 1U; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const PairSignature&, const PairSignature&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

/// Linear order with signature s over m candidates, or nullopt if s is cyclic.
std::optional<Preference> linear_order_from_signature(std::size_t m, const PairSignature& s);

struct PairSignatureHash {
  std::size_t operator()(const PairSignature& s) const noexcept;
};

struct PreferenceHash {
  std::size_t operator()(const Preference& p) const noexcept;
};

}  // namespace weaksc

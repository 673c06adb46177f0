#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "weaksc/prefs.hpp"
#include "weaksc/sctree.hpp"

namespace weaksc {

/// The only way to learn a hidden preference: "does `voter` prefer x over y?"
///
/// Implementations must answer consistently per (voter, unordered pair) and
/// throw ArgumentError for unknown voters or bad pairs.
class QueryOracle {
 public:
  virtual ~QueryOracle() = default;

  virtual std::size_t candidate_count() const = 0;
  virtual std::vector<VoterId> voters() const = 0;
  virtual bool answer(VoterId voter, Candidate x, Candidate y) = 0;
};

/// Answers from a known profile.
class SimulatedOracle final : public QueryOracle {
 public:
  explicit SimulatedOracle(Profile hidden);

  std::size_t candidate_count() const override { return hidden_.candidate_count(); }
  std::vector<VoterId> voters() const override;
  bool answer(VoterId voter, Candidate x, Candidate y) override;

  const Profile& hidden() const { return hidden_; }

 private:
  Profile hidden_;
  std::unordered_map<VoterId, std::size_t> index_;
};

/// Memoizes an inner oracle and counts distinct (voter, unordered pair) queries.
/// Mirrored and repeated queries are answered from memory and not counted.
/// Single owner; not thread-safe.
class CountingMemoOracle final : public QueryOracle {
 public:
  explicit CountingMemoOracle(QueryOracle& inner) : inner_(inner) {}

  std::size_t candidate_count() const override { return inner_.candidate_count(); }
  std::vector<VoterId> voters() const override { return inner_.voters(); }
  bool answer(VoterId voter, Candidate x, Candidate y) override;

  std::size_t query_count() const { return memo_.size(); }
  std::size_t query_count(VoterId voter) const;
  bool asked(VoterId voter, Candidate x, Candidate y) const;

 private:
  QueryOracle& inner_;
  // key (voter, low, high) -> low is preferred over high
  std::map<std::tuple<VoterId, Candidate, Candidate>, bool> memo_;
  std::unordered_map<VoterId, std::size_t> per_voter_;
};

/// Star-tree adversary for the mn/2 lower bound.
///
/// Voter 0 is the center, voters 1..n-1 the leaves. Every query is answered by
/// the baseline c0 > c1 > ... > c(m-1). At finalize the adversary picks the
/// first leaf and candidate pair {c(2k), c(2k+1)} the elicitor never compared
/// for that leaf and commits whichever order contradicts the elicitor's claim;
/// everyone else keeps the baseline.
class AdversarialStarOracle final : public QueryOracle {
 public:
  struct Verdict {
    Profile actual;
    bool fooled = false;
    /// (leaf voter, k) chosen for the contradiction, if any pair was left uncompared.
    std::optional<std::pair<VoterId, std::size_t>> exploited;
  };

  /// Throws ArgumentError when m is odd or zero, or n == 0.
  AdversarialStarOracle(std::size_t m, std::size_t n);

  std::size_t candidate_count() const override { return m_; }
  std::vector<VoterId> voters() const override;
  bool answer(VoterId voter, Candidate x, Candidate y) override;

  /// The known star structure (all nodes carry the baseline).
  VoterTree star() const;
  const Preference& baseline() const { return baseline_; }

  /// Commit the hidden profile against the elicitor's claimed profile.
  /// Callable once; afterwards answers follow the committed profile.
  Verdict finalize(const Profile& claimed);

 private:
  std::size_t m_;
  std::size_t n_;
  Preference baseline_;
  std::set<std::pair<VoterId, std::size_t>> compared_;  // (voter, k) for pair {c(2k), c(2k+1)}
  std::optional<Profile> finalized_;
};

/// Rendezvous between an engine thread that asks questions synchronously and
/// a responder (human, over the network) that answers them asynchronously.
///
/// At most one question is outstanding. answer() blocks the engine thread until
/// submit() delivers the reply or close() cancels the session.
class SessionOracle final : public QueryOracle {
 public:
  struct Question {
    VoterId voter;
    Candidate x;
    Candidate y;
    /// 0 for the first question, incremented per question.
    std::uint64_t sequence;
  };

  /// Thrown from answer() on the engine thread once the session is closed.
  class Closed : public std::runtime_error {
   public:
    Closed() : std::runtime_error("session closed") {}
  };

  SessionOracle(std::size_t m, std::vector<VoterId> voters);

  std::size_t candidate_count() const override { return m_; }
  std::vector<VoterId> voters() const override { return voters_; }
  bool answer(VoterId voter, Candidate x, Candidate y) override;

  /// Engine side: no further questions will be asked.
  void finish();

  /// Blocks until a question is pending or the engine has finished.
  std::optional<Question> await_question();
  std::optional<Question> pending() const;
  bool finished() const;
  std::uint64_t answered() const;

  /// Delivers the reply to question `sequence`. Returns false, leaving the
  /// state unchanged, if that is not the pending question.
  bool submit(std::uint64_t sequence, bool prefers_x);

  /// Cancels the session; a blocked or later answer() throws Closed.
  void close();

 private:
  std::size_t m_;
  std::vector<VoterId> voters_;
  mutable std::mutex mutex_;
  std::condition_variable changed_;
  std::optional<Question> pending_;
  std::optional<bool> reply_;
  std::uint64_t next_sequence_ = 0;
  bool finished_ = false;
  bool closed_ = false;
};

}  // namespace weaksc

#include "weaksc/oracle.hpp"

#include <algorithm>
#include <string>

#include "weaksc/error.hpp"

namespace weaksc {
namespace {

void check_pair(std::size_t m, Candidate x, Candidate y) {
  if (x == y) throw ArgumentError("query needs two distinct candidates");
  if (x >= m || y >= m) throw ArgumentError("query candidate out of range");
}

}  // namespace

SimulatedOracle::SimulatedOracle(Profile hidden) : hidden_(std::move(hidden)) {
  for (std::size_t i = 0; i < hidden_.size(); ++i) index_.emplace(hidden_[i].id, i);
}

std::vector<VoterId> SimulatedOracle::voters() const { return VoterSequence::of(hidden_).order(); }

bool SimulatedOracle::answer(VoterId voter, Candidate x, Candidate y) {
  check_pair(candidate_count(), x, y);
  const auto it = index_.find(voter);
  if (it == index_.end()) throw ArgumentError("unknown voter " + std::to_string(voter));
  return hidden_[it->second].preference.above(x, y);
}

bool CountingMemoOracle::answer(VoterId voter, Candidate x, Candidate y) {
  check_pair(candidate_count(), x, y);
  const auto key = std::make_tuple(voter, std::min(x, y), std::max(x, y));
  if (const auto it = memo_.find(key); it != memo_.end()) return x < y ? it->second : !it->second;

  const bool x_first = inner_.answer(voter, x, y);
  memo_.emplace(key, x < y ? x_first : !x_first);
  ++per_voter_[voter];
  return x_first;
}

std::size_t CountingMemoOracle::query_count(VoterId voter) const {
  const auto it = per_voter_.find(voter);
  return it == per_voter_.end() ? 0 : it->second;
}

bool CountingMemoOracle::asked(VoterId voter, Candidate x, Candidate y) const {
  return memo_.contains(std::make_tuple(voter, std::min(x, y), std::max(x, y)));
}

AdversarialStarOracle::AdversarialStarOracle(std::size_t m, std::size_t n)
    : m_(m), n_(n), baseline_(Preference::identity(m == 0 ? 1 : m)) {
  if (m == 0 || m % 2 != 0) throw ArgumentError("adversarial star oracle needs an even number of candidates");
  if (n == 0) throw ArgumentError("adversarial star oracle needs at least one voter");
}

std::vector<VoterId> AdversarialStarOracle::voters() const {
  std::vector<VoterId> ids(n_);
  for (std::size_t i = 0; i < n_; ++i) ids[i] = static_cast<VoterId>(i);
  return ids;
}

bool AdversarialStarOracle::answer(VoterId voter, Candidate x, Candidate y) {
  check_pair(m_, x, y);
  if (voter < 0 || static_cast<std::size_t>(voter) >= n_) throw ArgumentError("unknown voter " + std::to_string(voter));
  if (finalized_) return finalized_->preference_of(voter).above(x, y);
  const auto lo = std::min(x, y), hi = std::max(x, y);
  if (lo % 2 == 0 && hi == lo + 1) compared_.emplace(voter, lo / 2);
  return baseline_.above(x, y);
}

VoterTree AdversarialStarOracle::star() const {
  std::vector<TreeNode> nodes;
  std::vector<TreeEdge> edges;
  for (std::size_t i = 0; i < n_; ++i) {
    nodes.push_back({static_cast<VoterId>(i), baseline_});
    if (i > 0) edges.emplace_back(0, i);
  }
  return VoterTree(std::move(nodes), std::move(edges));
}

AdversarialStarOracle::Verdict AdversarialStarOracle::finalize(const Profile& claimed) {
  if (finalized_) throw ArgumentError("adversary already finalized");
  if (claimed.candidate_count() != m_ || claimed.size() != n_)
    throw ArgumentError("claimed profile does not match the adversary's dimensions");
  for (std::size_t i = 0; i < n_; ++i)
    if (!claimed.contains_voter(static_cast<VoterId>(i)))
      throw ArgumentError("claimed profile is missing voter " + std::to_string(i));

  Verdict verdict{Profile(m_), false, std::nullopt};
  for (std::size_t leaf = 1; leaf < n_ && !verdict.exploited; ++leaf)
    for (std::size_t k = 0; k < m_ / 2 && !verdict.exploited; ++k)
      if (!compared_.contains({static_cast<VoterId>(leaf), k})) verdict.exploited.emplace(leaf, k);

  for (std::size_t i = 0; i < n_; ++i) {
    const auto id = static_cast<VoterId>(i);
    Preference pref = baseline_;
    if (verdict.exploited && verdict.exploited->first == id) {
      const Candidate hi = 2 * verdict.exploited->second, lo = hi + 1;
      if (claimed.preference_of(id).above(hi, lo)) {
        auto order = baseline_.order();
        std::swap(order[hi], order[lo]);
        pref = Preference(std::move(order));
      }
    }
    verdict.actual.add(Voter{id, std::move(pref)});
  }

  for (std::size_t i = 0; i < n_ && !verdict.fooled; ++i) {
    const auto id = static_cast<VoterId>(i);
    verdict.fooled = claimed.preference_of(id) != verdict.actual.preference_of(id);
  }

  auto tree = star();
  std::vector<TreeNode> nodes;
  for (const auto& v : verdict.actual.voters()) nodes.push_back({v.id, v.preference});
  if (!verify_single_crossing_tree(verdict.actual, VoterTree(std::move(nodes), tree.edges())))
    throw InternalError("adversary committed a profile that is not single crossing on the star");

  finalized_ = verdict.actual;
  return verdict;
}

SessionOracle::SessionOracle(std::size_t m, std::vector<VoterId> voters) : m_(m), voters_(std::move(voters)) {
  if (m == 0) throw ArgumentError("session oracle needs at least one candidate");
}

bool SessionOracle::answer(VoterId voter, Candidate x, Candidate y) {
  check_pair(m_, x, y);
  if (std::find(voters_.begin(), voters_.end(), voter) == voters_.end())
    throw ArgumentError("unknown voter " + std::to_string(voter));

  std::unique_lock lock(mutex_);
  if (closed_) throw Closed();
  pending_ = Question{voter, x, y, next_sequence_++};
  reply_.reset();
  changed_.notify_all();
  changed_.wait(lock, [&] { return closed_ || reply_.has_value(); });
  if (closed_) throw Closed();
  const bool out = *reply_;
  reply_.reset();
  return out;
}

void SessionOracle::finish() {
  std::lock_guard lock(mutex_);
  finished_ = true;
  changed_.notify_all();
}

std::optional<SessionOracle::Question> SessionOracle::await_question() {
  std::unique_lock lock(mutex_);
  changed_.wait(lock, [&] { return closed_ || finished_ || pending_.has_value(); });
  return pending_;
}

std::optional<SessionOracle::Question> SessionOracle::pending() const {
  std::lock_guard lock(mutex_);
  return pending_;
}

bool SessionOracle::finished() const {
  std::lock_guard lock(mutex_);
  return finished_;
}

std::uint64_t SessionOracle::answered() const {
  std::lock_guard lock(mutex_);
  return pending_ ? pending_->sequence : next_sequence_;
}

bool SessionOracle::submit(std::uint64_t sequence, bool prefers_x) {
  std::lock_guard lock(mutex_);
  if (closed_ || !pending_ || pending_->sequence != sequence) return false;
  pending_.reset();
  reply_ = prefers_x;
  changed_.notify_all();
  return true;
}

void SessionOracle::close() {
  std::lock_guard lock(mutex_);
  closed_ = true;
  changed_.notify_all();
}

}  // namespace weaksc

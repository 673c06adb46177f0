#include "weaksc/prefs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>

#include "weaksc/error.hpp"

namespace weaksc {

CandidatePair::CandidatePair(Candidate x, Candidate y) : first(std::min(x, y)), second(std::max(x, y)) {
  if (x == y) throw ArgumentError("candidate pair needs two distinct candidates");
}

std::size_t pair_index(std::size_t m, Candidate x, Candidate y) {
  // row x starts after the pairs of rows 0..x-1, which hold (m-1) + ... + (m-x) entries
  return x * (2 * m - x - 1) / 2 + (y - x - 1);
}

Preference::Preference(std::vector<Candidate> order) : order_(std::move(order)) {
  const std::size_t m = order_.size();
  if (m == 0) throw ArgumentError("a preference needs at least one candidate");
  rank_.assign(m, m);
  for (std::size_t pos = 0; pos < m; ++pos) {
    const Candidate c = order_[pos];
    if (c >= m || rank_[c] != m) throw ArgumentError("preference order is not a permutation of 0..m-1");
    rank_[c] = pos;
  }
}

Preference Preference::identity(std::size_t m) {
  std::vector<Candidate> order(m);
  std::iota(order.begin(), order.end(), Candidate{0});
  return Preference(std::move(order));
}

bool prefers(const Preference& p, Candidate x, Candidate y) {
  if (x == y) throw ArgumentError("prefers: candidates must differ");
  if (x >= p.size() || y >= p.size()) throw ArgumentError("prefers: candidate out of range");
  return p.above(x, y);
}

std::vector<CandidatePair> disagreement_pairs(const Preference& p, const Preference& q) {
  if (p.size() != q.size()) throw ArgumentError("disagreement_pairs: candidate counts differ");
  std::vector<CandidatePair> out;
  const std::size_t m = p.size();
  for (Candidate x = 0; x < m; ++x)
    for (Candidate y = x + 1; y < m; ++y)
      if (p.above(x, y) != q.above(x, y)) out.emplace_back(x, y);
  return out;
}

Profile::Profile(std::size_t m) : m_(m) {
  if (m == 0) throw ArgumentError("profile needs at least one candidate");
}

Profile::Profile(std::size_t m, std::vector<Voter> voters) : Profile(m) {
  voters_.reserve(voters.size());
  for (auto& v : voters) add(std::move(v));
}

Profile Profile::from_preferences(std::vector<Preference> prefs) {
  if (prefs.empty()) throw ArgumentError("from_preferences: no preferences given");
  Profile p(prefs.front().size());
  VoterId id = 0;
  for (auto& pref : prefs) p.add(Voter{id++, std::move(pref)});
  return p;
}

bool Profile::contains_voter(VoterId id) const {
  return std::any_of(voters_.begin(), voters_.end(), [id](const Voter& v) { return v.id == id; });
}

std::size_t Profile::index_of(VoterId id) const {
  for (std::size_t i = 0; i < voters_.size(); ++i)
    if (voters_[i].id == id) return i;
  throw ArgumentError("unknown voter id " + std::to_string(id));
}

std::vector<Preference> Profile::preferences() const {
  std::vector<Preference> out;
  out.reserve(voters_.size());
  for (const auto& v : voters_) out.push_back(v.preference);
  return out;
}

std::vector<Preference> Profile::distinct_preferences() const {
  std::vector<Preference> out;
  std::unordered_set<Preference, PreferenceHash> seen;
  for (const auto& v : voters_)
    if (seen.insert(v.preference).second) out.push_back(v.preference);
  return out;
}

bool Profile::has_distinct_preferences() const { return distinct_preferences().size() == voters_.size(); }

void Profile::add(Voter v) {
  if (v.preference.size() != m_) throw ArgumentError("voter preference has the wrong candidate count");
  if (contains_voter(v.id)) throw ArgumentError("duplicate voter id " + std::to_string(v.id));
  voters_.push_back(std::move(v));
}

bool same_multiset(const Profile& a, const Profile& b) {
  if (a.candidate_count() != b.candidate_count() || a.size() != b.size()) return false;
  auto pa = a.preferences();
  auto pb = b.preferences();
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  return pa == pb;
}

VoterSequence::VoterSequence(std::vector<VoterId> order) : order_(std::move(order)) {
  auto sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ArgumentError("voter sequence repeats a voter");
}

VoterSequence VoterSequence::of(const Profile& p) {
  std::vector<VoterId> ids;
  for (const auto& v : p.voters()) ids.push_back(v.id);
  return VoterSequence(std::move(ids));
}

VoterSequence VoterSequence::reversed() const {
  return VoterSequence(std::vector<VoterId>(order_.rbegin(), order_.rend()));
}

bool VoterSequence::covers(const Profile& p) const {
  if (order_.size() != p.size()) return false;
  return std::all_of(order_.begin(), order_.end(), [&](VoterId id) { return p.contains_voter(id); });
}

MajorityRelation::MajorityRelation(std::size_t m, std::vector<PairwiseOutcome> outcomes)
    : m_(m), outcomes_(std::move(outcomes)) {
  if (outcomes_.size() != pair_count(m)) throw ArgumentError("majority relation: wrong number of pair outcomes");
}

PairwiseOutcome MajorityRelation::outcome(Candidate x, Candidate y) const {
  if (x == y || x >= m_ || y >= m_) throw ArgumentError("majority relation: bad candidate pair");
  if (x < y) return outcomes_[pair_index(m_, x, y)];
  return static_cast<PairwiseOutcome>(-static_cast<int>(outcomes_[pair_index(m_, y, x)]));
}

MajorityRelation majority_relation(std::span<const Preference> prefs) {
  if (prefs.empty()) throw ArgumentError("majority_relation: empty sequence");
  const std::size_t m = prefs.front().size();
  for (const auto& p : prefs)
    if (p.size() != m) throw ArgumentError("majority_relation: candidate counts differ");

  std::vector<PairwiseOutcome> outcomes;
  outcomes.reserve(pair_count(m));
  const std::size_t n = prefs.size();
  for (Candidate x = 0; x < m; ++x) {
    for (Candidate y = x + 1; y < m; ++y) {
      std::size_t for_x = 0;
      for (const auto& p : prefs) for_x += p.above(x, y) ? 1 : 0;
      const std::size_t for_y = n - for_x;
      outcomes.push_back(for_x > for_y   ? PairwiseOutcome::first_wins
                         : for_y > for_x ? PairwiseOutcome::second_wins
                                         : PairwiseOutcome::tie);
    }
  }
  return MajorityRelation(m, std::move(outcomes));
}

std::optional<Preference> as_linear_order(const MajorityRelation& r) {
  // A complete relation is transitive iff its win counts are exactly 0..m-1.
  const std::size_t m = r.candidate_count();
  std::vector<std::size_t> wins(m, 0);
  for (Candidate x = 0; x < m; ++x) {
    for (Candidate y = x + 1; y < m; ++y) {
      switch (r.outcome(x, y)) {
        case PairwiseOutcome::first_wins: ++wins[x]; break;
        case PairwiseOutcome::second_wins: ++wins[y]; break;
        case PairwiseOutcome::tie: return std::nullopt;
      }
    }
  }
  std::vector<Candidate> order(m, m);
  for (Candidate c = 0; c < m; ++c) {
    const std::size_t pos = m - 1 - wins[c];
    if (order[pos] != m) return std::nullopt;
    order[pos] = c;
  }
  return Preference(std::move(order));
}

bool is_single_crossing_sequence(const Profile& p, const VoterSequence& s) {
  if (!s.covers(p)) throw ArgumentError("voter sequence is not a permutation of the profile's voters");
  std::vector<const Preference*> seq;
  seq.reserve(s.size());
  for (VoterId id : s.order()) seq.push_back(&p.preference_of(id));

  const std::size_t m = p.candidate_count();
  for (Candidate x = 0; x < m; ++x) {
    for (Candidate y = x + 1; y < m; ++y) {
      // Both blocks are contiguous iff the stance changes at most once.
      std::size_t changes = 0;
      for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i - 1]->above(x, y) != seq[i]->above(x, y)) ++changes;
      if (changes > 1) return false;
    }
  }
  return true;
}

Dedup dedupe(const Profile& p) {
  Dedup out{Profile(p.candidate_count()), {}};
  std::map<Preference, std::size_t> slot;
  for (const auto& v : p.voters()) {
    auto [it, fresh] = slot.try_emplace(v.preference, out.groups.size());
    if (fresh) {
      out.distinct.add(v);
      out.groups.push_back({v.id});
    } else {
      out.groups[it->second].push_back(v.id);
    }
  }
  return out;
}

PairSignature::PairSignature(const Preference& p) {
  const std::size_t m = p.size();
  words_.assign((pair_count(m) + 63) / 64, 0);
  std::size_t bit = 0;
  for (Candidate x = 0; x < m; ++x)
    for (Candidate y = x + 1; y < m; ++y, ++bit)
      if (p.above(x, y)) words_[bit / 64] |= std::uint64_t{1} << (bit % 64);
}

PairSignature PairSignature::majority_of(const PairSignature& a, const PairSignature& b,
                                         const PairSignature& c) {
  PairSignature out;
  out.words_.resize(a.words_.size());
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    const auto x = a.words_[i], y = b.words_[i], z = c.words_[i];
    out.words_[i] = (x & y) | (x & z) | (y & z);
  }
  return out;
}

std::optional<Preference> linear_order_from_signature(std::size_t m, const PairSignature& s) {
  std::vector<std::size_t> wins(m, 0);
  std::size_t bit = 0;
  for (Candidate x = 0; x < m; ++x)
    for (Candidate y = x + 1; y < m; ++y, ++bit) ++wins[s.test(bit) ? x : y];
  std::vector<Candidate> order(m, m);
  for (Candidate c = 0; c < m; ++c) {
    const std::size_t pos = m - 1 - wins[c];
    if (order[pos] != m) return std::nullopt;
    order[pos] = c;
  }
  return Preference(std::move(order));
}

std::size_t PairSignatureHash::operator()(const PairSignature& s) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (auto w : s.words()) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::size_t PreferenceHash::operator()(const Preference& p) const noexcept {
  std::size_t h = p.size();
  for (auto c : p.order()) h = h * 1315423911U + c;
  return h;
}

}  // namespace weaksc

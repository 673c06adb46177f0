#include "weaksc/closure.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "weaksc/error.hpp"

namespace weaksc {
namespace {

std::vector<PairSignature> signatures(std::span<const Preference> prefs) {
  std::vector<PairSignature> out;
  out.reserve(prefs.size());
  for (const auto& p : prefs) out.emplace_back(p);
  return out;
}

// First 3-multiset (i <= j <= l, lexicographic) whose majority is not in the set.
std::optional<Triple> find_triad_violation(const std::vector<PairSignature>& sigs) {
  const std::unordered_set<PairSignature, PairSignatureHash> members(sigs.begin(), sigs.end());
  const std::size_t k = sigs.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j)
      for (std::size_t l = j; l < k; ++l)
        if (!members.contains(PairSignature::majority_of(sigs[i], sigs[j], sigs[l]))) return Triple{i, j, l};
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ClosureFailure::Kind kind) {
  switch (kind) {
    case ClosureFailure::Kind::cyclic_majority: return "cyclic-majority";
    case ClosureFailure::Kind::oversized: return "oversized-closure";
    case ClosureFailure::Kind::not_closed: return "closure-not-closed";
  }
  return "unknown";
}

bool satisfies_triad_majority(const Profile& p) {
  if (p.empty()) throw ArgumentError("satisfies_triad_majority: empty profile");
  const auto distinct = p.distinct_preferences();
  return !find_triad_violation(signatures(distinct)).has_value();
}

ClosureOutcome triad_closure(const Profile& p) {
  if (p.empty()) throw ArgumentError("triad_closure: empty profile");
  const std::size_t m = p.candidate_count();
  const auto input = p.distinct_preferences();
  const auto sigs = signatures(input);
  const std::size_t k = input.size();

  std::unordered_set<PairSignature, PairSignatureHash> known(sigs.begin(), sigs.end());
  std::vector<AddedPreference> added;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      for (std::size_t l = j; l < k; ++l) {
        auto maj = PairSignature::majority_of(sigs[i], sigs[j], sigs[l]);
        if (known.contains(maj)) continue;
        auto order = linear_order_from_signature(m, maj);
        if (!order)
          return ClosureFailure{ClosureFailure::Kind::cyclic_majority, {i, j, l}, {input[i], input[j], input[l]}};
        known.insert(std::move(maj));
        added.push_back({std::move(*order), {i, j, l}});
      }
    }
  }

  const std::size_t bound = pair_count(m) + 1;
  if (k + added.size() > bound) return ClosureFailure{ClosureFailure::Kind::oversized, {}, {}};

  std::vector<Preference> members = input;
  for (const auto& a : added) members.push_back(a.preference);
  std::sort(members.begin(), members.end());
  std::sort(added.begin(), added.end(),
            [](const AddedPreference& a, const AddedPreference& b) { return a.preference < b.preference; });

  // Only weakly single crossing inputs are guaranteed a closed single pass;
  // anything else is caught here and certified as non-membership.
  if (auto bad = find_triad_violation(signatures(members)))
    return ClosureFailure{ClosureFailure::Kind::not_closed,
                          *bad,
                          {members[(*bad)[0]], members[(*bad)[1]], members[(*bad)[2]]}};

  return ClosureResult{Profile::from_preferences(std::move(members)), std::move(added)};
}

bool verify_minimality(const Profile& p, const ClosureResult& c) {
  if (p.empty()) return c.closure.empty();
  const auto input = p.distinct_preferences();
  const std::unordered_set<Preference, PreferenceHash> originals(input.begin(), input.end());
  const std::size_t k = input.size();

  for (const auto& v : c.closure.voters()) {
    if (originals.contains(v.preference)) continue;
    bool witnessed = false;
    for (std::size_t i = 0; i < k && !witnessed; ++i) {
      for (std::size_t j = i; j < k && !witnessed; ++j) {
        for (std::size_t l = j; l < k && !witnessed; ++l) {
          const std::array<Preference, 3> triple{input[i], input[j], input[l]};
          const auto order = as_linear_order(majority_relation(triple));
          witnessed = order && *order == v.preference;
        }
      }
    }
    if (!witnessed) return false;
  }
  return true;
}

}  // namespace weaksc

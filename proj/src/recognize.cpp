#include "weaksc/recognize.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "weaksc/error.hpp"

namespace weaksc {

RecognitionOutcome recognize_weakly_sc(const Profile& p) {
  if (p.empty()) throw ArgumentError("recognize_weakly_sc: empty profile");
  RecognitionOutcome out;
  auto closed = triad_closure(dedupe(p).distinct);
  if (auto* failure = std::get_if<ClosureFailure>(&closed)) {
    out.certificate = std::move(*failure);
    return out;
  }
  auto& result = std::get<ClosureResult>(closed);
  auto built = build_sc_tree(result.closure);
  if (auto* none = std::get_if<NoTree>(&built)) {
    out.certificate = std::move(*none);
    return out;
  }
  out.verdict = RecognitionOutcome::Verdict::yes;
  out.tree = std::move(std::get<VoterTree>(built));
  out.closure = std::move(result);
  return out;
}

bool bruteforce_weakly_sc(const Profile& p) {
  if (p.empty()) throw ArgumentError("bruteforce_weakly_sc: empty profile");
  const std::size_t m = p.candidate_count();
  if (m > 4) throw ArgumentError("bruteforce_weakly_sc: refusing more than 4 candidates");

  const auto base = p.distinct_preferences();
  const std::size_t cap = pair_count(m) + 1;
  if (base.size() > cap) return false;

  const std::unordered_set<Preference, PreferenceHash> have(base.begin(), base.end());
  std::vector<Preference> others;
  auto order = Preference::identity(m).order();
  do {
    Preference q(order);
    if (!have.contains(q)) others.push_back(std::move(q));
  } while (std::next_permutation(order.begin(), order.end()));

  std::size_t max_extra = cap - base.size();
  if (m == 4) max_extra = std::min(max_extra, kBruteforceExtraAtFour);

  std::vector<Preference> current = base;
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t from, std::size_t budget) {
    if (bruteforce_sc_tree(Profile::from_preferences(current))) return true;
    if (budget == 0) return false;
    for (std::size_t i = from; i < others.size(); ++i) {
      current.push_back(others[i]);
      const bool found = search(i + 1, budget - 1);
      current.pop_back();
      if (found) return true;
    }
    return false;
  };
  return search(0, max_extra);
}

}  // namespace weaksc

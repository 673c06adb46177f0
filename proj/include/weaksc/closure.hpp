#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "weaksc/prefs.hpp"

namespace weaksc {

/// Indices into the deduplicated input (first-occurrence order).
using Triple = std::array<std::size_t, 3>;

struct AddedPreference {
  Preference preference;
  Triple witness;

  friend bool operator==(const AddedPreference&, const AddedPreference&) = default;
};

struct ClosureResult {
  /// Distinct preferences, sorted lexicographically by order; voter ids 0..k-1.
  Profile closure;
  /// Preferences not present in the input, in sorted order, each with the
  /// first input triple (lexicographic) whose majority order it is.
  std::vector<AddedPreference> added;
};

/// Why a profile has no triad majority closure.
struct ClosureFailure {
  enum class Kind {
    /// Some input triple has a cyclic majority relation.
    cyclic_majority,
    /// The one-pass closure exceeds m(m-1)/2 + 1 distinct preferences.
    oversized,
    /// The one-pass closure is itself not triad-majority closed.
    not_closed,
  };
  Kind kind;
  /// Input indices for cyclic_majority; closure indices for not_closed.
  Triple witness{};
  /// The witnessing preferences (empty for oversized).
  std::vector<Preference> preferences;
};

std::string_view to_string(ClosureFailure::Kind kind);

using ClosureOutcome = std::variant<ClosureResult, ClosureFailure>;

/// Property 1: every 3-multiset of p's preferences has a linear majority order
/// that is itself one of p's preferences. Throws ArgumentError on an empty profile.
bool satisfies_triad_majority(const Profile& p);

/// One pass over all 3-multisets of p's distinct preferences, adding each
/// linear majority order. Throws ArgumentError on an empty profile.
ClosureOutcome triad_closure(const Profile& p);

/// Every closure member missing from p is the linear majority of three of p's preferences.
bool verify_minimality(const Profile& p, const ClosureResult& c);

}  // namespace weaksc

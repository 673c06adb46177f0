#pragma once

#include <optional>
#include <variant>

#include "weaksc/closure.hpp"
#include "weaksc/prefs.hpp"
#include "weaksc/sctree.hpp"

namespace weaksc {

/// Evidence that a profile is not weakly single crossing on trees.
using Certificate = std::variant<ClosureFailure, NoTree>;

struct RecognitionOutcome {
  enum class Verdict { yes, no };
  Verdict verdict = Verdict::no;
  /// Present iff yes.
  std::optional<ClosureResult> closure;
  /// Single crossing tree on closure->closure; present iff yes.
  std::optional<VoterTree> tree;
  /// Present iff no.
  std::optional<Certificate> certificate;

  bool yes() const { return verdict == Verdict::yes; }
};

/// Dedupe, close under triad majorities, then build a tree on the closure.
/// Throws ArgumentError on an empty profile.
RecognitionOutcome recognize_weakly_sc(const Profile& p);

/// Exhaustive superset search backed by bruteforce_sc_tree. Supports m <= 3
/// exhaustively, and m == 4 with at most kBruteforceExtraAtFour extra
/// preferences. Refuses (ArgumentError) larger m.
bool bruteforce_weakly_sc(const Profile& p);

inline constexpr std::size_t kBruteforceExtraAtFour = 3;

}  // namespace weaksc

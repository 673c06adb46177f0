#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "weaksc/closure.hpp"
#include "weaksc/elicit.hpp"
#include "weaksc/prefs.hpp"
#include "weaksc/recognize.hpp"
#include "weaksc/sctree.hpp"

namespace weaksc {

/// Display names for candidates 0..m-1. Names are nonempty and distinct.
class CandidateNames {
 public:
  explicit CandidateNames(std::vector<std::string> names);

  /// "a", "b", ..., "z", then "c26", "c27", ...
  static CandidateNames letters(std::size_t m);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Candidate c) const { return names_.at(c); }
  /// Throws FormatError for unknown names.
  Candidate index(std::string_view name) const;

  std::vector<std::string> render(const Preference& p) const;
  /// Throws FormatError unless `names` lists every candidate exactly once.
  Preference parse(const std::vector<std::string>& names) const;
  /// Compact form for the single-letter case ("abc"), space separated otherwise.
  std::string format(const Preference& p) const;

 private:
  std::vector<std::string> names_;
};

struct ProfileDocument {
  CandidateNames candidates;
  Profile profile;
};

/// Parses either the JSON profile format or the plain text format
/// (first line: candidate names; each further nonblank line: one voter).
ProfileDocument parse_profile(std::string_view text);
ProfileDocument read_profile_file(const std::string& path);

nlohmann::json profile_to_json(const CandidateNames& names, const Profile& p);
/// Plain text format; voter ids are not preserved.
std::string profile_to_text(const CandidateNames& names, const Profile& p);
nlohmann::json tree_to_json(const CandidateNames& names, const VoterTree& t);
/// Throws FormatError on schema violations; ArgumentError if not a tree.
VoterTree tree_from_json(const CandidateNames& names, const nlohmann::json& j);
VoterTree read_tree_file(const CandidateNames& names, const std::string& path);

nlohmann::json closure_witnesses_to_json(const CandidateNames& names, const ClosureResult& c);
nlohmann::json certificate_to_json(const CandidateNames& names, const Certificate& c);
nlohmann::json report_to_json(const CandidateNames& names, const ElicitationReport& r);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace weaksc

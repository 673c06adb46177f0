#include <filesystem>

#include "brute.hpp"
#include "doctest.h"
#include "weaksc/error.hpp"
#include "weaksc/io.hpp"

using namespace weaksc;
using namespace weaksc::testing;
using nlohmann::json;

TEST_CASE("candidate names") {
  const auto abc = CandidateNames::letters(3);
  CHECK(abc.names() == std::vector<std::string>{"a", "b", "c"});
  CHECK(abc.format(pref("cab")) == "cab");
  CHECK(abc.parse({"b", "a", "c"}) == pref("bac"));
  CHECK_THROWS_AS(abc.parse({"a", "b"}), FormatError);
  CHECK_THROWS_AS(abc.parse({"a", "a", "c"}), FormatError);
  CHECK_THROWS_AS(abc.parse({"a", "b", "z"}), FormatError);

  CHECK(CandidateNames::letters(28).name(27) == "c27");
  const CandidateNames words({"tea", "coffee"});
  CHECK(words.format(Preference({1, 0})) == "coffee tea");
  CHECK_THROWS_AS(CandidateNames({"x", "x"}), FormatError);
  CHECK_THROWS_AS(CandidateNames({"x", ""}), FormatError);
  CHECK_THROWS_AS(CandidateNames({}), FormatError);
}

TEST_CASE("profile formats") {
  const auto doc = parse_profile(R"({"candidates":["a","b","c"],"voters":[{"id":4,"order":["b","a","c"]},{"id":1,"order":["a","b","c"]}]})");
  CHECK(doc.profile.size() == 2);
  CHECK(doc.profile.voters()[0].id == 4);
  CHECK(doc.profile.preference_of(1) == pref("abc"));
  CHECK(parse_profile(profile_to_json(doc.candidates, doc.profile).dump()).profile == doc.profile);

  const auto text = parse_profile("a b c\n\nb a c\n  a b c  \n");
  CHECK(strs(text.profile) == std::vector<std::string>{"bac", "abc"});
  CHECK(VoterSequence::of(text.profile).order() == std::vector<VoterId>{0, 1});
  CHECK(parse_profile(profile_to_text(text.candidates, text.profile)).profile == text.profile);

  const auto named = parse_profile("red green\ngreen red\n");
  CHECK(named.candidates.name(1) == "green");
  CHECK(named.profile.preference_of(0) == Preference({1, 0}));
}

TEST_CASE("profile format errors") {
  CHECK_THROWS_AS(parse_profile(""), FormatError);
  CHECK_THROWS_AS(parse_profile("{"), FormatError);
  CHECK_THROWS_AS(parse_profile(R"({"candidates":["a","b"]})"), FormatError);
  CHECK_THROWS_AS(parse_profile(R"({"candidates":["a","b"],"voters":[{"id":0}]})"), FormatError);
  CHECK_THROWS_AS(parse_profile(R"({"candidates":["a","b"],"voters":[{"id":0,"order":["a","b"]},{"id":0,"order":["b","a"]}]})"),
                  FormatError);
  CHECK_THROWS_AS(parse_profile(R"({"candidates":["a","a"],"voters":[]})"), FormatError);
  CHECK_THROWS_AS(parse_profile("a b c\na b\n"), FormatError);
  CHECK_THROWS_AS(parse_profile("a b c\na b d\n"), FormatError);
  CHECK_THROWS_AS(read_profile_file("/nonexistent/profile.json"), FormatError);
}

TEST_CASE("tree format") {
  const auto names = CandidateNames::letters(3);
  const VoterTree t({{0, pref("abc")}, {5, pref("bac")}, {2, pref("acb")}}, {{0, 1}, {0, 2}});
  const auto j = tree_to_json(names, t);
  CHECK(j == json::parse(R"({"nodes":[{"voter":0,"order":["a","b","c"]},{"voter":5,"order":["b","a","c"]},
                               {"voter":2,"order":["a","c","b"]}],"edges":[[0,1],[0,2]]})"));
  CHECK(tree_from_json(names, j) == t);

  CHECK_THROWS_AS(tree_from_json(names, json::parse(R"({"nodes":[]})")), FormatError);
  CHECK_THROWS_AS(tree_from_json(names, json::parse(R"({"nodes":[{"voter":0,"order":["a","b","c"]}],"edges":[[0]]})")),
                  FormatError);
  CHECK_THROWS_AS(tree_from_json(names, json::parse(R"({"nodes":[{"voter":0,"order":["a","b","c"]},
      {"voter":1,"order":["a","b","c"]}],"edges":[]})")),
                  ArgumentError);

  const auto path = std::filesystem::temp_directory_path() / "weaksc_test_io_tree.json";
  write_text_file(path.string(), j.dump());
  CHECK(read_tree_file(names, path.string()) == t);
  write_text_file(path.string(), "{nope");
  CHECK_THROWS_AS(read_tree_file(names, path.string()), FormatError);
  std::filesystem::remove(path);
}

TEST_CASE("witness and certificate documents") {
  const auto names = CandidateNames::letters(4);
  const auto closed = std::get<ClosureResult>(triad_closure(profile({"bacd", "acbd", "abdc"})));
  const auto w = closure_witnesses_to_json(names, closed);
  CHECK(w["closure_size"] == 4);
  REQUIRE(w["added"].size() == 1);
  CHECK(w["added"][0]["order"] == json{"a", "b", "c", "d"});
  CHECK(w["added"][0]["witness"] == json{0, 1, 2});

  const auto condorcet = recognize_weakly_sc(profile({"abc", "bca", "cab"}));
  REQUIRE_FALSE(condorcet.yes());
  const auto c = certificate_to_json(CandidateNames::letters(3), *condorcet.certificate);
  CHECK(c["kind"] == "cyclic-majority");
  CHECK(c["orders"].size() == 3);
  CHECK(c.contains("witness"));
}

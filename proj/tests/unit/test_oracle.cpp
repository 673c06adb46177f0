#include <random>
#include <thread>

#include "brute.hpp"
#include "doctest.h"
#include "weaksc/elicit.hpp"
#include "weaksc/error.hpp"
#include "weaksc/oracle.hpp"

using namespace weaksc;
using namespace weaksc::testing;

namespace {

constexpr Candidate a = 0, b = 1, c = 2, d = 3;

// Answers at random on every call, ignoring consistency.
class CoinOracle final : public QueryOracle {
 public:
  explicit CoinOracle(std::uint64_t seed) : rng_(seed) {}
  std::size_t candidate_count() const override { return 6; }
  std::vector<VoterId> voters() const override { return {0, 1, 2}; }
  bool answer(VoterId, Candidate, Candidate) override {
    ++calls;
    return rng_() & 1U;
  }
  std::size_t calls = 0;

 private:
  std::mt19937_64 rng_;
};

}  // namespace

TEST_CASE("simulated oracle examples") {
  SimulatedOracle o(profile({"abc"}));
  CHECK(o.answer(0, a, b));
  CHECK_FALSE(o.answer(0, b, a));
  CHECK_THROWS_AS(o.answer(1, a, b), ArgumentError);
  CHECK_THROWS_AS(o.answer(0, a, a), ArgumentError);
  CHECK_THROWS_AS(o.answer(0, a, 5), ArgumentError);
  CHECK(o.voters() == std::vector<VoterId>{0});
}

TEST_CASE("counting examples") {
  SimulatedOracle inner(profile({"abc", "cba"}));
  CountingMemoOracle o(inner);
  CHECK(o.query_count() == 0);
  o.answer(0, a, b);
  o.answer(0, a, b);
  CHECK(o.query_count() == 1);
  CHECK(o.answer(0, b, a) == false);
  o.answer(1, a, b);
  CHECK(o.query_count() == 2);
  CHECK(o.query_count(0) == 1);
  CHECK(o.query_count(1) == 1);
  CHECK(o.asked(0, b, a));
  CHECK_FALSE(o.asked(1, a, c));
  CHECK_THROWS_AS(o.answer(0, c, c), ArgumentError);
}

TEST_CASE("memo consistency and unordered counting") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CoinOracle inner(seed);
    CountingMemoOracle o(inner);
    std::map<std::tuple<VoterId, Candidate, Candidate>, bool> first;
    std::mt19937_64 rng(seed + 1000);
    for (int q = 0; q < 200; ++q) {
      const auto v = static_cast<VoterId>(uniform(rng, 0, 2));
      const auto x = uniform(rng, 0, 5);
      auto y = uniform(rng, 0, 4);
      if (y >= x) ++y;
      const bool got = o.answer(v, x, y);
      const auto key = std::make_tuple(v, std::min(x, y), std::max(x, y));
      const bool lo_first = x < y ? got : !got;
      if (auto it = first.find(key); it != first.end())
        CHECK(it->second == lo_first);
      else
        first.emplace(key, lo_first);
      CHECK(o.query_count() == first.size());
      CHECK(inner.calls == first.size());
    }
  }
}

TEST_CASE("adversary answers with the baseline before finalize") {
  AdversarialStarOracle o(4, 3);
  CHECK(o.answer(2, a, b));
  CHECK(o.answer(1, c, d));
  CHECK_FALSE(o.answer(0, d, a));
  CHECK(o.baseline() == Preference::identity(4));
  CHECK(o.star().size() == 3);
  CHECK(max_degree(o.star()) == 2);
  CHECK_THROWS_AS(AdversarialStarOracle(3, 2), ArgumentError);
  CHECK_THROWS_AS(AdversarialStarOracle(0, 2), ArgumentError);
  CHECK_THROWS_AS(AdversarialStarOracle(4, 0), ArgumentError);
  CHECK_THROWS_AS(o.answer(3, a, b), ArgumentError);
}

TEST_CASE("adversary finalize examples") {
  SUBCASE("everything queried") {
    AdversarialStarOracle o(4, 4);
    for (VoterId v = 1; v < 4; ++v) o.answer(v, a, b), o.answer(v, d, c);
    std::vector<Preference> claim(4, pref("abcd"));
    const auto verdict = o.finalize(Profile::from_preferences(claim));
    CHECK_FALSE(verdict.fooled);
    CHECK_FALSE(verdict.exploited.has_value());
    CHECK(verdict.actual == Profile::from_preferences(claim));
    CHECK_THROWS_AS(o.finalize(Profile::from_preferences(claim)), ArgumentError);
  }
  SUBCASE("one skipped pair") {
    AdversarialStarOracle o(4, 5);
    for (VoterId v = 1; v < 5; ++v) {
      if (v != 3) o.answer(v, a, b);
      o.answer(v, c, d);
    }
    std::vector<Preference> claim(5, pref("abcd"));
    const auto verdict = o.finalize(Profile::from_preferences(claim));
    CHECK(verdict.fooled);
    REQUIRE(verdict.exploited.has_value());
    CHECK(*verdict.exploited == std::pair<VoterId, std::size_t>{3, 0});
    CHECK(verdict.actual.preference_of(3) == pref("bacd"));
    for (VoterId v : {0, 1, 2, 4}) CHECK(verdict.actual.preference_of(v) == pref("abcd"));
    CHECK_FALSE(o.answer(3, a, b));
  }
  SUBCASE("smallest instance") {
    AdversarialStarOracle o(2, 2);
    const auto verdict = o.finalize(profile({"ab", "ab"}));
    CHECK(verdict.fooled);
    CHECK(verdict.actual.preference_of(1) == pref("ba"));
  }
  SUBCASE("a claim that already disagrees keeps the baseline") {
    AdversarialStarOracle o(2, 2);
    const auto verdict = o.finalize(profile({"ab", "ba"}));
    CHECK(verdict.fooled);
    CHECK(verdict.actual.preference_of(1) == pref("ab"));
  }
  SUBCASE("claim validation") {
    AdversarialStarOracle o(4, 2);
    CHECK_THROWS_AS(o.finalize(profile({"abcd"})), ArgumentError);
    CHECK_THROWS_AS(o.finalize(profile({"abc", "abc"})), ArgumentError);
  }
}

TEST_CASE("adversary soundness under random query patterns") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 300; ++i) {
    const std::size_t m = 2 * uniform(rng, 1, 4), n = uniform(rng, 1, 8);
    AdversarialStarOracle o(m, n);
    std::vector<std::tuple<VoterId, Candidate, Candidate, bool>> log;
    for (std::size_t q = 0, k = uniform(rng, 0, n * m); q < k; ++q) {
      const auto v = static_cast<VoterId>(uniform(rng, 0, n - 1));
      const auto x = uniform(rng, 0, m - 1);
      auto y = uniform(rng, 0, m - 2);
      if (y >= x) ++y;
      log.emplace_back(v, x, y, o.answer(v, x, y));
    }
    std::vector<Preference> claim;
    for (std::size_t v = 0; v < n; ++v) claim.push_back(uniform(rng, 0, 3) ? o.baseline() : random_preference(m, rng));
    const auto verdict = o.finalize(Profile::from_preferences(claim));

    std::vector<TreeNode> nodes;
    for (const auto& v : verdict.actual.voters()) nodes.push_back({v.id, v.preference});
    CHECK(verify_single_crossing_tree(verdict.actual, VoterTree(std::move(nodes), o.star().edges())));
    for (const auto& [v, x, y, ans] : log) CHECK(verdict.actual.preference_of(v).above(x, y) == ans);
    CHECK(verdict.fooled == !(verdict.actual == Profile::from_preferences(claim)));
  }
}

TEST_CASE("session oracle rendezvous") {
  const auto hidden = pref("cadb");
  SessionOracle o(4, {7});
  CHECK_FALSE(o.pending().has_value());
  std::optional<Preference> result;
  std::thread engine([&] {
    result = elicit_full(o, 7);
    o.finish();
  });

  std::uint64_t expected = 0;
  while (auto q = o.await_question()) {
    CHECK(q->voter == 7);
    CHECK(q->sequence == expected);
    CHECK_FALSE(o.submit(q->sequence + 1, true));
    CHECK(o.answered() == expected);
    CHECK(o.submit(q->sequence, hidden.above(q->x, q->y)));
    CHECK_FALSE(o.submit(q->sequence, true));
    ++expected;
  }
  engine.join();
  CHECK(o.finished());
  CHECK(result == hidden);
  CHECK(o.answered() == expected);
  CHECK(expected <= sort_query_bound(4));
}

TEST_CASE("closing a session oracle releases the engine") {
  SessionOracle o(3, {0});
  bool closed = false;
  std::thread engine([&] {
    try {
      o.answer(0, a, b);
    } catch (const SessionOracle::Closed&) {
      closed = true;
    }
  });
  CHECK(o.await_question().has_value());
  o.close();
  engine.join();
  CHECK(closed);
  CHECK_FALSE(o.submit(0, true));
  CHECK_THROWS_AS(o.answer(0, a, b), SessionOracle::Closed);
  CHECK_THROWS_AS(o.answer(1, a, b), ArgumentError);
}

#include "weaksc/elicit.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "weaksc/closure.hpp"
#include "weaksc/error.hpp"

namespace weaksc {
namespace {

void merge_sort(std::vector<Candidate>& xs, std::vector<Candidate>& scratch, std::size_t lo, std::size_t hi,
                QueryOracle& o, VoterId voter) {
  if (hi - lo < 2) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  merge_sort(xs, scratch, lo, mid, o, voter);
  merge_sort(xs, scratch, mid, hi, o, voter);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) scratch[k++] = o.answer(voter, xs[i], xs[j]) ? xs[i++] : xs[j++];
  while (i < mid) scratch[k++] = xs[i++];
  while (j < hi) scratch[k++] = xs[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, xs.begin() + lo);
}

// Lexicographically smallest (x, y) with x above y in `from` and y above x in `to`.
std::pair<Candidate, Candidate> separating_pair(const Preference& from, const Preference& to) {
  const std::size_t m = from.size();
  for (Candidate x = 0; x < m; ++x)
    for (Candidate y = 0; y < m; ++y)
      if (x != y && from.above(x, y) && to.above(y, x)) return {x, y};
  throw ArgumentError("search_in_tree: adjacent tree nodes carry the same preference");
}

std::string describe(const Certificate& c) {
  if (const auto* f = std::get_if<ClosureFailure>(&c)) return std::string(to_string(f->kind));
  return std::string(to_string(std::get<NoTree>(c).reason));
}

}  // namespace

std::size_t ceil_log2(std::size_t x) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < x) ++bits;
  return bits;
}

std::size_t sort_query_bound(std::size_t m) { return m * ceil_log2(m); }

std::size_t sequential_query_budget(std::size_t m, std::size_t n) {
  return 4 * m * n + 8 * std::min(m * m, n) * m * ceil_log2(m);
}

std::size_t search_query_budget(std::size_t m) { return 10 * m; }

Preference elicit_full(QueryOracle& o, VoterId voter) {
  std::vector<Candidate> order(o.candidate_count());
  std::iota(order.begin(), order.end(), Candidate{0});
  std::vector<Candidate> scratch(order.size());
  merge_sort(order, scratch, 0, order.size(), o, voter);
  return Preference(std::move(order));
}

bool verify_equals(QueryOracle& o, VoterId voter, const Preference& candidate) {
  const auto& order = candidate.order();
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!o.answer(voter, order[i - 1], order[i])) return false;
  return true;
}

std::optional<Preference> search_in_tree(QueryOracle& o, VoterId voter, const Profile& closure, const VoterTree& t) {
  if (!closure.has_distinct_preferences()) throw ArgumentError("search_in_tree: closure preferences must be distinct");
  if (!verify_single_crossing_tree(closure, t)) throw ArgumentError("search_in_tree: tree is not single crossing");

  std::vector<bool> alive(t.size(), true);
  std::size_t remaining = t.size();
  while (remaining >= 3) {
    const std::size_t r = centroid_of(t, alive);
    struct Branch {
      std::size_t root;
      std::vector<std::size_t> nodes;
    };
    std::vector<Branch> branches;
    for (auto u : t.neighbors(r))
      if (alive[u]) branches.push_back({u, component_from(t, alive, u, r)});
    std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
      if (a.nodes.size() != b.nodes.size()) return a.nodes.size() > b.nodes.size();
      return a.root < b.root;
    });

    for (const auto& branch : branches) {
      const auto [x, y] = separating_pair(t.node(r).preference, t.node(branch.root).preference);
      if (o.answer(voter, x, y)) {
        for (auto v : branch.nodes) alive[v] = false;
        remaining -= branch.nodes.size();
      } else {
        std::fill(alive.begin(), alive.end(), false);
        for (auto v : branch.nodes) alive[v] = true;
        remaining = branch.nodes.size();
        break;
      }
    }
  }

  std::vector<std::size_t> left;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (alive[i]) left.push_back(i);
  std::size_t pick = left.front();
  if (left.size() == 2) {
    const auto [x, y] = separating_pair(t.node(left[0]).preference, t.node(left[1]).preference);
    pick = o.answer(voter, x, y) ? left[0] : left[1];
  }
  const Preference& guess = t.node(pick).preference;
  if (!verify_equals(o, voter, guess)) return std::nullopt;
  return guess;
}

DomainViolation::DomainViolation(Certificate certificate)
    : std::runtime_error("hidden profile is not weakly single crossing on trees (" + describe(certificate) + ")"),
      certificate_(std::move(certificate)) {}

ElicitationSession::ElicitationSession(QueryOracle& oracle) : source_(oracle), counter_(oracle) {}

const ElicitationSession::ClosureTree& ElicitationSession::closure_tree() {
  if (cache_ && cache_size_ == seen_.size()) return *cache_;
  auto closed = triad_closure(Profile::from_preferences(seen_));
  if (auto* failure = std::get_if<ClosureFailure>(&closed)) throw DomainViolation(std::move(*failure));
  auto& closure = std::get<ClosureResult>(closed).closure;
  auto built = build_sc_tree(closure);
  if (auto* none = std::get_if<NoTree>(&built)) throw DomainViolation(std::move(*none));
  cache_.emplace(ClosureTree{std::move(closure), std::move(std::get<VoterTree>(built))});
  cache_size_ = seen_.size();
  return *cache_;
}

const VoterRecord& ElicitationSession::elicit_next(VoterId voter) {
  if (released_.contains(voter)) throw ArgumentError("voter " + std::to_string(voter) + " was already released");

  VoterRecord record{voter, Preference::identity(source_.candidate_count())};
  const std::size_t before = counter_.query_count();
  std::optional<Preference> found;
  if (!seen_.empty()) {
    const auto& ct = closure_tree();
    found = search_in_tree(counter_, voter, ct.closure, ct.tree);
    record.searched = true;
    record.search_queries = counter_.query_count() - before;
  }
  if (found) {
    record.preference = std::move(*found);
  } else {
    record.preference = elicit_full(counter_, voter);
    record.sorted = true;
    seen_.push_back(record.preference);
  }
  record.queries = counter_.query_count() - before;
  const bool grew = record.sorted;
  released_.insert(voter);
  records_.push_back(std::move(record));
  if (grew) closure_tree();
  return records_.back();
}

void ElicitationSession::check_domain() const {
  if (seen_.empty()) return;
  auto outcome = recognize_weakly_sc(Profile::from_preferences(seen_));
  if (!outcome.yes()) throw DomainViolation(std::move(*outcome.certificate));
}

std::size_t ElicitationSession::sort_count() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const VoterRecord& r) { return r.sorted; }));
}

Profile ElicitationSession::profile() const {
  Profile out(source_.candidate_count());
  for (VoterId id : source_.voters()) {
    const auto it =
        std::find_if(records_.begin(), records_.end(), [id](const VoterRecord& r) { return r.voter == id; });
    if (it != records_.end()) out.add(Voter{id, it->preference});
  }
  return out;
}

ElicitationReport ElicitationSession::report() const {
  return ElicitationReport{profile(), records_, query_count(), sort_count()};
}

ElicitationReport elicit_sequential(QueryOracle& o, const VoterSequence& arrival) {
  ElicitationSession session(o);
  for (VoterId id : arrival.order()) session.elicit_next(id);
  session.check_domain();
  return session.report();
}

ElicitationReport naive_elicit_all(QueryOracle& o, const VoterSequence& voters) {
  CountingMemoOracle counter(o);
  ElicitationReport report{Profile(o.candidate_count()), {}, 0, 0};
  for (VoterId id : voters.order()) {
    const std::size_t before = counter.query_count();
    VoterRecord record{id, elicit_full(counter, id)};
    record.queries = counter.query_count() - before;
    record.sorted = true;
    report.voters.push_back(record);
  }
  for (VoterId id : o.voters())
    for (const auto& r : report.voters)
      if (r.voter == id) report.profile.add(Voter{id, r.preference});
  report.total_queries = counter.query_count();
  report.sorts = report.voters.size();
  return report;
}

ElicitationReport naive_elicit_all(QueryOracle& o) { return naive_elicit_all(o, VoterSequence(o.voters())); }

}  // namespace weaksc

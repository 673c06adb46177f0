#include "weaksc/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "weaksc/error.hpp"

namespace weaksc {

using nlohmann::json;

CandidateNames::CandidateNames(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw FormatError("at least one candidate is required");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw FormatError("candidate names must be nonempty");
    if (!seen.insert(n).second) throw FormatError("duplicate candidate name '" + n + "'");
  }
}

CandidateNames CandidateNames::letters(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i)
    names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "c" + std::to_string(i));
  return CandidateNames(std::move(names));
}

Candidate CandidateNames::index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw FormatError("unknown candidate '" + std::string(name) + "'");
}

std::vector<std::string> CandidateNames::render(const Preference& p) const {
  std::vector<std::string> out;
  for (auto c : p.order()) out.push_back(name(c));
  return out;
}

Preference CandidateNames::parse(const std::vector<std::string>& names) const {
  if (names.size() != names_.size())
    throw FormatError("an order must list all " + std::to_string(names_.size()) + " candidates");
  std::vector<Candidate> order;
  for (const auto& n : names) order.push_back(index(n));
  try {
    return Preference(std::move(order));
  } catch (const ArgumentError&) {
    throw FormatError("an order lists some candidate twice");
  }
}

std::string CandidateNames::format(const Preference& p) const {
  const bool compact =
      std::all_of(names_.begin(), names_.end(), [](const std::string& n) { return n.size() == 1; });
  std::string out;
  for (auto c : p.order()) {
    if (!compact && !out.empty()) out += ' ';
    out += name(c);
  }
  return out;
}

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

ProfileDocument parse_json_profile(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("candidates") || !j.contains("voters"))
    throw FormatError("profile JSON needs \"candidates\" and \"voters\"");
  try {
    CandidateNames names(j.at("candidates").get<std::vector<std::string>>());
    Profile profile(names.size());
    for (const auto& v : j.at("voters")) {
      const auto id = v.at("id").get<VoterId>();
      if (profile.contains_voter(id)) throw FormatError("duplicate voter id " + std::to_string(id));
      profile.add(Voter{id, names.parse(v.at("order").get<std::vector<std::string>>())});
    }
    return {std::move(names), std::move(profile)};
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed profile JSON: ") + e.what());
  }
}

ProfileDocument parse_text_profile(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) header = split_words(line);
  if (header.empty()) throw FormatError("empty profile file");
  CandidateNames names(std::move(header));
  Profile profile(names.size());
  VoterId id = 0;
  while (std::getline(in, line)) {
    auto words = split_words(line);
    if (words.empty()) continue;
    profile.add(Voter{id++, names.parse(words)});
  }
  return {std::move(names), std::move(profile)};
}

}  // namespace

ProfileDocument parse_profile(std::string_view text) {
  const auto start = text.find_first_not_of(" \t\r\n");
  if (start != std::string_view::npos && text[start] == '{') return parse_json_profile(text);
  return parse_text_profile(text);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

ProfileDocument read_profile_file(const std::string& path) { return parse_profile(read_text_file(path)); }

json profile_to_json(const CandidateNames& names, const Profile& p) {
  json voters = json::array();
  for (const auto& v : p.voters()) voters.push_back({{"id", v.id}, {"order", names.render(v.preference)}});
  return {{"candidates", names.names()}, {"voters", std::move(voters)}};
}

std::string profile_to_text(const CandidateNames& names, const Profile& p) {
  auto join = [](const std::vector<std::string>& words) {
    std::string line;
    for (const auto& w : words) line += (line.empty() ? "" : " ") + w;
    return line + '\n';
  };
  std::string out = join(names.names());
  for (const auto& v : p.voters()) out += join(names.render(v.preference));
  return out;
}

json tree_to_json(const CandidateNames& names, const VoterTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes()) nodes.push_back({{"voter", n.voter}, {"order", names.render(n.preference)}});
  json edges = json::array();
  for (auto [a, b] : t.edges()) edges.push_back({a, b});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

VoterTree tree_from_json(const CandidateNames& names, const json& j) {
  try {
    std::vector<TreeNode> nodes;
    for (const auto& n : j.at("nodes"))
      nodes.push_back({n.at("voter").get<VoterId>(), names.parse(n.at("order").get<std::vector<std::string>>())});
    std::vector<TreeEdge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("each edge must be a pair of node indices");
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    return VoterTree(std::move(nodes), std::move(edges));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed tree JSON: ") + e.what());
  }
}

VoterTree read_tree_file(const CandidateNames& names, const std::string& path) {
  const auto text = read_text_file(path);
  try {
    return tree_from_json(names, json::parse(text));
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

json closure_witnesses_to_json(const CandidateNames& names, const ClosureResult& c) {
  json added = json::array();
  for (const auto& a : c.added) added.push_back({{"order", names.render(a.preference)}, {"witness", a.witness}});
  return {{"added", std::move(added)}, {"closure_size", c.closure.size()}};
}

json certificate_to_json(const CandidateNames& names, const Certificate& c) {
  if (const auto* f = std::get_if<ClosureFailure>(&c)) {
    json orders = json::array();
    for (const auto& p : f->preferences) orders.push_back(names.render(p));
    json out{{"kind", to_string(f->kind)}, {"orders", std::move(orders)}};
    if (f->kind != ClosureFailure::Kind::oversized) out["witness"] = f->witness;
    return out;
  }
  const auto& none = std::get<NoTree>(c);
  return {{"kind", "no-tree"}, {"reason", to_string(none.reason)}, {"detail", none.detail}};
}

json report_to_json(const CandidateNames& names, const ElicitationReport& r) {
  json voters = json::array();
  for (const auto& v : r.voters)
    voters.push_back({{"voter", v.voter},
                      {"order", names.render(v.preference)},
                      {"queries", v.queries},
                      {"search_queries", v.search_queries},
                      {"searched", v.searched},
                      {"sorted", v.sorted}});
  const std::size_t m = r.profile.candidate_count();
  const std::size_t n = r.voters.size();
  return {{"m", m},
          {"n", n},
          {"total_queries", r.total_queries},
          {"fallback_sorts", r.sorts},
          {"budget", sequential_query_budget(m, n)},
          {"voters", std::move(voters)}};
}

}  // namespace weaksc

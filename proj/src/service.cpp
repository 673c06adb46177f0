#include "weaksc/service.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "weaksc/elicit.hpp"
#include "weaksc/error.hpp"
#include "weaksc/io.hpp"
#include "weaksc/oracle.hpp"
#include "weaksc/recognize.hpp"

namespace weaksc {

using nlohmann::json;

std::string_view ServiceError::code_name() const {
  switch (code_) {
    case Code::validation: return "validation";
    case Code::not_found: return "not-found";
    case Code::conflict: return "conflict";
  }
  return "validation";
}

int ServiceError::http_status() const {
  switch (code_) {
    case Code::validation: return 400;
    case Code::not_found: return 404;
    case Code::conflict: return 409;
  }
  return 400;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string hex64(std::uint64_t x) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << x;
  return out.str();
}

std::string session_id_for(std::uint64_t seed) { return hex64(splitmix64(seed)); }

std::string token_for(std::uint64_t seed, std::uint64_t sequence) {
  return hex64(splitmix64(splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL) + sequence));
}

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

struct SessionManager::Session {
  std::string id;
  std::uint64_t seed;
  CandidateNames names;
  std::size_t n;
  std::string created_at;
  std::string updated_at;
  std::optional<std::filesystem::path> log_path;

  SessionOracle oracle;
  std::thread engine;

  // serializes requests on this session
  std::mutex request_mutex;

  // written by the engine thread, read by request handlers
  mutable std::mutex state_mutex;
  std::vector<VoterRecord> completed;
  std::optional<json> outcome;  // profile, closure and tree once all voters are in
  std::optional<json> failure;

  Session(std::string id_, std::uint64_t seed_, CandidateNames names_, std::size_t n_, std::string created)
      : id(std::move(id_)),
        seed(seed_),
        names(std::move(names_)),
        n(n_),
        created_at(created),
        updated_at(std::move(created)),
        oracle(names.size(), voter_ids(n_)) {}

  ~Session() {
    oracle.close();
    if (engine.joinable()) engine.join();
  }

  static std::vector<VoterId> voter_ids(std::size_t n) {
    std::vector<VoterId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<VoterId>(i);
    return ids;
  }

  void run_engine() {
    ElicitationSession session(oracle);
    try {
      for (std::size_t i = 0; i < n; ++i) {
        const auto& record = session.elicit_next(static_cast<VoterId>(i));
        std::lock_guard lock(state_mutex);
        completed.push_back(record);
      }
      session.check_domain();
      const auto profile = session.profile();
      const auto recognized = recognize_weakly_sc(profile);
      json out{{"profile", profile_to_json(names, profile)}};
      if (recognized.yes()) {
        out["closure"] = profile_to_json(names, recognized.closure->closure);
        out["tree"] = tree_to_json(names, *recognized.tree);
      }
      std::lock_guard lock(state_mutex);
      outcome = std::move(out);
    } catch (const SessionOracle::Closed&) {
      return;
    } catch (const DomainViolation& e) {
      std::lock_guard lock(state_mutex);
      completed = session.records();
      failure = json{{"code", "domain-violation"},
                     {"message", e.what()},
                     {"certificate", certificate_to_json(names, e.certificate())}};
    } catch (const std::exception& e) {
      std::lock_guard lock(state_mutex);
      failure = json{{"code", "internal"}, {"message", e.what()}};
    }
    oracle.finish();
  }

  void append_event(const json& event) const {
    if (!log_path) return;
    std::ofstream out(*log_path, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to event log " + log_path->string());
    out << event.dump() << '\n';
  }

  std::size_t naive_baseline() const { return sort_query_bound(names.size()) * n; }

  json voter_json(const VoterRecord& r) const {
    return {{"voter", r.voter}, {"order", names.render(r.preference)}, {"queries", r.queries}, {"sorted", r.sorted}};
  }

  // Caller holds request_mutex.
  json view() {
    const auto q = oracle.await_question();
    std::lock_guard lock(state_mutex);
    json out{{"id", id},
             {"candidates", names.names()},
             {"expected_voters", n},
             {"voters_completed", completed.size()},
             {"queries", oracle.answered()},
             {"naive_baseline", naive_baseline()},
             {"created", created_at},
             {"updated", updated_at}};
    if (!q) {
      if (failure) {
        out["status"] = "failed";
        out["error"] = *failure;
      } else {
        out["status"] = "all-complete";
      }
      return out;
    }
    out["question"] = {{"token", token_for(seed, q->sequence)},
                       {"sequence", q->sequence},
                       {"voter", q->voter},
                       {"x", names.name(q->x)},
                       {"y", names.name(q->y)}};
    const bool fresh_voter = q->voter > 0 && q->sequence == voter_start_sequence.at(static_cast<std::size_t>(q->voter));
    out["status"] = fresh_voter ? "voter-complete" : "awaiting-answer";
    if (fresh_voter) out["completed"] = voter_json(completed.back());
    return out;
  }

  // sequence of each voter's first question
  std::vector<std::uint64_t> voter_start_sequence;
};

SessionManager::SessionManager(std::optional<std::filesystem::path> state_dir) : state_dir_(std::move(state_dir)) {
  if (state_dir_) std::filesystem::create_directories(*state_dir_);
}

SessionManager::~SessionManager() = default;

std::shared_ptr<SessionManager::Session> SessionManager::start(const std::vector<std::string>& candidates,
                                                               std::size_t n, std::uint64_t seed,
                                                               std::string created_at) {
  auto s = std::make_shared<Session>(session_id_for(seed), seed, CandidateNames(candidates), n, std::move(created_at));
  s->voter_start_sequence.assign(n, 0);
  if (state_dir_) s->log_path = *state_dir_ / (s->id + ".jsonl");
  s->engine = std::thread([raw = s.get()] { raw->run_engine(); });
  return s;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(ServiceError::Code::not_found, "no session '" + id + "'");
  return it->second;
}

json SessionManager::create(const std::vector<std::string>& candidates, std::int64_t expected_voters,
                            std::optional<std::uint64_t> seed) {
  if (candidates.size() < kMinSessionCandidates || candidates.size() > kMaxSessionCandidates)
    throw ServiceError(ServiceError::Code::validation, "candidate count must be between " +
                                                           std::to_string(kMinSessionCandidates) + " and " +
                                                           std::to_string(kMaxSessionCandidates));
  if (expected_voters < 1) throw ServiceError(ServiceError::Code::validation, "expected_voters must be at least 1");
  try {
    CandidateNames check(candidates);
  } catch (const FormatError& e) {
    throw ServiceError(ServiceError::Code::validation, e.what());
  }
  const std::uint64_t s = seed ? *seed : std::random_device{}() * 0x100000000ULL + std::random_device{}();
  const auto n = static_cast<std::size_t>(expected_voters);
  {
    std::lock_guard lock(mutex_);
    if (sessions_.contains(session_id_for(s)))
      throw ServiceError(ServiceError::Code::conflict, "a session with this seed already exists");
  }

  auto session = start(candidates, n, s, now_iso8601());
  if (session->log_path) std::filesystem::remove(*session->log_path);
  session->append_event({{"event", "created"},
                         {"id", session->id},
                         {"candidates", candidates},
                         {"expected_voters", n},
                         {"seed", s},
                         {"at", session->created_at}});
  {
    std::lock_guard lock(mutex_);
    sessions_.emplace(session->id, session);
  }
  std::lock_guard req(session->request_mutex);
  return session->view();
}

json SessionManager::question(const std::string& id) {
  auto s = find(id);
  std::lock_guard req(s->request_mutex);
  return s->view();
}

json SessionManager::answer(const std::string& id, const std::string& token, bool prefers_x) {
  auto s = find(id);
  std::lock_guard req(s->request_mutex);
  const auto q = s->oracle.await_question();
  if (!q) throw ServiceError(ServiceError::Code::conflict, "session has no pending question");
  if (token != token_for(s->seed, q->sequence))
    throw ServiceError(ServiceError::Code::conflict, "token does not match the pending question");

  const std::size_t voter = static_cast<std::size_t>(q->voter);
  s->append_event({{"event", "answer"}, {"sequence", q->sequence}, {"prefers_x", prefers_x}, {"at", now_iso8601()}});
  {
    std::lock_guard lock(s->state_mutex);
    s->updated_at = now_iso8601();
  }
  if (!s->oracle.submit(q->sequence, prefers_x))
    throw ServiceError(ServiceError::Code::conflict, "question was already answered");
  // The next question (if any) belongs to a new voter iff this one completed.
  const auto next = s->oracle.await_question();
  if (next && static_cast<std::size_t>(next->voter) != voter)
    s->voter_start_sequence.at(static_cast<std::size_t>(next->voter)) = next->sequence;
  auto out = s->view();
  out["accepted"] = true;
  return out;
}

json SessionManager::result(const std::string& id) {
  auto s = find(id);
  std::lock_guard req(s->request_mutex);
  auto out = s->view();
  std::lock_guard lock(s->state_mutex);
  json voters = json::array();
  for (const auto& r : s->completed) voters.push_back(s->voter_json(r));
  out["voters"] = std::move(voters);
  if (s->outcome) out.update(*s->outcome);
  return out;
}

std::vector<std::string> SessionManager::session_ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::size_t SessionManager::restore() {
  if (!state_dir_) return 0;
  std::set<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(*state_dir_))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") logs.insert(entry.path());

  std::size_t restored = 0;
  for (const auto& path : logs) {
    std::ifstream in(path);
    std::string line;
    if (!std::getline(in, line)) continue;
    const auto created = json::parse(line);
    if (created.value("event", "") != "created") continue;
    const auto seed = created.at("seed").get<std::uint64_t>();
    {
      std::lock_guard lock(mutex_);
      if (sessions_.contains(session_id_for(seed))) continue;
    }

    auto s = start(created.at("candidates").get<std::vector<std::string>>(),
                   created.at("expected_voters").get<std::size_t>(), seed, created.at("at").get<std::string>());
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto event = json::parse(line);
      if (event.value("event", "") != "answer") continue;
      const auto q = s->oracle.await_question();
      const auto sequence = event.at("sequence").get<std::uint64_t>();
      if (!q || q->sequence != sequence)
        throw FormatError("event log " + path.string() + " does not replay at sequence " + std::to_string(sequence));
      s->updated_at = event.value("at", s->updated_at);
      s->oracle.submit(sequence, event.at("prefers_x").get<bool>());
      const auto next = s->oracle.await_question();
      if (next && next->voter != q->voter)
        s->voter_start_sequence.at(static_cast<std::size_t>(next->voter)) = next->sequence;
    }
    s->oracle.await_question();
    s->log_path = path;
    std::lock_guard lock(mutex_);
    sessions_.emplace(s->id, s);
    ++restored;
  }
  return restored;
}

// HTTP

struct HttpService::Impl {
  SessionManager& sessions;
  httplib::Server server;

  explicit Impl(SessionManager& s) : sessions(s) { routes(); }

  static void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <class F>
  static void guarded(httplib::Response& res, int ok_status, F&& f) {
    try {
      send(res, ok_status, f());
    } catch (const ServiceError& e) {
      send(res, e.http_status(), {{"code", e.code_name()}, {"message", e.what()}});
    } catch (const json::exception& e) {
      send(res, 400, {{"code", "validation"}, {"message", std::string("malformed request: ") + e.what()}});
    } catch (const std::exception& e) {
      send(res, 500, {{"code", "internal"}, {"message", e.what()}});
    }
  }

  static json body_of(const httplib::Request& req) {
    auto body = json::parse(req.body.empty() ? "{}" : req.body);
    if (!body.is_object()) throw ServiceError(ServiceError::Code::validation, "request body must be a JSON object");
    return body;
  }

  void routes() {
    server.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, 201, [&] {
        const auto body = body_of(req);
        if (!body.contains("candidates") || !body["candidates"].is_array())
          throw ServiceError(ServiceError::Code::validation, "\"candidates\" must be an array of names");
        if (!body.contains("expected_voters") || !body["expected_voters"].is_number_integer())
          throw ServiceError(ServiceError::Code::validation, "\"expected_voters\" must be an integer");
        std::optional<std::uint64_t> seed;
        if (body.contains("seed")) seed = body["seed"].get<std::uint64_t>();
        return sessions.create(body["candidates"].get<std::vector<std::string>>(),
                               body["expected_voters"].get<std::int64_t>(), seed);
      });
    });
    server.Get(R"(/sessions/([0-9a-f]+)/question)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, 200, [&] { return sessions.question(req.matches[1]); });
    });
    server.Post(R"(/sessions/([0-9a-f]+)/answer)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, 200, [&] {
        const auto body = body_of(req);
        if (!body.contains("token") || !body["token"].is_string())
          throw ServiceError(ServiceError::Code::validation, "\"token\" must be a string");
        if (!body.contains("prefers_x") || !body["prefers_x"].is_boolean())
          throw ServiceError(ServiceError::Code::validation, "\"prefers_x\" must be a boolean");
        return sessions.answer(req.matches[1], body["token"].get<std::string>(), body["prefers_x"].get<bool>());
      });
    });
    server.Get(R"(/sessions/([0-9a-f]+)/result)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, 200, [&] { return sessions.result(req.matches[1]); });
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty())
        send(res, res.status, {{"code", res.status == 404 ? "not-found" : "validation"},
                               {"message", "no such endpoint"}});
    });
  }
};

HttpService::HttpService(SessionManager& sessions) : impl_(std::make_unique<Impl>(sessions)) {}
HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) return -1;
  return port;
}

void HttpService::listen() { impl_->server.listen_after_bind(); }
void HttpService::stop() { impl_->server.stop(); }
void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace weaksc

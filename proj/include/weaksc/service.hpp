#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace weaksc {

class ServiceError : public std::runtime_error {
 public:
  enum class Code { validation, not_found, conflict };

  ServiceError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }
  /// "validation", "not-found" or "conflict".
  std::string_view code_name() const;
  int http_status() const;

 private:
  Code code_;
};

inline constexpr std::size_t kMinSessionCandidates = 2;
inline constexpr std::size_t kMaxSessionCandidates = 64;

/// Interactive elicitation sessions. Each session runs the sequential
/// elicitor on its own engine thread; requests on one session are serialized.
///
/// With a state directory, every session appends its events to
/// `<dir>/<id>.jsonl` and restore() rebuilds sessions by replaying them.
class SessionManager {
 public:
  explicit SessionManager(std::optional<std::filesystem::path> state_dir = std::nullopt);
  ~SessionManager();

  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  /// Returns the session view. A missing seed is drawn at random; the seed
  /// fixes the session id and the question tokens.
  nlohmann::json create(const std::vector<std::string>& candidates, std::int64_t expected_voters,
                        std::optional<std::uint64_t> seed = std::nullopt);
  nlohmann::json question(const std::string& id);
  nlohmann::json answer(const std::string& id, const std::string& token, bool prefers_x);
  nlohmann::json result(const std::string& id);

  /// Replays every event log in the state directory. Returns the number of
  /// sessions restored.
  std::size_t restore();

  std::vector<std::string> session_ids() const;

  struct Session;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<Session> start(const std::vector<std::string>& candidates, std::size_t n, std::uint64_t seed,
                                 std::string created_at);

  std::optional<std::filesystem::path> state_dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// JSON-over-HTTP front end for a SessionManager.
class HttpService {
 public:
  explicit HttpService(SessionManager& sessions);
  ~HttpService();

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace weaksc

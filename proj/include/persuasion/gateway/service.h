#ifndef PERSUASION_GATEWAY_SERVICE_H_
#define PERSUASION_GATEWAY_SERVICE_H_

#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "persuasion/arena/arena.h"
#include "persuasion/benchkit/instances.h"
#include "persuasion/benchkit/scoring.h"
#include "persuasion/gateway/config.h"

namespace persuasion::gateway {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  // Header names are matched case-insensitively; store them lower-cased.
  std::map<std::string, std::string> headers;
  std::string body;
};

struct Response {
  int status = 200;
  Json body;
};

// Exclusive advisory lock on <dir>/LOCK, held for the object's lifetime.
class DataDirLock {
 public:
  explicit DataDirLock(const std::filesystem::path& dir);
  ~DataDirLock();
  DataDirLock(const DataDirLock&) = delete;
  DataDirLock& operator=(const DataDirLock&) = delete;

 private:
  int fd_ = -1;
};

struct TournamentStatus {
  std::string tournament_id;
  std::string status;  // queued | running | completed | failed | interrupted
  Json request;
  std::int64_t planned = 0;
  std::int64_t completed = 0;
  std::int64_t abandoned = 0;
  std::int64_t first_match_id = 0;
  std::vector<std::string> skipped;
  std::string error;
};

Json ToJson(const TournamentStatus& status);

// Arena state owned by one data directory:
//   players.jsonl      registrations
//   submissions.jsonl  accepted submission bundles
//   tournaments.jsonl  tournament status events
//   matches.jsonl      the global match log (source of truth for ratings)
//   idempotency.jsonl  stored responses keyed by Idempotency-Key
// Opening a directory replays all of them, so a restarted service serves
// the same state. Tournaments run one at a time on a background worker.
class ArenaService {
 public:
  ArenaService(ServiceConfig config, providers::ProviderHandle judge);
  ~ArenaService();
  ArenaService(const ArenaService&) = delete;
  ArenaService& operator=(const ArenaService&) = delete;

  Response Handle(const Request& request);

  // Blocks until no tournament is queued or running.
  void WaitIdle();

  Json Leaderboard(const std::string& task) const;
  arena::RatingTable Ratings() const;
  std::vector<arena::MatchRecord> Matches() const;

 private:
  Response Dispatch(const Request& request);
  Response RegisterPlayer(const Json& body);
  Response AcceptSubmission(const Json& body);
  Response StartTournament(const Json& body);
  Response TournamentInfo(const std::string& id) const;
  Response ListMatches(const Request& request) const;

  void Recover();
  void WorkerLoop();
  void RunOne(const std::string& id);
  void RecordStatus(const TournamentStatus& status);

  ServiceConfig config_;
  providers::ProviderHandle judge_;
  std::unique_ptr<DataDirLock> lock_;
  std::vector<benchkit::TaskInstance> instances_;
  std::set<std::string> instance_ids_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, arena::Player> players_;
  std::vector<std::string> player_order_;
  arena::RatingTable table_;
  std::vector<arena::MatchRecord> log_;
  std::map<std::string, TournamentStatus> tournaments_;
  std::int64_t tournament_seq_ = 0;
  std::map<std::string, Response> idempotent_;
  std::deque<std::string> queue_;
  bool busy_ = false;
  bool stopping_ = false;
  std::thread worker_;
};

// Binds an httplib server to `service` and blocks until Stop().
class HttpServer {
 public:
  explicit HttpServer(ArenaService& service);
  ~HttpServer();

  // Returns the bound port (useful with port 0).
  int Bind(const std::string& host, int port);
  void Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace persuasion::gateway

#endif  // PERSUASION_GATEWAY_SERVICE_H_

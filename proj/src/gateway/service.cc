#include "persuasion/gateway/service.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>

#include "httplib.h"
#include "persuasion/common/errors.h"
#include "persuasion/common/timeutil.h"

namespace persuasion::gateway {
namespace {

constexpr const char* kPlayersFile = "players.jsonl";
constexpr const char* kSubmissionsFile = "submissions.jsonl";
constexpr const char* kTournamentsFile = "tournaments.jsonl";
constexpr const char* kMatchesFile = "matches.jsonl";
constexpr const char* kIdempotencyFile = "idempotency.jsonl";
constexpr std::size_t kMatchPageLimit = 1000;

Response ErrorResponse(int status, const std::string& kind, const std::string& message) {
  return {status, {{"error", kind}, {"message", message}}};
}

std::vector<Json> ReadIfExists(const std::filesystem::path& path) {
  std::vector<Json> out;
  if (!std::filesystem::exists(path)) return out;
  for (auto& line : ReadJsonLinesFile(path)) out.push_back(std::move(line.value));
  return out;
}

std::string TournamentId(std::int64_t seq) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t-%06lld", static_cast<long long>(seq));
  return buf;
}

}  // namespace

DataDirLock::DataDirLock(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / "LOCK";
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw ConfigError("cannot open " + path.string() + ": " + std::strerror(errno));
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw ConfigError("data directory " + dir.string() + " is in use by another service");
  }
}

DataDirLock::~DataDirLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

Json ToJson(const TournamentStatus& t) {
  Json out = {{"tournament_id", t.tournament_id},
              {"status", t.status},
              {"request", t.request},
              {"planned", t.planned},
              {"completed", t.completed},
              {"abandoned", t.abandoned},
              {"first_match_id", t.first_match_id},
              {"skipped", t.skipped}};
  if (!t.error.empty()) out["error"] = t.error;
  return out;
}

namespace {

TournamentStatus StatusFromJson(const Json& j) {
  TournamentStatus t;
  t.tournament_id = j.at("tournament_id").get<std::string>();
  t.status = j.at("status").get<std::string>();
  t.request = j.value("request", Json::object());
  t.planned = j.value("planned", 0);
  t.completed = j.value("completed", 0);
  t.abandoned = j.value("abandoned", 0);
  t.first_match_id = j.value("first_match_id", 0);
  t.skipped = j.value("skipped", std::vector<std::string>{});
  t.error = j.value("error", std::string());
  return t;
}

}  // namespace

ArenaService::ArenaService(ServiceConfig config, providers::ProviderHandle judge)
    : config_(std::move(config)),
      judge_(std::move(judge)),
      lock_(std::make_unique<DataDirLock>(config_.data_dir)),
      table_(config_.initial_rating) {
  if (std::filesystem::exists(config_.InstancesPath())) {
    instances_ = benchkit::ReadInstances(config_.InstancesPath());
  }
  for (const auto& inst : instances_) instance_ids_.insert(inst.instance_id);
  Recover();
  worker_ = std::thread([this] { WorkerLoop(); });
}

ArenaService::~ArenaService() {
  {
    std::lock_guard<std::mutex> g(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

void ArenaService::Recover() {
  const auto& dir = config_.data_dir;
  for (const auto& j : ReadIfExists(dir / kPlayersFile)) {
    arena::Player p = arena::PlayerFromJson(j);
    player_order_.push_back(p.player_id);
    table_.Register(p.player_id);
    players_[p.player_id] = std::move(p);
  }
  for (const auto& j : ReadIfExists(dir / kSubmissionsFile)) {
    benchkit::Submission s = benchkit::SubmissionFromJson(j);
    auto& gens = players_.at(s.player_id).generations;
    for (auto& [id, text] : s.generations) gens[id] = text;
  }
  log_ = arena::ReadMatchLog(dir / kMatchesFile);
  arena::TournamentConfig tc;
  tc.k_factor = config_.k_factor;
  tc.initial_rating = config_.initial_rating;
  table_ = arena::ReplayLog(log_, tc, player_order_);
  for (const auto& j : ReadIfExists(dir / kTournamentsFile)) {
    TournamentStatus t = StatusFromJson(j);
    tournaments_[t.tournament_id] = t;
  }
  tournament_seq_ = static_cast<std::int64_t>(tournaments_.size());
  for (auto& [id, t] : tournaments_) {
    if (t.status == "queued") {
      queue_.push_back(id);
    } else if (t.status == "running") {
      // The process died mid-run; whatever reached the match log stands.
      t.status = "interrupted";
      t.completed = 0;
      for (const auto& m : log_) {
        if (m.match_id >= t.first_match_id) ++t.completed;
      }
      AppendJsonLine(dir / kTournamentsFile, ToJson(t));
    }
  }
  for (const auto& j : ReadIfExists(dir / kIdempotencyFile)) {
    idempotent_[j.at("key").get<std::string>()] = {j.at("status").get<int>(), j.at("body")};
  }
}

Response ArenaService::Handle(const Request& request) {
  if (config_.auth_token) {
    auto it = request.headers.find("authorization");
    if (it == request.headers.end() || it->second != "Bearer " + *config_.auth_token) {
      return ErrorResponse(401, "unauthorized", "missing or invalid bearer token");
    }
  }
  const bool mutating = request.method == "POST";
  std::optional<std::string> key;
  if (mutating) {
    auto it = request.headers.find("idempotency-key");
    if (it != request.headers.end() && !it->second.empty()) {
      key = request.method + " " + request.path + " " + it->second;
    }
  }
  // Mutations are serialized so a retried key cannot race its original.
  static std::mutex mutation_mu;
  std::unique_lock<std::mutex> serial(mutation_mu, std::defer_lock);
  if (mutating) serial.lock();
  if (key) {
    std::lock_guard<std::mutex> g(mu_);
    auto it = idempotent_.find(*key);
    if (it != idempotent_.end()) return it->second;
  }
  Response r;
  try {
    r = Dispatch(request);
  } catch (const Json::exception& e) {
    r = ErrorResponse(400, "bad_request", e.what());
  } catch (const ParseError& e) {
    r = ErrorResponse(400, e.kind(), e.what());
  } catch (const Error& e) {
    r = ErrorResponse(422, e.kind(), e.what());
  }
  if (key && r.status < 500) {
    std::lock_guard<std::mutex> g(mu_);
    AppendJsonLine(config_.data_dir / kIdempotencyFile,
                   {{"key", *key}, {"status", r.status}, {"body", r.body}});
    idempotent_[*key] = r;
  }
  return r;
}

Response ArenaService::Dispatch(const Request& req) {
  const std::string& p = req.path;
  if (req.method == "POST") {
    Json body = req.body.empty() ? Json::object() : Json::parse(req.body);
    if (p == "/players") return RegisterPlayer(body);
    if (p == "/submissions") return AcceptSubmission(body);
    if (p == "/tournaments") return StartTournament(body);
  } else if (req.method == "GET") {
    if (p == "/leaderboard") {
      auto it = req.query.find("task");
      return {200, Leaderboard(it == req.query.end() ? "" : it->second)};
    }
    if (p == "/matches") return ListMatches(req);
    const std::string prefix = "/tournaments/";
    if (p.rfind(prefix, 0) == 0) return TournamentInfo(p.substr(prefix.size()));
  }
  return ErrorResponse(404, "not_found", req.method + " " + p);
}

Response ArenaService::RegisterPlayer(const Json& body) {
  arena::Player p = arena::PlayerFromJson(body);
  std::lock_guard<std::mutex> g(mu_);
  if (players_.count(p.player_id)) {
    return ErrorResponse(409, "conflict", "player '" + p.player_id + "' already registered");
  }
  AppendJsonLine(config_.data_dir / kPlayersFile, arena::ToJson(p));
  player_order_.push_back(p.player_id);
  table_.Register(p.player_id);
  Json out = {{"player_id", p.player_id}, {"kind", arena::ToString(p.kind)}};
  players_[p.player_id] = std::move(p);
  return {201, out};
}

Response ArenaService::AcceptSubmission(const Json& body) {
  benchkit::Submission s = benchkit::SubmissionFromJson(body);
  if (s.created_at.empty()) {
    s.created_at = FormatTimestamp(
        std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
  }
  std::vector<std::string> unknown;
  for (const auto& [id, _] : s.generations) {
    if (!instance_ids_.count(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) {
    return {422, {{"error", "unknown_instances"},
                  {"message", "submission references instances not in the benchmark build"},
                  {"instance_ids", unknown}}};
  }
  std::lock_guard<std::mutex> g(mu_);
  auto it = players_.find(s.player_id);
  if (it == players_.end()) {
    return ErrorResponse(422, "unknown_player", "player '" + s.player_id + "' is not registered");
  }
  if (it->second.kind != arena::PlayerKind::kModel) {
    return ErrorResponse(422, "anchor_player",
                         "anchor player '" + s.player_id + "' takes its text from the dataset");
  }
  AppendJsonLine(config_.data_dir / kSubmissionsFile, benchkit::ToJson(s));
  for (const auto& [id, text] : s.generations) it->second.generations[id] = text;
  return {201, {{"player_id", s.player_id},
                {"task", s.task},
                {"accepted", s.generations.size()},
                {"created_at", s.created_at}}};
}

Response ArenaService::StartTournament(const Json& body) {
  Json request = body;
  // Ratings are one global log, so the update rule is fixed per service.
  if (body.contains("k_factor") || body.contains("initial_rating")) {
    return ErrorResponse(422, "config",
                         "k_factor and initial_rating are fixed by the service configuration");
  }
  arena::TournamentConfigFromJson(body);  // validates
  if (body.contains("task") && !body["task"].is_string()) {
    return ErrorResponse(400, "bad_request", "task must be a string");
  }
  std::string id;
  {
    std::lock_guard<std::mutex> g(mu_);
    id = TournamentId(++tournament_seq_);
    TournamentStatus t;
    t.tournament_id = id;
    t.status = "queued";
    t.request = request;
    tournaments_[id] = t;
    AppendJsonLine(config_.data_dir / kTournamentsFile, ToJson(t));
    queue_.push_back(id);
  }
  cv_.notify_all();
  return {202, {{"tournament_id", id}, {"status", "queued"}}};
}

Response ArenaService::TournamentInfo(const std::string& id) const {
  std::lock_guard<std::mutex> g(mu_);
  auto it = tournaments_.find(id);
  if (it == tournaments_.end()) return ErrorResponse(404, "not_found", "no tournament " + id);
  return {200, ToJson(it->second)};
}

Response ArenaService::ListMatches(const Request& req) const {
  std::int64_t after = 0;
  std::size_t limit = kMatchPageLimit;
  try {
    if (auto it = req.query.find("after"); it != req.query.end()) after = std::stoll(it->second);
    if (auto it = req.query.find("limit"); it != req.query.end()) {
      limit = std::min<std::size_t>(std::stoul(it->second), kMatchPageLimit);
    }
  } catch (const std::exception&) {
    return ErrorResponse(400, "bad_request", "after and limit must be integers");
  }
  std::lock_guard<std::mutex> g(mu_);
  Json matches = Json::array();
  std::int64_t last = after;
  for (const auto& m : log_) {
    if (m.match_id <= after) continue;
    if (matches.size() >= limit) break;
    matches.push_back(arena::ToJson(m));
    last = m.match_id;
  }
  const bool more = !log_.empty() && log_.back().match_id > last;
  return {200, {{"matches", matches}, {"next_after", last}, {"has_more", more}}};
}

Json ArenaService::Leaderboard(const std::string& task) const {
  std::lock_guard<std::mutex> g(mu_);
  return table_.Leaderboard(task);
}

arena::RatingTable ArenaService::Ratings() const {
  std::lock_guard<std::mutex> g(mu_);
  return table_;
}

std::vector<arena::MatchRecord> ArenaService::Matches() const {
  std::lock_guard<std::mutex> g(mu_);
  return log_;
}

void ArenaService::WaitIdle() {
  std::unique_lock<std::mutex> g(mu_);
  cv_.wait(g, [this] { return queue_.empty() && !busy_; });
}

void ArenaService::RecordStatus(const TournamentStatus& t) {
  AppendJsonLine(config_.data_dir / kTournamentsFile, ToJson(t));
  tournaments_[t.tournament_id] = t;
}

void ArenaService::WorkerLoop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock<std::mutex> g(mu_);
      cv_.wait(g, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      busy_ = true;
    }
    RunOne(id);
    {
      std::lock_guard<std::mutex> g(mu_);
      busy_ = false;
    }
    cv_.notify_all();
  }
}

void ArenaService::RunOne(const std::string& id) {
  arena::MatchPlan plan;
  arena::TournamentConfig cfg;
  arena::RunOptions options;
  TournamentStatus status;
  {
    std::lock_guard<std::mutex> g(mu_);
    status = tournaments_.at(id);
    try {
      cfg = arena::TournamentConfigFromJson(status.request);
      cfg.k_factor = config_.k_factor;
      cfg.initial_rating = config_.initial_rating;
      cfg.workers = std::max<std::size_t>(1, config_.workers);
      const std::string task = status.request.value("task", std::string());
      std::vector<benchkit::TaskInstance> pool;
      for (const auto& inst : instances_) {
        if (task.empty() || inst.task == task || inst.task.rfind(task + "-", 0) == 0) {
          pool.push_back(inst);
        }
      }
      std::vector<arena::Player> roster;
      for (const auto& pid : player_order_) roster.push_back(players_.at(pid));
      plan = arena::ScheduleMatches(roster, pool, cfg);
    } catch (const Error& e) {
      status.status = "failed";
      status.error = e.what();
      RecordStatus(status);
      return;
    }
    status.status = "running";
    status.planned = static_cast<std::int64_t>(plan.matches.size());
    status.skipped = plan.skipped;
    status.first_match_id = log_.empty() ? 1 : log_.back().match_id + 1;
    RecordStatus(status);
    options.start = table_;
    options.first_match_id = status.first_match_id;
    options.log_path = config_.data_dir / kMatchesFile;
  }
  // Only this worker appends to the match log, so judging can proceed
  // without holding the state lock.
  try {
    arena::TournamentResult result = arena::RunTournament(plan, *judge_, cfg, options);
    std::lock_guard<std::mutex> g(mu_);
    table_ = result.table;
    log_.insert(log_.end(), result.log.begin(), result.log.end());
    status.status = "completed";
    status.completed = static_cast<std::int64_t>(result.log.size());
    status.abandoned = result.abandoned;
    RecordStatus(status);
  } catch (const std::exception& e) {
    std::lock_guard<std::mutex> g(mu_);
    status.status = "failed";
    status.error = e.what();
    RecordStatus(status);
  }
}

struct HttpServer::Impl {
  ArenaService& service;
  httplib::Server server;
};

namespace {

void Bridge(ArenaService& service, const httplib::Request& in, httplib::Response& out) {
  Request req;
  req.method = in.method;
  req.path = in.path;
  for (const auto& [k, v] : in.params) req.query[k] = v;
  for (const auto& [k, v] : in.headers) {
    std::string lower = k;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    req.headers[lower] = v;
  }
  req.body = in.body;
  Response r = service.Handle(req);
  out.status = r.status;
  out.set_content(r.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(ArenaService& service) : impl_(new Impl{service, {}}) {
  auto handler = [this](const httplib::Request& in, httplib::Response& out) {
    Bridge(impl_->service, in, out);
  };
  impl_->server.Get(R"(/.*)", handler);
  impl_->server.Post(R"(/.*)", handler);
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) {
    throw ConfigError("cannot listen on " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::Listen() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace persuasion::gateway

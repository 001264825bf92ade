#include "persuasion/arena/arena.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "persuasion/arena/elo.h"
#include "persuasion/common/errors.h"
#include "persuasion/common/parallel.h"
#include "persuasion/common/rng.h"
#include "persuasion/common/stats.h"
#include "persuasion/common/timeutil.h"

namespace persuasion::arena {
namespace {

constexpr int kJudgeAttempts = 2;

std::string NowUtc() {
  return FormatTimestamp(
      std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
}

Json RatingPair(const std::pair<double, double>& p) { return Json::array({p.first, p.second}); }

std::pair<double, double> RatingPairFromJson(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

std::string ToString(PlayerKind kind) {
  switch (kind) {
    case PlayerKind::kModel: return "model";
    case PlayerKind::kBaselineT1: return "baseline_t1";
    case PlayerKind::kToplineT2: return "topline_t2";
  }
  return "model";
}

PlayerKind ParsePlayerKind(const std::string& name) {
  if (name == "model") return PlayerKind::kModel;
  if (name == "baseline_t1") return PlayerKind::kBaselineT1;
  if (name == "topline_t2") return PlayerKind::kToplineT2;
  throw ConfigError("unknown player kind '" + name + "'");
}

Json ToJson(const Player& p) {
  return {{"player_id", p.player_id}, {"kind", ToString(p.kind)}, {"generations", p.generations}};
}

Player PlayerFromJson(const Json& j) {
  Player p;
  p.player_id = j.at("player_id").get<std::string>();
  if (p.player_id.empty()) throw ContractError("player_id must be non-empty");
  p.kind = ParsePlayerKind(j.value("kind", std::string("model")));
  if (j.contains("generations")) {
    p.generations = j["generations"].get<std::map<std::string, std::string>>();
  }
  if (p.kind != PlayerKind::kModel && !p.generations.empty()) {
    throw ContractError("anchor player '" + p.player_id + "' cannot carry generations");
  }
  return p;
}

std::vector<Player> ReadPlayers(const std::filesystem::path& path) {
  std::vector<Player> out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(PlayerFromJson(line.value));
    } catch (const Json::exception& e) {
      throw ParseError("player at line " + std::to_string(line.line) + ": " + e.what(),
                       line.line);
    }
  }
  return out;
}

std::optional<std::string> GenerationFor(const Player& player,
                                         const benchkit::TaskInstance& instance) {
  auto meta_text = [&](const char* key) -> std::optional<std::string> {
    if (instance.meta.contains(key) && instance.meta[key].is_string()) {
      return instance.meta[key].get<std::string>();
    }
    return std::nullopt;
  };
  switch (player.kind) {
    case PlayerKind::kBaselineT1: return meta_text("baseline");
    case PlayerKind::kToplineT2: {
      auto t = meta_text("topline");
      if (!t && !instance.references.empty()) t = instance.references.front();
      return t;
    }
    case PlayerKind::kModel: {
      auto it = player.generations.find(instance.instance_id);
      if (it == player.generations.end()) return std::nullopt;
      return it->second;
    }
  }
  return std::nullopt;
}

std::string ToString(MatchOrder order) { return order == MatchOrder::kAB ? "ab" : "ba"; }

MatchOrder ParseMatchOrder(const std::string& name) {
  if (name == "ab") return MatchOrder::kAB;
  if (name == "ba") return MatchOrder::kBA;
  throw ParseError("unknown match order '" + name + "'", 0);
}

Json ToJson(const MatchRecord& r) {
  return {{"match_id", r.match_id},
          {"instance_id", r.instance_id},
          {"task", r.task},
          {"player_a", r.player_a},
          {"player_b", r.player_b},
          {"order", ToString(r.order)},
          {"verdict",
           {{"winner", providers::ToString(r.verdict.winner)},
            {"raw_response", r.verdict.raw_response},
            {"parse_warning", r.verdict.parse_warning}}},
          {"status", r.abandoned ? "abandoned" : "ok"},
          {"pre_ratings", RatingPair(r.pre_ratings)},
          {"post_ratings", RatingPair(r.post_ratings)},
          {"judged_at", r.judged_at}};
}

MatchRecord MatchFromJson(const Json& j) {
  MatchRecord r;
  r.match_id = j.at("match_id").get<std::int64_t>();
  r.instance_id = j.at("instance_id").get<std::string>();
  r.task = j.at("task").get<std::string>();
  r.player_a = j.at("player_a").get<std::string>();
  r.player_b = j.at("player_b").get<std::string>();
  r.order = ParseMatchOrder(j.at("order").get<std::string>());
  const Json& v = j.at("verdict");
  r.verdict.winner = providers::ParseWinner(v.at("winner").get<std::string>());
  r.verdict.raw_response = v.value("raw_response", std::string());
  r.verdict.parse_warning = v.value("parse_warning", false);
  r.abandoned = j.value("status", std::string("ok")) == "abandoned";
  r.pre_ratings = RatingPairFromJson(j.at("pre_ratings"));
  r.post_ratings = RatingPairFromJson(j.at("post_ratings"));
  r.judged_at = j.value("judged_at", std::string());
  return r;
}

std::vector<MatchRecord> ReadMatchLog(const std::filesystem::path& path) {
  std::vector<MatchRecord> out;
  if (!std::filesystem::exists(path)) return out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(MatchFromJson(line.value));
    } catch (const Json::exception& e) {
      throw ParseError("match at line " + std::to_string(line.line) + ": " + e.what(),
                       line.line);
    }
  }
  return out;
}

double ScoreForA(const MatchRecord& r) {
  switch (r.verdict.winner) {
    case providers::Winner::kTie: return 0.5;
    case providers::Winner::kFirst: return r.order == MatchOrder::kAB ? 1.0 : 0.0;
    case providers::Winner::kSecond: return r.order == MatchOrder::kAB ? 0.0 : 1.0;
  }
  return 0.5;
}

std::pair<double, double> UpdateRatings(const MatchRecord& r, double k_factor) {
  if (r.abandoned) return r.pre_ratings;
  return UpdateRatings(r.pre_ratings.first, r.pre_ratings.second, ScoreForA(r), k_factor);
}

void RatingTable::Register(const std::string& player_id) { players_.insert(player_id); }

double RatingTable::Rating(const std::string& task, const std::string& player_id) const {
  auto t = per_task_.find(task);
  if (t == per_task_.end()) return initial_;
  auto p = t->second.find(player_id);
  return p == t->second.end() ? initial_ : p->second.rating;
}

std::int64_t RatingTable::Games(const std::string& task, const std::string& player_id) const {
  auto t = per_task_.find(task);
  if (t == per_task_.end()) return 0;
  auto p = t->second.find(player_id);
  return p == t->second.end() ? 0 : p->second.games;
}

double RatingTable::Average(const std::string& player_id) const {
  std::vector<double> ratings;
  for (const auto& [task, table] : per_task_) {
    auto p = table.find(player_id);
    if (p != table.end()) ratings.push_back(p->second.rating);
  }
  return ratings.empty() ? initial_ : StableMean(ratings);
}

void RatingTable::Apply(const MatchRecord& r) {
  players_.insert(r.player_a);
  players_.insert(r.player_b);
  auto& table = per_task_[r.task];
  auto& a = table.try_emplace(r.player_a, PlayerRating{initial_, 0}).first->second;
  auto& b = table.try_emplace(r.player_b, PlayerRating{initial_, 0}).first->second;
  a.rating = r.post_ratings.first;
  b.rating = r.post_ratings.second;
  if (!r.abandoned) {
    ++a.games;
    ++b.games;
  }
}

std::set<std::string> RatingTable::tasks() const {
  std::set<std::string> out;
  for (const auto& [task, _] : per_task_) out.insert(task);
  return out;
}

Json RatingTable::Leaderboard(const std::string& task) const {
  struct Row {
    std::string id;
    double rating;
    std::int64_t games;
  };
  std::vector<Row> rows;
  for (const auto& id : players_) {
    if (task.empty()) {
      std::int64_t games = 0;
      for (const auto& t : tasks()) games += Games(t, id);
      rows.push_back({id, Average(id), games});
    } else {
      rows.push_back({id, Rating(task, id), Games(task, id)});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    if (x.rating != y.rating) return x.rating > y.rating;
    return x.id < y.id;
  });
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = {{"player_id", r.id}, {"rating", r.rating}, {"games", r.games}};
    if (task.empty()) {
      Json per = Json::object();
      for (const auto& t : tasks()) {
        if (Games(t, r.id) > 0 || per_task_.at(t).count(r.id)) per[t] = Rating(t, r.id);
      }
      row["per_task"] = per;
    }
    out.push_back(std::move(row));
  }
  return out;
}

void TournamentConfig::Validate() const {
  if (!(k_factor > 0.0)) throw ConfigError("k_factor must be positive");
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
}

TournamentConfig TournamentConfigFromJson(const Json& j) {
  TournamentConfig c;
  c.k_factor = j.value("k_factor", c.k_factor);
  c.initial_rating = j.value("initial_rating", c.initial_rating);
  c.rounds = j.value("rounds", c.rounds);
  c.seed = j.value("seed", c.seed);
  c.both_orders = j.value("both_orders", c.both_orders);
  c.instances_per_round = j.value("instances_per_round", c.instances_per_round);
  c.Validate();
  return c;
}

MatchPlan ScheduleMatches(const std::vector<Player>& players,
                          const std::vector<benchkit::TaskInstance>& instances,
                          const TournamentConfig& cfg) {
  cfg.Validate();
  std::vector<const Player*> roster;
  for (const auto& p : players) roster.push_back(&p);
  std::sort(roster.begin(), roster.end(),
            [](auto* a, auto* b) { return a->player_id < b->player_id; });
  for (std::size_t i = 1; i < roster.size(); ++i) {
    if (roster[i]->player_id == roster[i - 1]->player_id) {
      throw ContractError("duplicate player '" + roster[i]->player_id + "'");
    }
  }
  std::vector<const benchkit::TaskInstance*> pool;
  for (const auto& t : instances) pool.push_back(&t);
  std::sort(pool.begin(), pool.end(),
            [](auto* a, auto* b) { return a->instance_id < b->instance_id; });

  struct Unit {
    const benchkit::TaskInstance* inst;
    std::size_t a, b;
  };
  MatchPlan plan;
  std::set<std::string> reported;
  StableRng rng(cfg.seed);
  for (int round = 0; round < cfg.rounds; ++round) {
    std::vector<std::size_t> picks(pool.size());
    std::iota(picks.begin(), picks.end(), 0);
    rng.Shuffle(picks);
    if (cfg.instances_per_round > 0 && cfg.instances_per_round < picks.size()) {
      picks.resize(cfg.instances_per_round);
    }
    std::sort(picks.begin(), picks.end());
    std::vector<Unit> units;
    for (std::size_t pi : picks) {
      const auto* inst = pool[pi];
      for (std::size_t a = 0; a < roster.size(); ++a) {
        for (std::size_t b = a + 1; b < roster.size(); ++b) {
          units.push_back({inst, a, b});
        }
      }
    }
    rng.Shuffle(units);
    for (const Unit& u : units) {
      auto ga = GenerationFor(*roster[u.a], *u.inst);
      auto gb = GenerationFor(*roster[u.b], *u.inst);
      if (!ga || !gb) {
        for (auto [p, g] : {std::pair{roster[u.a], &ga}, std::pair{roster[u.b], &gb}}) {
          std::string msg = u.inst->instance_id + ": " + p->player_id + " has no generation";
          if (!*g && reported.insert(msg).second) plan.skipped.push_back(msg);
        }
        continue;
      }
      ScheduledMatch m{u.inst->instance_id, u.inst->task, u.inst->prompt,
                       roster[u.a]->player_id, roster[u.b]->player_id, MatchOrder::kAB,
                       *ga, *gb};
      bool ab_first = (rng.Next() & 1) == 0;
      if (cfg.both_orders) {
        m.order = ab_first ? MatchOrder::kAB : MatchOrder::kBA;
        plan.matches.push_back(m);
        m.order = ab_first ? MatchOrder::kBA : MatchOrder::kAB;
        plan.matches.push_back(m);
      } else {
        m.order = ab_first ? MatchOrder::kAB : MatchOrder::kBA;
        plan.matches.push_back(m);
      }
    }
  }
  return plan;
}

TournamentResult RunTournament(const MatchPlan& plan, providers::ProviderClient& judge,
                               const TournamentConfig& cfg, const RunOptions& options) {
  cfg.Validate();
  const std::size_t n = plan.matches.size();
  std::vector<std::optional<providers::JudgeVerdict>> verdicts(n);
  std::vector<std::string> stamps(n);
  ParallelFor(n, cfg.workers, [&](std::size_t i) {
    const auto& m = plan.matches[i];
    const bool ab = m.order == MatchOrder::kAB;
    for (int attempt = 0; attempt < kJudgeAttempts && !verdicts[i]; ++attempt) {
      try {
        verdicts[i] = providers::JudgePair(m.prompt, ab ? m.text_a : m.text_b,
                                           ab ? m.text_b : m.text_a, judge);
      } catch (const TransportError&) {
        verdicts[i].reset();
      }
    }
    stamps[i] = options.clock ? options.clock() : NowUtc();
  });

  TournamentResult result{options.start ? *options.start : RatingTable(cfg.initial_rating),
                          {}, 0};
  std::int64_t next_id = options.first_match_id;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = plan.matches[i];
    MatchRecord r;
    r.match_id = next_id++;
    r.instance_id = m.instance_id;
    r.task = m.task;
    r.player_a = m.player_a;
    r.player_b = m.player_b;
    r.order = m.order;
    r.judged_at = stamps[i];
    r.pre_ratings = {result.table.Rating(m.task, m.player_a),
                     result.table.Rating(m.task, m.player_b)};
    if (verdicts[i]) {
      r.verdict = *verdicts[i];
    } else {
      r.abandoned = true;
      r.verdict.raw_response = "judge unavailable";
      ++result.abandoned;
    }
    r.post_ratings = UpdateRatings(r, cfg.k_factor);
    if (options.log_path) AppendJsonLine(*options.log_path, ToJson(r));
    result.table.Apply(r);
    result.log.push_back(std::move(r));
  }
  return result;
}

RatingTable ReplayLog(const std::vector<MatchRecord>& log, const TournamentConfig& cfg,
                      const std::vector<std::string>& players) {
  RatingTable table(cfg.initial_rating);
  for (const auto& p : players) table.Register(p);
  std::int64_t expected = 1;
  for (const auto& r : log) {
    if (r.match_id != expected) {
      throw IntegrityError("match log gap: expected id " + std::to_string(expected) +
                               ", found " + std::to_string(r.match_id),
                           r.match_id);
    }
    ++expected;
    std::pair<double, double> pre = {table.Rating(r.task, r.player_a),
                                     table.Rating(r.task, r.player_b)};
    if (pre != r.pre_ratings) {
      throw IntegrityError("match " + std::to_string(r.match_id) +
                               ": recorded pre_ratings disagree with replay",
                           r.match_id);
    }
    if (UpdateRatings(r, cfg.k_factor) != r.post_ratings) {
      throw IntegrityError("match " + std::to_string(r.match_id) +
                               ": recorded post_ratings disagree with replay",
                           r.match_id);
    }
    table.Apply(r);
  }
  return table;
}

std::vector<BradleyTerryEstimate> FitBradleyTerry(const std::vector<MatchRecord>& log,
                                                  const std::string& task,
                                                  double initial_rating, int max_iterations) {
  std::map<std::string, std::size_t> index;
  for (const auto& r : log) {
    if (r.abandoned || (!task.empty() && r.task != task)) continue;
    index.try_emplace(r.player_a, 0);
    index.try_emplace(r.player_b, 0);
  }
  std::vector<std::string> ids;
  for (auto& [id, i] : index) {
    i = ids.size();
    ids.push_back(id);
  }
  const std::size_t n = ids.size();
  if (n == 0) return {};
  // Virtual reference player at index n with fixed strength 1.
  std::vector<std::vector<double>> games(n + 1, std::vector<double>(n + 1, 0.0));
  std::vector<double> wins(n + 1, 0.0);
  std::vector<std::int64_t> played(n, 0);
  for (const auto& r : log) {
    if (r.abandoned || (!task.empty() && r.task != task)) continue;
    std::size_t a = index[r.player_a], b = index[r.player_b];
    double s = ScoreForA(r);
    games[a][b] += 1.0;
    games[b][a] += 1.0;
    wins[a] += s;
    wins[b] += 1.0 - s;
    ++played[a];
    ++played[b];
  }
  for (std::size_t i = 0; i < n; ++i) {
    games[i][n] += 1.0;
    games[n][i] += 1.0;
    wins[i] += 0.5;
  }
  std::vector<double> p(n + 1, 1.0);
  for (int it = 0; it < max_iterations; ++it) {
    double change = 0.0;
    std::vector<double> next(p);
    for (std::size_t i = 0; i < n; ++i) {
      StableSum denom;
      for (std::size_t j = 0; j <= n; ++j) {
        if (games[i][j] > 0.0) denom.Add(games[i][j] / (p[i] + p[j]));
      }
      next[i] = wins[i] / denom.Value();
    }
    for (std::size_t i = 0; i < n; ++i) {
      change = std::max(change, std::fabs(std::log(next[i]) - std::log(p[i])));
    }
    p = std::move(next);
    if (change < 1e-12) break;
  }
  // Centre on the geometric mean of the real players.
  StableSum log_sum;
  for (std::size_t i = 0; i < n; ++i) log_sum.Add(std::log(p[i]));
  const double centre = log_sum.Value() / static_cast<double>(n);
  const double scale = 400.0 / std::log(10.0);
  std::vector<BradleyTerryEstimate> out;
  for (std::size_t i = 0; i < n; ++i) {
    StableSum info;
    for (std::size_t j = 0; j <= n; ++j) {
      if (games[i][j] > 0.0) {
        info.Add(games[i][j] * p[i] * p[j] / ((p[i] + p[j]) * (p[i] + p[j])));
      }
    }
    double se = info.Value() > 0.0 ? scale / std::sqrt(info.Value()) : 0.0;
    out.push_back({ids[i], initial_rating + scale * (std::log(p[i]) - centre), se, played[i]});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.rating != y.rating) return x.rating > y.rating;
    return x.player_id < y.player_id;
  });
  return out;
}

Json ToJson(const std::vector<BradleyTerryEstimate>& estimates) {
  Json out = Json::array();
  for (const auto& e : estimates) {
    out.push_back({{"player_id", e.player_id},
                   {"rating", e.rating},
                   {"std_error", e.std_error},
                   {"games", e.games}});
  }
  return out;
}

}  // namespace persuasion::arena

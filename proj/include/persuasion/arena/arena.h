#ifndef PERSUASION_ARENA_ARENA_H_
#define PERSUASION_ARENA_ARENA_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "persuasion/benchkit/instances.h"
#include "persuasion/common/jsonl.h"
#include "persuasion/providers/operations.h"

namespace persuasion::arena {

enum class PlayerKind { kModel, kBaselineT1, kToplineT2 };
std::string ToString(PlayerKind kind);
PlayerKind ParsePlayerKind(const std::string& name);

struct Player {
  std::string player_id;
  PlayerKind kind = PlayerKind::kModel;
  // Model players only: instance_id -> generation.
  std::map<std::string, std::string> generations;
};

Json ToJson(const Player& player);
Player PlayerFromJson(const Json& j);
std::vector<Player> ReadPlayers(const std::filesystem::path& path);

// Anchors read the instance's "baseline"/"topline" meta fields; models read
// their own generations.
std::optional<std::string> GenerationFor(const Player& player,
                                         const benchkit::TaskInstance& instance);

enum class MatchOrder { kAB, kBA };
std::string ToString(MatchOrder order);
MatchOrder ParseMatchOrder(const std::string& name);

struct MatchRecord {
  std::int64_t match_id = 0;
  std::string instance_id;
  std::string task;
  std::string player_a;
  std::string player_b;
  // kAB shows player_a's text as option A; kBA shows player_b's first.
  MatchOrder order = MatchOrder::kAB;
  providers::JudgeVerdict verdict;
  bool abandoned = false;
  std::pair<double, double> pre_ratings{0.0, 0.0};
  std::pair<double, double> post_ratings{0.0, 0.0};
  std::string judged_at;
};

Json ToJson(const MatchRecord& record);
MatchRecord MatchFromJson(const Json& j);
std::vector<MatchRecord> ReadMatchLog(const std::filesystem::path& path);

// Score of player_a implied by the verdict and display order.
double ScoreForA(const MatchRecord& record);

// Post-match ratings of `record` from its pre_ratings and verdict.
std::pair<double, double> UpdateRatings(const MatchRecord& record, double k_factor);

struct PlayerRating {
  double rating = 0.0;
  std::int64_t games = 0;
  friend bool operator==(const PlayerRating&, const PlayerRating&) = default;
};

// Elo state per task. Players unseen in a task sit at the initial rating.
class RatingTable {
 public:
  explicit RatingTable(double initial_rating = 1000.0) : initial_(initial_rating) {}

  void Register(const std::string& player_id);
  double Rating(const std::string& task, const std::string& player_id) const;
  std::int64_t Games(const std::string& task, const std::string& player_id) const;
  // Arithmetic mean of the player's per-task ratings; initial when the
  // player has none.
  double Average(const std::string& player_id) const;
  // Sets both players' ratings to the record's post_ratings.
  void Apply(const MatchRecord& record);

  double initial_rating() const { return initial_; }
  const std::set<std::string>& players() const { return players_; }
  std::set<std::string> tasks() const;

  // Sorted by rating (task rating, or average when `task` is empty)
  // descending, then player_id.
  Json Leaderboard(const std::string& task = "") const;

  friend bool operator==(const RatingTable&, const RatingTable&) = default;

 private:
  double initial_;
  std::set<std::string> players_;
  std::map<std::string, std::map<std::string, PlayerRating>> per_task_;
};

struct TournamentConfig {
  double k_factor = 4.0;
  double initial_rating = 1000.0;
  int rounds = 1;
  std::uint64_t seed = 0;
  bool both_orders = true;
  // Instances sampled per round; 0 takes all of them.
  std::size_t instances_per_round = 0;
  std::size_t workers = 1;

  // ConfigError unless k_factor > 0 and rounds >= 1.
  void Validate() const;
};

TournamentConfig TournamentConfigFromJson(const Json& j);

struct ScheduledMatch {
  std::string instance_id;
  std::string task;
  std::string prompt;
  std::string player_a;
  std::string player_b;
  MatchOrder order = MatchOrder::kAB;
  std::string text_a;  // player_a's generation
  std::string text_b;
};

struct MatchPlan {
  std::vector<ScheduledMatch> matches;
  // "<instance>: <player> has no generation" for each skipped pairing.
  std::vector<std::string> skipped;
};

// Per round: every player pair (by id) on every sampled instance, pairings
// shuffled with a seeded generator; with both_orders each comparison is
// issued as an adjacent ab/ba twin whose inner order is drawn at random,
// otherwise once in a random order.
MatchPlan ScheduleMatches(const std::vector<Player>& players,
                          const std::vector<benchkit::TaskInstance>& instances,
                          const TournamentConfig& cfg);

struct TournamentResult {
  RatingTable table;
  std::vector<MatchRecord> log;
  std::int64_t abandoned = 0;
};

struct RunOptions {
  // Append-only log; each record is written before its update is applied.
  std::optional<std::filesystem::path> log_path;
  // Ratings and next id to continue from; defaults to a fresh table and 1.
  std::optional<RatingTable> start;
  std::int64_t first_match_id = 1;
  std::function<std::string()> clock;  // judged_at; empty uses UTC now
};

// Judges (concurrently, cfg.workers) and then applies results strictly in
// match_id order. A judge TransportError leaves the match abandoned with no
// rating change.
TournamentResult RunTournament(const MatchPlan& plan, providers::ProviderClient& judge,
                               const TournamentConfig& cfg, const RunOptions& options = {});

// Recomputes the table from a log. IntegrityError naming the first match_id
// that breaks the id sequence (starting at 1) or whose pre/post ratings
// disagree with the recomputation. `players` are registered up front.
RatingTable ReplayLog(const std::vector<MatchRecord>& log, const TournamentConfig& cfg,
                      const std::vector<std::string>& players = {});

struct BradleyTerryEstimate {
  std::string player_id;
  double rating = 0.0;      // Elo scale, centred on initial_rating
  double std_error = 0.0;   // Elo points
  std::int64_t games = 0;
};

// Maximum-likelihood strengths by the MM iteration over non-abandoned
// matches (ties count half a win to each side), with one virtual tie per
// player against a reference of average strength to keep estimates finite.
// Empty `task` pools all tasks. Sorted by rating descending.
std::vector<BradleyTerryEstimate> FitBradleyTerry(const std::vector<MatchRecord>& log,
                                                  const std::string& task = "",
                                                  double initial_rating = 1000.0,
                                                  int max_iterations = 10000);

Json ToJson(const std::vector<BradleyTerryEstimate>& estimates);

}  // namespace persuasion::arena

#endif  // PERSUASION_ARENA_ARENA_H_

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "persuasion/arena/arena.h"
#include "persuasion/arena/elo.h"
#include "persuasion/arena/loop.h"
#include "persuasion/benchkit/metrics.h"
#include "persuasion/common/hashing.h"
#include "oracles/arena_sim.h"
#include "test_support.h"

namespace persuasion::arena {
namespace {

using benchkit::TaskInstance;
using oracles::Simulate;
using oracles::StrengthJudge;

TaskInstance Instance(const std::string& id, const std::string& task = "TS-GT-Ref") {
  TaskInstance t;
  t.instance_id = id;
  t.task = task;
  t.prompt = "improve this post";
  t.references = {"topline " + id};
  t.meta = {{"baseline", "baseline " + id}, {"topline", "topline " + id}};
  return t;
}

Player Model(const std::string& id, const std::vector<TaskInstance>& instances,
             const std::string& prefix) {
  Player p{id, PlayerKind::kModel, {}};
  for (const auto& t : instances) p.generations[t.instance_id] = prefix + " " + t.instance_id;
  return p;
}

std::vector<TaskInstance> Instances(int n, const std::string& task = "TS-GT-Ref") {
  std::vector<TaskInstance> out;
  for (int i = 0; i < n; ++i) out.push_back(Instance("i" + std::to_string(100 + i), task));
  return out;
}

// ---- Elo ----------------------------------------------------------------------

TEST(Elo, ExpectedScoreExamples) {
  EXPECT_DOUBLE_EQ(ExpectedScore(1000, 1000), 0.5);
  EXPECT_NEAR(ExpectedScore(1100, 1000), 0.6401, 5e-4);
  EXPECT_NEAR(ExpectedScore(600, 1000), 1.0 / 11.0, 1e-4);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> r(0, 3000);
  for (int i = 0; i < 1000; ++i) {
    double a = r(rng), b = r(rng);
    EXPECT_NEAR(ExpectedScore(a, b) + ExpectedScore(b, a), 1.0, 1e-15);
    EXPECT_GT(ExpectedScore(a, b), 0.0);
    EXPECT_LT(ExpectedScore(a, b), 1.0);
  }
}

TEST(Elo, UpdateExamples) {
  auto [a, b] = UpdateRatings(1000, 1000, 1.0, 32);
  EXPECT_DOUBLE_EQ(a, 1016);
  EXPECT_DOUBLE_EQ(b, 984);
  auto [c, d] = UpdateRatings(1000, 1000, 0.5, 32);
  EXPECT_DOUBLE_EQ(c, 1000);
  EXPECT_DOUBLE_EQ(d, 1000);
  auto [e, f] = UpdateRatings(1100, 1000, 1.0, 32);
  EXPECT_NEAR(e, 1111.5, 0.05);
  EXPECT_NEAR(e + f, 2100, 1e-9);
}

TEST(Elo, MatchRecordScoreFollowsDisplayOrder) {
  MatchRecord m;
  m.verdict.winner = providers::Winner::kFirst;
  m.order = MatchOrder::kAB;
  EXPECT_EQ(ScoreForA(m), 1.0);
  m.order = MatchOrder::kBA;
  EXPECT_EQ(ScoreForA(m), 0.0);
  m.verdict.winner = providers::Winner::kTie;
  EXPECT_EQ(ScoreForA(m), 0.5);
  m.pre_ratings = {1000, 1000};
  m.abandoned = true;
  m.verdict.winner = providers::Winner::kFirst;
  EXPECT_EQ(UpdateRatings(m, 4), (std::pair<double, double>{1000, 1000}));
}

// ---- players ------------------------------------------------------------------

TEST(Players, AnchorsReadDatasetText) {
  auto t = Instance("x");
  Player base{"t1", PlayerKind::kBaselineT1, {}};
  Player top{"t2", PlayerKind::kToplineT2, {}};
  EXPECT_EQ(GenerationFor(base, t), "baseline x");
  EXPECT_EQ(GenerationFor(top, t), "topline x");
  t.meta.erase("topline");
  EXPECT_EQ(GenerationFor(top, t), "topline x");
  Player m{"m", PlayerKind::kModel, {}};
  EXPECT_EQ(GenerationFor(m, t), std::nullopt);
  EXPECT_THROW(PlayerFromJson({{"player_id", "a"}, {"kind", "baseline_t1"},
                               {"generations", {{"x", "text"}}}}),
               ContractError);
  auto round = PlayerFromJson(ToJson(Model("m", {t}, "gen")));
  EXPECT_EQ(round.generations.at("x"), "gen x");
}

// ---- scheduling ---------------------------------------------------------------

TEST(Schedule, RoundRobinCounts) {
  auto inst = Instances(1);
  std::vector<Player> three = {Model("a", inst, "A"), Model("b", inst, "B"),
                               Model("c", inst, "C")};
  TournamentConfig cfg;
  auto plan = ScheduleMatches(three, inst, cfg);
  EXPECT_EQ(plan.matches.size(), 6u);
  std::map<std::pair<std::string, std::string>, std::set<MatchOrder>> orders;
  for (const auto& m : plan.matches) orders[{m.player_a, m.player_b}].insert(m.order);
  EXPECT_EQ(orders.size(), 3u);
  for (const auto& [k, v] : orders) EXPECT_EQ(v.size(), 2u);

  auto five = Instances(5);
  cfg.both_orders = false;
  auto single = ScheduleMatches({Model("a", five, "A"), Model("b", five, "B")}, five, cfg);
  EXPECT_EQ(single.matches.size(), 5u);
}

TEST(Schedule, DeterministicAndTwinsAdjacent) {
  auto inst = Instances(4);
  std::vector<Player> players = {Model("a", inst, "A"), Model("b", inst, "B"),
                                 Model("c", inst, "C"), Player{"t1", PlayerKind::kBaselineT1, {}}};
  TournamentConfig cfg;
  cfg.rounds = 3;
  cfg.seed = 11;
  auto x = ScheduleMatches(players, inst, cfg);
  auto y = ScheduleMatches(players, inst, cfg);
  ASSERT_EQ(x.matches.size(), 3u * 4u * 6u * 2u);
  for (std::size_t i = 0; i < x.matches.size(); ++i) {
    EXPECT_EQ(x.matches[i].instance_id, y.matches[i].instance_id);
    EXPECT_EQ(x.matches[i].player_a, y.matches[i].player_a);
    EXPECT_EQ(x.matches[i].order, y.matches[i].order);
  }
  for (std::size_t i = 0; i < x.matches.size(); i += 2) {
    EXPECT_EQ(x.matches[i].instance_id, x.matches[i + 1].instance_id);
    EXPECT_EQ(x.matches[i].player_a, x.matches[i + 1].player_a);
    EXPECT_NE(x.matches[i].order, x.matches[i + 1].order);
  }
  cfg.seed = 12;
  auto z = ScheduleMatches(players, inst, cfg);
  bool differs = false;
  for (std::size_t i = 0; i < x.matches.size(); ++i) {
    differs |= x.matches[i].instance_id != z.matches[i].instance_id ||
               x.matches[i].order != z.matches[i].order;
  }
  EXPECT_TRUE(differs);
}

TEST(Schedule, MissingGenerationSkipsPairing) {
  auto inst = Instances(2);
  auto partial = Model("p", {inst[0]}, "P");
  auto plan = ScheduleMatches({Model("a", inst, "A"), partial}, inst, TournamentConfig{});
  EXPECT_EQ(plan.matches.size(), 2u);
  ASSERT_EQ(plan.skipped.size(), 1u);
  EXPECT_NE(plan.skipped[0].find("p has no generation"), std::string::npos);
}

TEST(Schedule, ConfigValidation) {
  TournamentConfig cfg;
  cfg.k_factor = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = TournamentConfig{};
  cfg.rounds = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  auto parsed = TournamentConfigFromJson({{"k_factor", 8}, {"rounds", 3}, {"seed", 5}});
  EXPECT_EQ(parsed.k_factor, 8);
  EXPECT_EQ(parsed.rounds, 3);
  EXPECT_TRUE(parsed.both_orders);
}

// ---- tournaments --------------------------------------------------------------

TEST(Tournament, ContentPreferringJudgeRanksWinnerFirst) {
  auto inst = Instances(12);
  std::vector<Player> players = {Model("good", inst, "s=400"), Model("weak", inst, "s=0")};
  auto judge = testing::MockProvider(providers::Role::kJudge, [](const Json& req) {
    bool a_good = req.at("payload").at("option_a").get<std::string>().rfind("s=400", 0) == 0;
    return Json{{"text", a_good ? "A" : "B"}};
  });
  TournamentConfig cfg;
  auto r = RunTournament(ScheduleMatches(players, inst, cfg), *judge, cfg);
  EXPECT_EQ(r.log.size(), 24u);
  EXPECT_GT(r.table.Rating("TS-GT-Ref", "good"), r.table.Rating("TS-GT-Ref", "weak"));
  EXPECT_EQ(r.table.Games("TS-GT-Ref", "good"), 24);
}

TEST(Tournament, PositionalJudgeStaysWithinK) {
  auto inst = Instances(30);
  std::vector<Player> players;
  for (int i = 0; i < 8; ++i) players.push_back(Model("m" + std::to_string(i), inst, "x"));
  auto first = testing::NamedMock(providers::Role::kJudge, "first");
  TournamentConfig cfg;
  cfg.rounds = 3;
  cfg.seed = 5;
  auto r = RunTournament(ScheduleMatches(players, inst, cfg), *first, cfg);
  for (const auto& p : players) {
    EXPECT_NEAR(r.table.Rating("TS-GT-Ref", p.player_id), 1000.0, cfg.k_factor) << p.player_id;
  }
}

TEST(Tournament, SimulatedStrengthsAreRecovered) {
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto sim = Simulate(seed);
    good += sim.spearman >= 0.95;
    EXPECT_NEAR(sim.rating_sum, 8000.0, 1e-6);
  }
  EXPECT_GE(good, 19);
}

TEST(BradleyTerry, FitRecoversSimulatedOrdering) {
  auto sim = Simulate(5);
  auto bt = FitBradleyTerry(sim.log);
  ASSERT_EQ(bt.size(), 8u);
  std::vector<double> fitted(8);
  double mean = 0;
  for (const auto& e : bt) {
    fitted[std::stoi(e.player_id.substr(1))] = e.rating;
    mean += e.rating / bt.size();
    EXPECT_GT(e.std_error, 0.0);
    EXPECT_EQ(e.games, 200 * 7 * 2);
  }
  for (std::size_t i = 1; i < bt.size(); ++i) EXPECT_GE(bt[i - 1].rating, bt[i].rating);
  EXPECT_NEAR(mean, 1000.0, 1e-6);
  EXPECT_GE(benchkit::Spearman(fitted, sim.strengths), 0.95);
  // Fitted gaps track the true gaps.
  auto hi = std::max_element(sim.strengths.begin(), sim.strengths.end()) - sim.strengths.begin();
  auto lo = std::min_element(sim.strengths.begin(), sim.strengths.end()) - sim.strengths.begin();
  EXPECT_NEAR(fitted[hi] - fitted[lo], sim.strengths[hi] - sim.strengths[lo], 80.0);
}

TEST(Tournament, RatingSumConservedPerTask) {
  std::vector<TaskInstance> inst = Instances(3, "TS-GT-Ref");
  for (const auto& t : Instances(3, "TC")) {
    auto copy = t;
    copy.instance_id = "tc" + t.instance_id;
    inst.push_back(copy);
  }
  std::vector<Player> players = {Model("a", inst, "s=100"), Model("b", inst, "s=0"),
                                 Player{"t1", PlayerKind::kBaselineT1, {}},
                                 Player{"t2", PlayerKind::kToplineT2, {}}};
  auto judge = testing::NamedMock(providers::Role::kJudge, "longer");
  TournamentConfig cfg;
  cfg.rounds = 4;
  auto r = RunTournament(ScheduleMatches(players, inst, cfg), *judge, cfg);
  EXPECT_EQ(r.table.tasks(), (std::set<std::string>{"TC", "TS-GT-Ref"}));
  for (const auto& task : r.table.tasks()) {
    double sum = 0;
    for (const auto& p : players) sum += r.table.Rating(task, p.player_id);
    EXPECT_NEAR(sum, 4000.0, 1e-9) << task;
  }
  auto board = r.table.Leaderboard();
  ASSERT_EQ(board.size(), 4u);
  for (std::size_t i = 1; i < board.size(); ++i) {
    EXPECT_GE(board[i - 1]["rating"].get<double>(), board[i]["rating"].get<double>());
  }
  for (const auto& row : board) {
    double avg = (row["per_task"]["TC"].get<double>() + row["per_task"]["TS-GT-Ref"].get<double>()) / 2;
    EXPECT_NEAR(row["rating"].get<double>(), avg, 1e-9);
  }
}

TEST(Tournament, TransportFailureAbandonsAfterRetry) {
  auto inst = Instances(2);
  int calls = 0;
  std::mutex mu;
  auto flaky = testing::MockProvider(providers::Role::kJudge, [&](const Json&) -> Json {
    std::lock_guard<std::mutex> lock(mu);
    ++calls;
    throw TransportError("judge down", 1);
  });
  TournamentConfig cfg;
  auto r = RunTournament(ScheduleMatches({Model("a", inst, "A"), Model("b", inst, "B")}, inst, cfg),
                         *flaky, cfg);
  EXPECT_EQ(r.abandoned, 4);
  EXPECT_EQ(calls, 8);
  EXPECT_EQ(r.table.Rating("TS-GT-Ref", "a"), 1000.0);
  for (const auto& m : r.log) {
    EXPECT_TRUE(m.abandoned);
    EXPECT_EQ(m.pre_ratings, m.post_ratings);
  }
}

TEST(Tournament, LogPersistedAndReplayIsExact) {
  testing::TempDir dir;
  auto inst = Instances(5);
  std::vector<Player> players = {Model("a", inst, "s=50"), Model("b", inst, "s=0"),
                                 Model("c", inst, "s=120")};
  TournamentConfig cfg;
  cfg.rounds = 4;
  cfg.seed = 8;
  cfg.workers = 3;
  RunOptions opts;
  opts.log_path = dir / "matches.jsonl";
  opts.clock = [] { return std::string("2024-01-01T00:00:00Z"); };
  auto judge = StrengthJudge(4);
  auto r = RunTournament(ScheduleMatches(players, inst, cfg), *judge, cfg, opts);
  auto log = ReadMatchLog(dir / "matches.jsonl");
  ASSERT_EQ(log.size(), r.log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    EXPECT_EQ(log[i].match_id, static_cast<std::int64_t>(i + 1));
    EXPECT_EQ(ToJson(log[i]).dump(), ToJson(r.log[i]).dump());
  }
  auto replayed = ReplayLog(log, cfg, {"a", "b", "c"});
  EXPECT_TRUE(replayed == r.table);
  EXPECT_EQ(replayed.Leaderboard().dump(), r.table.Leaderboard().dump());

  auto empty = ReplayLog({}, cfg, {"a", "b"});
  EXPECT_EQ(empty.Average("a"), 1000.0);

  auto tampered = log;
  tampered[6].post_ratings.first += 0.25;
  try {
    ReplayLog(tampered, cfg);
    FAIL() << "expected IntegrityError";
  } catch (const IntegrityError& e) {
    EXPECT_EQ(e.match_id(), 7);
  }
  auto gap = log;
  gap.erase(gap.begin() + 3);
  try {
    ReplayLog(gap, cfg);
    FAIL() << "expected IntegrityError";
  } catch (const IntegrityError& e) {
    EXPECT_EQ(e.match_id(), 5);
  }
}

TEST(Tournament, ContinuesFromStartTable) {
  auto inst = Instances(3);
  std::vector<Player> players = {Model("a", inst, "s=50"), Model("b", inst, "s=0")};
  TournamentConfig cfg;
  auto judge = StrengthJudge(1);
  auto first = RunTournament(ScheduleMatches(players, inst, cfg), *judge, cfg);
  RunOptions opts;
  opts.start = first.table;
  opts.first_match_id = static_cast<std::int64_t>(first.log.size()) + 1;
  cfg.seed = 2;
  auto second = RunTournament(ScheduleMatches(players, inst, cfg), *judge, cfg, opts);
  auto log = first.log;
  log.insert(log.end(), second.log.begin(), second.log.end());
  EXPECT_TRUE(ReplayLog(log, cfg) == second.table);
}

TEST(BradleyTerry, SymmetricRecordGivesEqualRatings) {
  std::vector<MatchRecord> log;
  for (int i = 0; i < 10; ++i) {
    MatchRecord m;
    m.match_id = i + 1;
    m.task = "T";
    m.player_a = "x";
    m.player_b = "y";
    m.order = i % 2 ? MatchOrder::kAB : MatchOrder::kBA;
    m.verdict.winner = providers::Winner::kFirst;
    log.push_back(m);
  }
  auto bt = FitBradleyTerry(log, "T");
  ASSERT_EQ(bt.size(), 2u);
  EXPECT_NEAR(bt[0].rating, 1000.0, 1e-6);
  EXPECT_NEAR(bt[1].rating, 1000.0, 1e-6);
  EXPECT_EQ(bt[0].games, 10);
  EXPECT_TRUE(FitBradleyTerry(log, "other").empty());
}

// ---- iterative improvement --------------------------------------------------------

LoopResult RunLoop(std::vector<std::string> verdicts, int k, int max_turns = 10) {
  auto generator = testing::NamedMock(providers::Role::kGenerator, "echo");
  auto judge = testing::ScriptedJudge(std::move(verdicts));
  LoopConfig cfg{k, max_turns};
  return IterateTranssuasion(Instance("x"), *generator, *judge, cfg);
}

TEST(Loop, ScriptedSequences) {
  auto never = RunLoop({"A"}, 3);
  EXPECT_EQ(never.n_success, 0);
  EXPECT_EQ(never.turns, 3);
  auto two = RunLoop({"B", "B", "A", "A"}, 2);
  EXPECT_EQ(two.n_success, 2);
  EXPECT_EQ(two.turns, 4);
  auto one = RunLoop({"B", "A"}, 1);
  EXPECT_EQ(one.n_success, 1);
  EXPECT_EQ(one.turns, 2);
  EXPECT_EQ(one.final_generation, one.history[0].candidate);
  auto capped = RunLoop({"B"}, 3, 5);
  EXPECT_EQ(capped.n_success, 5);
  EXPECT_EQ(capped.turns, 5);
}

TEST(Loop, TerminatesForAnyVerdictSequence) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> script;
    for (int j = 0; j < 12; ++j) script.push_back(rng() % 2 ? "B" : "A");
    script.push_back("A");
    int k = 1 + static_cast<int>(rng() % 4);
    auto r = RunLoop(script, k, 8);
    EXPECT_LE(r.turns, 8);
    EXPECT_EQ(static_cast<int>(r.history.size()), r.turns);
    // Successes equal accepted turns; the tail holds the failure streak.
    int accepted = 0, streak = 0;
    for (const auto& t : r.history) {
      accepted += t.accepted;
      streak = t.accepted ? 0 : streak + 1;
    }
    EXPECT_EQ(accepted, r.n_success);
    EXPECT_TRUE(r.turns == 8 || streak == k);
  }
}

TEST(Loop, GeneratorFailureReturnsPartialResult) {
  int calls = 0;
  auto generator = testing::MockProvider(providers::Role::kGenerator, [&](const Json&) -> Json {
    if (++calls > 2) throw TransportError("generator down", 1);
    return Json{{"text", "draft " + std::to_string(calls)}};
  });
  auto judge = testing::ScriptedJudge({"B"});
  auto r = IterateTranssuasion(Instance("x"), *generator, *judge, LoopConfig{3, 10});
  EXPECT_TRUE(r.interrupted);
  EXPECT_EQ(r.n_success, 1);
  EXPECT_EQ(r.final_generation, "draft 2");
  EXPECT_FALSE(r.error.empty());
  EXPECT_THROW((LoopConfig{0, 10}.Validate()), ConfigError);
}

}  // namespace
}  // namespace persuasion::arena

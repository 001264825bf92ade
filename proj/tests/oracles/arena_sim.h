#ifndef PERSUASION_TESTS_ORACLES_ARENA_SIM_H_
#define PERSUASION_TESTS_ORACLES_ARENA_SIM_H_

// Tournament simulation with hidden player strengths. Each generation text
// starts with "s=<elo>" and the judge samples its verdict from the logistic
// preference model, keyed by a seeded hash of the comparison.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "persuasion/arena/arena.h"
#include "persuasion/arena/elo.h"
#include "persuasion/benchkit/metrics.h"
#include "persuasion/common/hashing.h"
#include "test_support.h"

namespace persuasion::oracles {

using arena::ExpectedScore;
using arena::MatchRecord;
using arena::Player;
using arena::PlayerKind;

inline providers::ProviderHandle StrengthJudge(std::uint64_t seed) {
  return testing::MockProvider(providers::Role::kJudge, [seed](const Json& req) {
    const Json& p = req.at("payload");
    auto strength = [](const std::string& s) { return std::stod(s.substr(2, s.find(' ') - 2)); };
    double sa = strength(p.at("option_a")), sb = strength(p.at("option_b"));
    double pa = ExpectedScore(sa, sb);
    std::uint64_t h = Fnv1a64(p.at("option_a").get<std::string>() + "|" +
                              p.at("option_b").get<std::string>() + "|" +
                              p.at("prompt").get<std::string>(),
                              seed);
    double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return Json{{"text", u < pa ? "A" : "B"}};
  });
}

inline benchkit::TaskInstance SimInstance() {
  benchkit::TaskInstance t;
  t.instance_id = "sim-0";
  t.task = "TS-GT-Ref";
  t.prompt = "improve this post";
  return t;
}

struct SimulationOutcome {
  double spearman = 0;
  double rating_sum = 0;
  std::vector<double> strengths;
  std::vector<MatchRecord> log;
  arena::RatingTable table{1000.0};
};

// Eight players on a 100-point strength grid, shuffled per seed, 200 rounds.
inline SimulationOutcome Simulate(std::uint64_t seed) {
  std::vector<benchkit::TaskInstance> inst = {SimInstance()};
  std::mt19937_64 rng(seed);
  SimulationOutcome out;
  for (int i = 0; i < 8; ++i) out.strengths.push_back(100.0 * i);
  std::shuffle(out.strengths.begin(), out.strengths.end(), rng);
  std::vector<Player> players;
  for (int i = 0; i < 8; ++i) {
    Player p{"p" + std::to_string(i), PlayerKind::kModel, {}};
    p.generations[inst[0].instance_id] = "s=" + std::to_string(int(out.strengths[i])) + " draft";
    players.push_back(std::move(p));
  }
  arena::TournamentConfig cfg;
  cfg.rounds = 200;
  cfg.seed = seed;
  // Distinct prompts per match keep the hashed outcomes independent.
  auto plan = arena::ScheduleMatches(players, inst, cfg);
  for (std::size_t i = 0; i < plan.matches.size(); ++i) {
    plan.matches[i].prompt += " #" + std::to_string(i);
  }
  auto judge = StrengthJudge(seed * 7919 + 1);
  auto r = arena::RunTournament(plan, *judge, cfg);
  std::vector<double> ratings;
  for (const auto& p : players) {
    ratings.push_back(r.table.Rating("TS-GT-Ref", p.player_id));
    out.rating_sum += ratings.back();
  }
  out.spearman = benchkit::Spearman(ratings, out.strengths);
  out.log = std::move(r.log);
  out.table = std::move(r.table);
  return out;
}

}  // namespace persuasion::oracles

#endif  // PERSUASION_TESTS_ORACLES_ARENA_SIM_H_

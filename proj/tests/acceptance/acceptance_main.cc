// Acceptance checks AC1-AC12. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/arena_sim.h"
#include "oracles/pair_oracle.h"
#include "persuasion/arena/arena.h"
#include "persuasion/arena/elo.h"
#include "persuasion/arena/loop.h"
#include "persuasion/benchkit/instances.h"
#include "persuasion/benchkit/instructions.h"
#include "persuasion/benchkit/metrics.h"
#include "persuasion/benchkit/scoring.h"
#include "persuasion/benchkit/splits.h"
#include "persuasion/corpus/percentiles.h"
#include "persuasion/pairminer/miner.h"
#include "persuasion/providers/operations.h"
#include "pipeline_smoke.h"
#include "test_support.h"

namespace persuasion {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

providers::ProviderHandle HashEmbedder() {
  return testing::NamedMock(providers::Role::kEmbedder, "hash");
}

// Tournaments run anywhere in this binary, kept for the replay check.
struct LiveRun {
  std::string name;
  std::vector<arena::MatchRecord> log;
  arena::RatingTable table;
  arena::TournamentConfig cfg;
};
std::vector<LiveRun>& LiveRuns() {
  static std::vector<LiveRun> runs;
  return runs;
}

// The 25 synthetic corpora shared by AC2 and AC3.
struct MinedCorpus {
  std::vector<corpus::PostRecord> posts;
  pairminer::GateThresholds thresholds;
  pairminer::MineResult result;
};
const std::vector<MinedCorpus>& Corpora() {
  static const std::vector<MinedCorpus> corpora = [] {
    std::vector<MinedCorpus> out;
    std::mt19937_64 rng(20240611);
    auto embedder = HashEmbedder();
    for (int i = 0; i < 25; ++i) {
      MinedCorpus c;
      c.posts = oracles::RandomCorpus(rng, 40 + 160 * i / 24);
      if (i % 3 == 0) c.thresholds.max_pairs_per_post = 2;
      c.result = pairminer::MinePairs(c.posts, c.thresholds, *embedder);
      out.push_back(std::move(c));
    }
    return out;
  }();
  return corpora;
}

// ---- AC1 ----------------------------------------------------------------------
Outcome Ac1() {
  double e100 = arena::ExpectedScore(1100, 1000);
  double e0 = arena::ExpectedScore(1000, 1000);
  return {std::fabs(e100 - 0.640) <= 0.001 && e0 == 0.5,
          Fmt("E(+100)=%.6f E(0)=%.6f", e100, e0)};
}

// ---- AC2 ----------------------------------------------------------------------
Outcome Ac2() {
  std::size_t total = 0, max_posts = 0;
  for (std::size_t i = 0; i < Corpora().size(); ++i) {
    const auto& c = Corpora()[i];
    max_posts = std::max(max_posts, c.posts.size());
    std::set<std::pair<std::string, std::string>> got, want;
    for (const auto& p : c.result.pairs) got.insert({p.pair_id(), pairminer::ToString(p.pair_type)});
    for (const auto& o : oracles::OracleMine(c.posts, c.thresholds.max_pairs_per_post)) {
      want.insert({o.t1 + "|" + o.t2, o.type});
    }
    if (got != want || got.size() != c.result.pairs.size()) {
      return {false, "corpus " + std::to_string(i) + ": miner " + std::to_string(got.size()) +
                         " pairs, oracle " + std::to_string(want.size())};
    }
    total += got.size();
  }
  if (max_posts > 200) return {false, "corpus larger than 200 posts"};
  return {total > 0, std::to_string(Corpora().size()) + " corpora, " + std::to_string(total) +
                         " pairs set-identical to brute force"};
}

// ---- AC3 ----------------------------------------------------------------------
Outcome Ac3() {
  std::size_t checked = 0;
  std::vector<std::string> bad;
  auto verify = [&](const std::vector<pairminer::TranssuasionPair>& pairs,
                    const pairminer::GateThresholds& t) {
    for (const auto& p : pairs) {
      auto v = oracles::EvidenceViolations(p, t);
      bad.insert(bad.end(), v.begin(), v.end());
      ++checked;
    }
    auto m = oracles::MultiplicityViolations(pairs, t.max_pairs_per_post);
    bad.insert(bad.end(), m.begin(), m.end());
  };
  for (const auto& c : Corpora()) verify(c.result.pairs, c.thresholds);
  // A denser corpus where the default cap of 20 binds.
  std::mt19937_64 rng(77);
  auto dense = oracles::RandomCorpus(rng, 200);
  for (auto& p : dense) p.account_id = "acct0";
  pairminer::GateThresholds defaults;
  auto r = pairminer::MinePairs(dense, defaults, *HashEmbedder());
  verify(r.pairs, defaults);
  if (defaults.max_day_gap != 45 || defaults.min_char_diff != 5 ||
      defaults.max_pairs_per_post != 20 || defaults.delta_percentile_min != 40) {
    bad.push_back("default gate constants differ");
  }
  if (!bad.empty()) return {false, bad.front() + " (" + std::to_string(bad.size()) + " violations)"};
  return {checked > 0, std::to_string(checked) + " pairs verified from stored evidence; dense corpus " +
                           std::to_string(r.rejections["multiplicity_cap"]) + " capped"};
}

// ---- AC4 ----------------------------------------------------------------------
Outcome Ac4() {
  auto first = testing::NamedMock(providers::Role::kJudge, "first");
  // TS-CT with the judge answering every twin.
  std::vector<pairminer::TranssuasionPair> pairs;
  for (const auto& c : Corpora()) pairs.insert(pairs.end(), c.result.pairs.begin(), c.result.pairs.end());
  auto ct = benchkit::BuildCtInstances(pairs, benchkit::BuildContext{});
  benchkit::Submission predictions;
  for (std::size_t i = 0; i < ct.instances.size(); ++i) {
    const auto& p = pairs[i / 2];
    const bool ab = i % 2 == 0;
    auto v = providers::JudgePair(ct.instances[i].prompt, ab ? p.t1.text : p.t2.text,
                                  ab ? p.t2.text : p.t1.text, *first);
    predictions.generations[ct.instances[i].instance_id] =
        v.winner == providers::Winner::kFirst ? "A" : v.winner == providers::Winner::kSecond ? "B" : "tie";
  }
  auto report = benchkit::ScoreSubmission(ct.instances, predictions, benchkit::Metric::kAccuracy, "TS-CT");

  // Tournament with the same positional judge.
  std::vector<benchkit::TaskInstance> instances;
  for (int i = 0; i < 5; ++i) {
    benchkit::TaskInstance t;
    t.instance_id = "gt-" + std::to_string(i);
    t.task = "TS-GT-Ref";
    t.prompt = "rewrite " + std::to_string(i);
    t.references = {"the strong version " + std::to_string(i)};
    t.meta = {{"baseline", "weak " + std::to_string(i)}, {"topline", "the strong version " + std::to_string(i)}};
    instances.push_back(t);
  }
  std::vector<arena::Player> players = {{"t1", arena::PlayerKind::kBaselineT1, {}},
                                        {"t2", arena::PlayerKind::kToplineT2, {}}};
  for (int m = 0; m < 4; ++m) {
    arena::Player p{"model" + std::to_string(m), arena::PlayerKind::kModel, {}};
    for (const auto& t : instances) p.generations[t.instance_id] = std::string(m + 1, 'x') + t.instance_id;
    players.push_back(p);
  }
  arena::TournamentConfig cfg;
  cfg.rounds = 100;
  cfg.seed = 4;
  auto run = arena::RunTournament(arena::ScheduleMatches(players, instances, cfg), *first, cfg);
  double worst = 0;
  for (const auto& p : players) {
    worst = std::max(worst, std::fabs(run.table.Rating("TS-GT-Ref", p.player_id) - cfg.initial_rating));
  }
  LiveRuns().push_back({"positional", run.log, run.table, cfg});
  return {report.value == 0.5 && report.scored == static_cast<std::int64_t>(ct.instances.size()) &&
              worst <= cfg.k_factor,
          Fmt("TS-CT accuracy %.6f over %.0f twins; max |rating-1000| %.4f after 100 rounds",
              report.value, static_cast<double>(ct.instances.size()), worst)};
}

// ---- AC5 ----------------------------------------------------------------------
Outcome Ac5() {
  int good = 0;
  double worst = 1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto sim = oracles::Simulate(seed);
    good += sim.spearman >= 0.95;
    worst = std::min(worst, sim.spearman);
    arena::TournamentConfig cfg;
    LiveRuns().push_back({"simulation " + std::to_string(seed), sim.log, sim.table, cfg});
  }
  return {good >= 19, Fmt("%.0f/20 repetitions with spearman >= 0.95 (min %.3f)", good, worst)};
}

// ---- AC6 ----------------------------------------------------------------------
Outcome Ac6() {
  std::size_t matches = 0;
  for (const auto& run : LiveRuns()) {
    const auto& ids = run.table.players();
    auto replayed = arena::ReplayLog(run.log, run.cfg, std::vector<std::string>(ids.begin(), ids.end()));
    if (!(replayed == run.table)) return {false, "replay differs for " + run.name};
    matches += run.log.size();
  }
  auto tampered = arena::ReadMatchLog(std::string(PERSUASION_TEST_DATA) + "/tampered_matches.jsonl");
  try {
    arena::ReplayLog(tampered, arena::TournamentConfig{});
    return {false, "tampered log accepted"};
  } catch (const IntegrityError& e) {
    if (e.match_id() != 4) return {false, "tampered log rejected at wrong match"};
  }
  return {!LiveRuns().empty(), std::to_string(LiveRuns().size()) + " tournaments (" +
                                   std::to_string(matches) +
                                   " matches) replayed bit-for-bit; tampered fixture rejected at match 4"};
}

// ---- AC7 ----------------------------------------------------------------------
Outcome Ac7() {
  using namespace benchkit;
  struct Case {
    const char* name;
    double got, want;
  };
  std::vector<double> x = {1, 2, 3};
  std::vector<Case> cases = {
      {"bleu1", Bleu("the cat", {"the cat sat"}, 1), 0.6065},
      {"bleu1 exact", Bleu("the cat", {"the cat sat"}, 1), std::exp(-0.5)},
      {"rougeL", Rouge("the cat", {"the cat sat"}, RougeVariant::kLcs), 0.8},
      {"rouge1", Rouge("b a q", {"a b c d"}, RougeVariant::kUnigram), 4.0 / 7.0},
      {"spearman", Spearman(x, std::vector<double>{1, 3, 2}), 0.5},
      {"pearson", Pearson(x, std::vector<double>{1, 2, 4}), 3.0 / std::sqrt(2.0 * 42.0 / 9.0)},
      {"bleu2 identity", Bleu("the cat sat", {"the cat sat"}, 2), 1.0},
      {"rougeL identity", Rouge("the cat sat", {"the cat sat"}, RougeVariant::kLcs), 1.0},
      {"rouge1 identity", Rouge("the cat sat", {"the cat sat"}, RougeVariant::kUnigram), 1.0},
      {"spearman identity", Spearman(x, x), 1.0},
      {"pearson identity", Pearson(x, x), 1.0},
  };
  for (const auto& c : cases) {
    if (std::fabs(c.got - c.want) > 1e-4) {
      return {false, std::string(c.name) + Fmt(" = %.6f, expected %.6f", c.got, c.want)};
    }
  }
  return {true, std::to_string(cases.size()) + " metric values within 1e-4"};
}

// ---- AC8 ----------------------------------------------------------------------
Outcome Ac8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  std::vector<corpus::PostRecord> posts;
  for (int i = 0; i < 12000; ++i) {
    auto p = testing::MakePost("p" + std::to_string(i), "u", "2021-01-01T00:00:00Z", "t", 1);
    p.like_percentile = pct(rng);
    posts.push_back(p);
  }
  auto bs = benchkit::BuildBsInstances(posts, benchkit::BuildContext{});
  const std::vector<std::string> labels = {"low", "medium", "high"};
  std::uniform_int_distribution<int> pick3(0, 2), pick2(0, 1);
  benchkit::Submission random_bs;
  for (const auto& t : bs.instances) random_bs.generations[t.instance_id] = labels[pick3(rng)];
  double bs_acc = benchkit::ScoreSubmission(bs.instances, random_bs, benchkit::Metric::kAccuracy, "BS").value;

  std::vector<pairminer::TranssuasionPair> pairs;
  for (int i = 0; i < 6000; ++i) {
    pairminer::TranssuasionPair p;
    p.t1 = testing::MakePost("a" + std::to_string(i), "u", "2021-01-01T00:00:00Z", "low", 1);
    p.t2 = testing::MakePost("b" + std::to_string(i), "u", "2021-01-02T00:00:00Z", "high", 9);
    p.t1.like_percentile = 10;
    p.t2.like_percentile = 90;
    pairs.push_back(p);
  }
  auto ct = benchkit::BuildCtInstances(pairs, benchkit::BuildContext{});
  benchkit::Submission random_ct;
  for (const auto& t : ct.instances) random_ct.generations[t.instance_id] = pick2(rng) ? "A" : "B";
  double ct_acc = benchkit::ScoreSubmission(ct.instances, random_ct, benchkit::Metric::kAccuracy, "TS-CT").value;
  return {std::fabs(bs_acc - 1.0 / 3.0) <= 0.02 && std::fabs(ct_acc - 0.5) <= 0.02 &&
              bs.instances.size() >= 10000 && ct.instances.size() >= 10000,
          Fmt("BS %.2f%% over 12000, TS-CT %.2f%% over 12000 twins", 100 * bs_acc, 100 * ct_acc)};
}

// ---- AC9 ----------------------------------------------------------------------
Outcome Ac9() {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> likes(0, 1000000);
  std::vector<corpus::PostRecord> posts;
  for (int i = 0; i < 12000; ++i) {
    std::string month = std::to_string(1 + i % 12);
    if (month.size() == 1) month = "0" + month;
    auto p = testing::MakePost("p" + std::to_string(i), "acct" + std::to_string(i % 5),
                               "2021-" + month + "-10T00:00:00Z", "t", likes(rng));
    posts.push_back(p);
  }
  posts = corpus::ComputePercentiles(std::move(posts), corpus::PercentileGrouping::kAccountMonth);
  auto bs = benchkit::BuildBsInstances(posts, benchkit::BuildContext{});
  std::map<std::string, double> share;
  for (const auto& t : bs.instances) share["bs " + *t.label] += 100.0 / bs.instances.size();

  std::uniform_real_distribution<double> u(0, 1);
  std::vector<benchkit::BlogPost> blogs;
  for (int i = 0; i < 5000; ++i) {
    benchkit::BlogPost b;
    b.post_id = "b" + std::to_string(i);
    b.author = "author" + std::to_string(i % 50);
    b.title = "Title " + std::to_string(i);
    b.published = *ParseDate("2020-01-01") + std::chrono::days(i % 700);
    b.views = std::floor(1e6 * u(rng));
    b.dwell_seconds = 600 * u(rng);
    b.reading_minutes = 5;
    blogs.push_back(b);
  }
  for (auto metric : {benchkit::BlogMetric::kViews, benchkit::BlogMetric::kDwell}) {
    auto r = benchkit::BuildBlogInstances(blogs, metric, benchkit::BuildContext{});
    const std::string tag = metric == benchkit::BlogMetric::kViews ? "views " : "dwell ";
    for (const auto& t : r.instances) share[tag + *t.label] += 100.0 / r.instances.size();
  }
  const std::vector<std::pair<std::string, double>> want = {{"low", 30}, {"medium", 50}, {"high", 20}};
  std::ostringstream detail;
  bool ok = true;
  for (const auto* group : {"bs", "views", "dwell"}) {
    detail << " " << group;
    for (const auto& [label, target] : want) {
      double got = share[std::string(group) + " " + label];
      ok &= std::fabs(got - target) <= 2.0;
      detail << (label == "low" ? " " : "/") << Fmt("%.1f", got);
    }
  }
  return {ok, "low/medium/high %:" + detail.str()};
}

// ---- AC10 ---------------------------------------------------------------------
Outcome Ac10() {
  std::vector<corpus::PostRecord> posts;
  std::vector<pairminer::TranssuasionPair> pairs;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& c = Corpora()[i * 4];
    for (auto p : c.posts) {
      p.post_id = "c" + std::to_string(i) + "-" + p.post_id;
      p.account_id = "c" + std::to_string(i) + "-" + p.account_id;
      posts.push_back(p);
    }
    for (auto p : c.result.pairs) {
      for (auto* side : {&p.t1, &p.t2}) {
        side->post_id = "c" + std::to_string(i) + "-" + side->post_id;
        side->account_id = "c" + std::to_string(i) + "-" + side->account_id;
      }
      pairs.push_back(p);
    }
  }
  const std::string explanation = "The stronger version opens with a concrete benefit.";
  providers::ProviderConfig gcfg;
  gcfg.endpoint = "mock://scripted";
  gcfg.role = providers::Role::kGenerator;
  auto generator = providers::MakeProviderWithTransport(gcfg, providers::ScriptedTextMock({explanation}));

  std::size_t emitted = 0, explained = 0, test_instances = 0;
  std::vector<benchkit::SplitSpec> specs(3);
  specs[0].regime = benchkit::SplitRegime::kRandom;
  specs[0].seed = 5;
  specs[1].regime = benchkit::SplitRegime::kBrand;
  specs[1].holdout_accounts = {"c0-acct1", "c2-acct0", "c4-acct2"};
  specs[2].regime = benchkit::SplitRegime::kTime;
  specs[2].cutoff_date = *ParseDate("2021-03-15");
  for (const auto& spec : specs) {
    auto split = benchkit::MakeSplits(pairs, posts, spec);
    benchkit::CheckSplitLeakage(split, spec);
    const auto test_ids = split.TestPostIds();
    benchkit::EmitOptions opts;
    opts.tasks = {"BS", "CS", "TS-GT", "TS-CT"};
    const std::size_t k = std::min<std::size_t>(30, split.train_pairs.size());
    auto result = benchkit::SynthesizeExplanations(split, opts, *generator, k, 11);
    for (const auto& e : result.examples) {
      for (const auto& id : e.source_posts) {
        if (test_ids.count(id)) return {false, "test post " + id + " in emitted " + e.task};
      }
      const bool ts = e.task.rfind("TS-", 0) == 0;
      if (e.explanation) {
        if (!ts) return {false, "explanation on non-TS example"};
        if (e.input.find(explanation) == std::string::npos) return {false, "explanation missing from input"};
        ++explained;
      }
    }
    if (result.augmented != static_cast<std::int64_t>(k)) return {false, "augmented count differs from k"};
    emitted += result.examples.size();
    for (const auto& build : {benchkit::BuildGtInstances(split.test_pairs, benchkit::BuildContext{}),
                              benchkit::BuildCtInstances(split.test_pairs, benchkit::BuildContext{}),
                              benchkit::BuildBsInstances(split.test_posts, benchkit::BuildContext{})}) {
      for (const auto& t : build.instances) {
        if (t.prompt.find(explanation) != std::string::npos) return {false, "explanation in test instance"};
        ++test_instances;
      }
    }
  }
  return {emitted > 0 && explained > 0,
          std::to_string(emitted) + " examples over 3 regimes, 0 test posts; " +
              std::to_string(explained) + " explained examples; " + std::to_string(test_instances) +
              " test instances without explanations"};
}

// ---- AC11 ---------------------------------------------------------------------
// Reference semantics: verdict t is script[min(t, size-1)]; "B" accepts.
std::pair<int, int> LoopOracle(const std::vector<std::string>& script, int k, int max_turns) {
  int success = 0, streak = 0, turns = 0;
  while (turns < max_turns && streak < k) {
    const auto& v = script[std::min<std::size_t>(turns, script.size() - 1)];
    ++turns;
    if (v == "B") {
      ++success;
      streak = 0;
    } else {
      ++streak;
    }
  }
  return {success, turns};
}

Outcome Ac11() {
  auto generator = testing::NamedMock(providers::Role::kGenerator, "echo");
  benchkit::TaskInstance inst;
  inst.instance_id = "loop";
  inst.task = "TS-GT-Ref";
  inst.prompt = "improve this post";
  inst.meta = {{"baseline", "a post to improve"}};
  struct Fixture {
    std::vector<std::string> script;
    int k, max_turns, expected;
  };
  std::vector<Fixture> fixtures = {
      {{"A"}, 3, 10, 0},          {{"B", "B", "A", "A"}, 2, 10, 2}, {{"B", "A"}, 1, 10, 1},
      {{"B", "A", "B", "A", "A"}, 2, 10, 2}, {{"A", "A", "B", "A", "A", "A"}, 3, 10, 1},
      {{"B"}, 3, 5, 5},           {{"A", "B", "A"}, 1, 10, 0},
  };
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Fixture f;
    for (int j = 0; j < 14; ++j) f.script.push_back(rng() % 3 ? "B" : "A");
    f.script.push_back("A");
    f.k = 1 + static_cast<int>(rng() % 4);
    f.max_turns = 1 + static_cast<int>(rng() % 12);
    f.expected = LoopOracle(f.script, f.k, f.max_turns).first;
    fixtures.push_back(f);
  }
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto& f = fixtures[i];
    auto judge = testing::ScriptedJudge(f.script);
    auto r = arena::IterateTranssuasion(inst, *generator, *judge, arena::LoopConfig{f.k, f.max_turns});
    auto [want_success, want_turns] = LoopOracle(f.script, f.k, f.max_turns);
    if (want_success != f.expected) return {false, "fixture " + std::to_string(i) + " expectation inconsistent"};
    if (r.n_success != f.expected || r.turns != want_turns || r.turns > f.max_turns || r.interrupted) {
      return {false, "fixture " + std::to_string(i) + ": n_success " + std::to_string(r.n_success) +
                         " turns " + std::to_string(r.turns)};
    }
  }
  return {true, std::to_string(fixtures.size()) + " scripted sequences reproduced; all within max_turns"};
}

// ---- AC12 ---------------------------------------------------------------------
Outcome Ac12() {
  auto start = std::chrono::steady_clock::now();
  testing::TempDir a, b;
  auto first = testing::RunPipelineSmoke(a.path());
  if (!first.ok) return {false, first.failed_step + ": " + first.error};
  auto second = testing::RunPipelineSmoke(b.path());
  if (!second.ok) return {false, second.failed_step + ": " + second.error};
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 2;
  if (first.artifacts != second.artifacts) return {false, "artifacts differ between runs"};
  for (const auto& [name, content] : first.artifacts) {
    std::string why;
    if (!testing::MatchesGolden(name, content, &why)) return {false, why};
  }
  auto log = arena::ReadMatchLog(a / "matches.jsonl");
  auto board = ReadJsonFile(a / "leaderboard.json");
  auto replayed = ReadJsonFile(a / "replayed.json");
  if (board["overall"] != replayed["overall"]) return {false, "replayed leaderboard differs"};
  return {seconds < 60.0, Fmt("pipeline %.2f s per run; %.0f golden files match; %.0f matches",
                              seconds, static_cast<double>(first.artifacts.size()),
                              static_cast<double>(log.size()))};
}

}  // namespace
}  // namespace persuasion

int main() {
  using persuasion::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"AC1", persuasion::Ac1},   {"AC2", persuasion::Ac2},   {"AC3", persuasion::Ac3},
      {"AC4", persuasion::Ac4},   {"AC5", persuasion::Ac5},   {"AC6", persuasion::Ac6},
      {"AC7", persuasion::Ac7},   {"AC8", persuasion::Ac8},   {"AC9", persuasion::Ac9},
      {"AC10", persuasion::Ac10}, {"AC11", persuasion::Ac11}, {"AC12", persuasion::Ac12},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s (%.0f ms) %s\n", name, o.pass ? "PASS" : "FAIL", ms, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}

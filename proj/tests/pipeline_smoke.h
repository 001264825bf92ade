#ifndef PERSUASION_TESTS_PIPELINE_SMOKE_H_
#define PERSUASION_TESTS_PIPELINE_SMOKE_H_

// Drives the `persuasion` CLI over the 50-post fixture, in process:
// ingest -> filter -> percentiles -> mine -> bench build -> score ->
// mock tournament -> leaderboard.

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "persuasion/arena/arena.h"
#include "persuasion/benchkit/instances.h"
#include "persuasion/common/jsonl.h"
#include "persuasion/gateway/cli.h"

namespace persuasion::testing {

struct SmokeResult {
  bool ok = false;
  std::string failed_step;
  std::string error;
  // Deterministic artifacts, keyed by golden file name.
  std::map<std::string, std::string> artifacts;
};

inline int Cli(const std::vector<std::string>& args, std::string* out, std::string* err) {
  std::vector<const char*> argv = {"persuasion"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int rc = gateway::RunCli(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

inline SmokeResult RunPipelineSmoke(const std::filesystem::path& dir) {
  SmokeResult r;
  const std::string fixture = std::string(PERSUASION_TEST_DATA) + "/posts_50.jsonl";
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  const std::vector<std::pair<std::string, std::vector<std::string>>> front = {
      {"ingest", {"corpus", "ingest", "--in", fixture, "--out", p("posts.jsonl")}},
      {"filter",
       {"corpus", "filter", "--in", p("posts.jsonl"), "--out", p("kept.jsonl"), "--report",
        p("filter_report.json")}},
      {"percentiles", {"corpus", "percentiles", "--in", p("kept.jsonl"), "--out", p("pct.jsonl")}},
      {"mine",
       {"pairminer", "mine", "--posts", p("pct.jsonl"), "--out", p("pairs.jsonl"), "--summary",
        p("mine_summary.json")}},
      {"build",
       {"bench", "build", "--task", "ts-gt", "--posts", p("pct.jsonl"), "--pairs",
        p("pairs.jsonl"), "--out", p("ts_gt.jsonl"), "--report", p("build_report.json")}},
  };
  auto run = [&](const std::string& step, const std::vector<std::string>& args) {
    std::string err;
    if (Cli(args, nullptr, &err) != 0) {
      r.failed_step = step;
      r.error = err;
      return false;
    }
    return true;
  };
  for (const auto& [step, args] : front) {
    if (!run(step, args)) return r;
  }

  // A model player that appends a sentence to the baseline text.
  try {
    auto instances = benchkit::ReadInstances(p("ts_gt.jsonl"));
    if (instances.empty()) {
      r.failed_step = "build";
      r.error = "no instances";
      return r;
    }
    arena::Player model{"drafter", arena::PlayerKind::kModel, {}};
    std::vector<Json> submission;
    for (const auto& inst : instances) {
      std::string text = inst.meta.at("baseline").get<std::string>() + " Learn more today.";
      model.generations[inst.instance_id] = text;
      submission.push_back({{"instance_id", inst.instance_id}, {"generation", text}});
    }
    WriteJsonLinesFile(p("submission.jsonl"), submission);
    WriteJsonLinesFile(p("players.jsonl"),
                       {arena::ToJson(arena::Player{"t1", arena::PlayerKind::kBaselineT1, {}}),
                        arena::ToJson(arena::Player{"t2", arena::PlayerKind::kToplineT2, {}}),
                        arena::ToJson(model)});
  } catch (const std::exception& e) {
    r.failed_step = "players";
    r.error = e.what();
    return r;
  }

  if (!run("score", {"bench", "score", "--instances", p("ts_gt.jsonl"), "--submission",
                     p("submission.jsonl"), "--metric", "bleu2", "--report",
                     p("score.json")})) {
    return r;
  }
  if (!run("tournament", {"arena", "run", "--players", p("players.jsonl"), "--instances",
                          p("ts_gt.jsonl"), "--rounds", "2", "--seed", "7", "--judge",
                          "mock://longer", "--log", p("matches.jsonl"), "--leaderboard",
                          p("leaderboard.json")})) {
    return r;
  }
  if (!run("replay", {"arena", "replay", "--log", p("matches.jsonl"), "--players",
                      p("players.jsonl"), "--leaderboard", p("replayed.json")})) {
    return r;
  }
  for (const auto& name : {"filter_report.json", "pairs.jsonl", "mine_summary.json",
                           "ts_gt.jsonl", "score.json", "leaderboard.json"}) {
    if (!std::filesystem::exists(dir / name)) {
      r.failed_step = "artifacts";
      r.error = std::string("missing ") + name;
      return r;
    }
    r.artifacts[std::string("smoke_") + name] = ReadTextFile(dir / name);
  }
  r.ok = true;
  return r;
}

// Compares `content` with tests/golden/<name>; PERSUASION_UPDATE_GOLDEN=1
// rewrites the file instead.
inline bool MatchesGolden(const std::string& name, const std::string& content,
                          std::string* diagnosis = nullptr) {
  const std::filesystem::path path = std::filesystem::path(PERSUASION_TEST_GOLDEN) / name;
  const char* update = std::getenv("PERSUASION_UPDATE_GOLDEN");
  if (update && std::string(update) == "1") {
    AtomicWriteFile(path, content);
    return true;
  }
  if (!std::filesystem::exists(path)) {
    if (diagnosis) *diagnosis = "missing golden " + path.string();
    return false;
  }
  if (ReadTextFile(path) != content) {
    if (diagnosis) *diagnosis = "golden mismatch for " + name;
    return false;
  }
  return true;
}

}  // namespace persuasion::testing

#endif  // PERSUASION_TESTS_PIPELINE_SMOKE_H_

#include "persuasion/gateway/cli.h"

#include <signal.h>

#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>

#include "CLI11.hpp"
#include "persuasion/arena/arena.h"
#include "persuasion/arena/loop.h"
#include "persuasion/benchkit/instances.h"
#include "persuasion/benchkit/instructions.h"
#include "persuasion/benchkit/scoring.h"
#include "persuasion/benchkit/splits.h"
#include "persuasion/common/errors.h"
#include "persuasion/common/stats.h"
#include "persuasion/corpus/filters.h"
#include "persuasion/corpus/ingest.h"
#include "persuasion/corpus/percentiles.h"
#include "persuasion/gateway/config.h"
#include "persuasion/gateway/service.h"
#include "persuasion/pairminer/miner.h"
#include "persuasion/providers/operations.h"
#include "persuasion/transcreate/transcreate.h"

namespace persuasion::gateway {
namespace {

using providers::Role;

struct Globals {
  std::string config_path;
  std::size_t workers = 1;
  KeyValueConfig config;

  void Load() {
    if (!config_path.empty()) config = KeyValueConfig::Load(config_path);
    config.ApplyEnvironment();
  }

  providers::ProviderHandle Provider(Role role, const std::string& flag,
                                     const std::string& fallback) const {
    providers::ProviderConfig cfg = ProviderFromConfig(config, role, fallback);
    if (!flag.empty()) cfg.endpoint = flag;
    return providers::MakeProvider(cfg);
  }
};

void WriteJsonTo(const std::string& path, const Json& value, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << value.dump(2) << "\n";
  } else {
    AtomicWriteFile(path, value.dump(2) + "\n");
  }
}

Date RequireDate(const std::string& text, const std::string& flag) {
  auto d = ParseDate(text);
  if (!d) throw ConfigError(flag + " expects YYYY-MM-DD, got '" + text + "'");
  return *d;
}

std::vector<std::string> SplitCsv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// ---- corpus ---------------------------------------------------------------

struct CorpusArgs {
  std::string in, out, report, group = "account-month", cutoff = "2015-01-01";
  int min_words = 5;
  std::int64_t min_likes = 4;
  bool keep_raw_text = false;
  std::string accounts, captioner, classifier;
  std::int64_t min_posts = 100;
  double max_daily = 10.0, max_news_share = 0.20;
};

void CorpusIngest(const CorpusArgs& a) {
  auto lines = ReadJsonLinesFile(a.in);
  corpus::WritePosts(a.out, corpus::IngestPosts(lines));
}

void CorpusFilter(const CorpusArgs& a, std::ostream& out) {
  corpus::PostFilterOptions opts;
  opts.cutoff_date = RequireDate(a.cutoff, "--cutoff");
  opts.min_words = a.min_words;
  opts.min_likes = a.min_likes;
  auto [kept, report] = corpus::FilterPosts(corpus::ReadPosts(a.in), opts);
  if (!a.keep_raw_text) corpus::NormalizePosts(kept);
  corpus::WritePosts(a.out, kept);
  WriteJsonTo(a.report, corpus::ToJson(report), out);
}

void CorpusCaption(const CorpusArgs& a, const Globals& g, std::ostream& out) {
  auto captioner = g.Provider(Role::kCaptioner, a.captioner, "mock://keywords");
  auto posts = corpus::ReadPosts(a.in);
  std::int64_t captioned = 0, failed = 0;
  for (auto& post : posts) {
    for (auto& asset : post.media) {
      const bool had = asset.caption.has_value();
      auto r = providers::CaptionMedia(asset, *captioner);
      if (r.error) ++failed;
      if (!had && r.asset.caption) ++captioned;
      asset = r.asset;
    }
  }
  corpus::WritePosts(a.out, posts);
  WriteJsonTo(a.report, {{"captioned", captioned}, {"failed", failed}}, out);
}

void CorpusPercentiles(const CorpusArgs& a) {
  corpus::WritePosts(a.out, corpus::ComputePercentiles(corpus::ReadPosts(a.in),
                                                       corpus::ParseGrouping(a.group)));
}

void CorpusAccounts(const CorpusArgs& a, const Globals& g, std::ostream& out) {
  auto classifier = g.Provider(Role::kClassifier, a.classifier, "mock://keyword");
  auto posts = corpus::ReadPosts(a.in);
  auto accounts = corpus::ReadAccounts(a.accounts);
  auto profiled = corpus::ProfileAccounts(posts, accounts, *classifier);
  auto prompt = benchkit::TemplateRegistry::Default().Get("username_classification").body;
  auto classified = corpus::ClassifyAccounts(profiled.accounts, prompt, *classifier);
  corpus::AccountFilterOptions opts;
  opts.min_posts = a.min_posts;
  opts.max_daily = a.max_daily;
  opts.max_news_share = a.max_news_share;
  auto [kept, report] = corpus::FilterAccounts(classified, opts);
  corpus::WriteAccounts(a.out, kept);
  Json errors = Json::object();
  for (const auto& e : profiled.errors) errors[e.account_id] = e.message;
  Json summary = corpus::ToJson(report);
  summary["profile_errors"] = errors;
  WriteJsonTo(a.report, summary, out);
}

// ---- pairminer ------------------------------------------------------------

struct MineArgs {
  std::string thresholds, posts, out, retry_queue, contexts, summary, embedder;
};

void PairminerMine(const MineArgs& a, const Globals& g, std::ostream& out) {
  pairminer::GateThresholds thresholds;
  if (!a.thresholds.empty()) thresholds = pairminer::ThresholdsFromJson(ReadJsonFile(a.thresholds));
  pairminer::ContextMap contexts;
  pairminer::MineOptions opts;
  opts.workers = g.workers;
  if (!a.contexts.empty()) {
    contexts = pairminer::ReadContextMap(a.contexts);
    opts.contexts = &contexts;
  }
  auto embedder = g.Provider(Role::kEmbedder, a.embedder, "mock://hash");
  auto result = pairminer::MinePairs(corpus::ReadPosts(a.posts), thresholds, *embedder, opts);
  pairminer::WritePairs(a.out, result.pairs);
  if (!a.retry_queue.empty()) WriteJsonLinesFile(a.retry_queue, result.retry_queue);
  WriteJsonTo(a.summary, pairminer::MineSummaryJson(result), out);
}

// ---- transcreate ----------------------------------------------------------

struct TranscreateArgs {
  std::string posts, accounts, groups_out, out, embedder, assistant, summary;
  double jaccard_min = 0.7;
  double cosine_min = 0.8;
  double delta_min = 40.0;
  int max_per_post = 20;
};

void TranscreateMine(const TranscreateArgs& a, const Globals& g, std::ostream& out) {
  auto posts = corpus::ReadPosts(a.posts);
  std::vector<corpus::AccountRecord> accounts;
  if (!a.accounts.empty()) accounts = corpus::ReadAccounts(a.accounts);
  auto sigs = transcreate::BuildSignatures(posts, accounts, g.workers);
  providers::ProviderHandle assistant;
  if (!a.assistant.empty()) assistant = g.Provider(Role::kClassifier, a.assistant, "");
  auto grouping = transcreate::GroupAccounts(sigs, a.jaccard_min, assistant.get(), accounts);
  if (!a.groups_out.empty()) {
    AtomicWriteFile(a.groups_out, transcreate::ToJson(grouping.groups).dump(2) + "\n");
  }
  auto embedder = g.Provider(Role::kEmbedder, a.embedder, "mock://hash");
  transcreate::TranscreationThresholds t{a.cosine_min, a.delta_min, a.max_per_post};
  auto pairs = transcreate::MineTranscreationPairs(posts, grouping.groups, *embedder, t, g.workers);
  transcreate::WriteTranscreationPairs(a.out, pairs);
  Json summary = {{"groups", grouping.groups.size()},
                  {"assisted", grouping.assisted},
                  {"assistant_errors", grouping.errors},
                  {"pairs", pairs.size()}};
  WriteJsonTo(a.summary, summary, out);
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string task, split = "none", side = "test", posts, pairs, tc_pairs, accounts, contexts,
              blog, human, out, skipped, holdout, cutoff, templates;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  // score
  std::string metric = "bleu2", submission, instances, embedder, report;
  // emit
  std::string tasks = "BS,CS,TS-GT,TS-CT", generator;
  std::size_t explain_k = 0;
  // human
  std::string scorer;
};

benchkit::SplitSpec SpecFrom(const BenchArgs& a) {
  benchkit::SplitSpec spec;
  spec.regime = benchkit::ParseSplitRegime(a.split);
  spec.seed = a.seed;
  spec.test_fraction = a.test_fraction;
  for (const auto& acc : SplitCsv(a.holdout)) spec.holdout_accounts.insert(acc);
  if (!a.cutoff.empty()) spec.cutoff_date = RequireDate(a.cutoff, "--cutoff");
  return spec;
}

struct BenchInputs {
  std::unique_ptr<benchkit::TemplateRegistry> registry;
  pairminer::ContextMap contexts;
  std::vector<corpus::AccountRecord> accounts;
};

benchkit::BuildContext MakeContext(const BenchArgs& a, BenchInputs& in) {
  if (!a.templates.empty()) {
    in.registry = std::make_unique<benchkit::TemplateRegistry>(
        benchkit::TemplateRegistry::Load(a.templates));
  }
  if (!a.accounts.empty()) in.accounts = corpus::ReadAccounts(a.accounts);
  if (!a.contexts.empty()) in.contexts = pairminer::ReadContextMap(a.contexts);
  benchkit::BuildContext ctx{in.registry.get(), benchkit::BrandDirectory(in.accounts),
                             a.contexts.empty() ? nullptr : &in.contexts, "none"};
  return ctx;
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void BenchBuild(const BenchArgs& a, std::ostream& out) {
  BenchInputs inputs;
  benchkit::BuildContext ctx = MakeContext(a, inputs);
  const std::string task = Lower(a.task);
  std::vector<corpus::PostRecord> posts;
  std::vector<pairminer::TranssuasionPair> pairs;
  if (!a.posts.empty()) posts = corpus::ReadPosts(a.posts);
  if (!a.pairs.empty()) pairs = pairminer::ReadPairs(a.pairs);
  Json split_summary;
  if (a.split != "none") {
    if (a.side != "test" && a.side != "train") {
      throw ConfigError("--side must be test or train when a split is requested");
    }
    auto spec = SpecFrom(a);
    auto split = benchkit::MakeSplits(pairs, posts, spec);
    benchkit::CheckSplitLeakage(split, spec);
    split_summary = benchkit::SplitSummaryJson(split);
    const bool test = a.side == "test";
    posts = test ? split.test_posts : split.train_posts;
    pairs = test ? split.test_pairs : split.train_pairs;
    ctx.split = split.tag + ":" + a.side;
  }
  benchkit::BuildResult result;
  if (task == "ts-ct") {
    result = benchkit::BuildCtInstances(pairs, ctx);
  } else if (task == "ts-gt") {
    result = benchkit::BuildGtInstances(pairs, ctx);
  } else if (task == "bs") {
    result = benchkit::BuildBsInstances(posts, ctx);
  } else if (task.rfind("cs-", 0) == 0) {
    auto model = benchkit::KeywordModel::Build(posts);
    result = benchkit::BuildCsInstances(posts, benchkit::ParseCsVariant(task.substr(3)), model, ctx);
  } else if (task == "tc") {
    result = benchkit::BuildTcInstances(transcreate::ReadTranscreationPairs(a.tc_pairs), ctx);
  } else if (task == "blog-views" || task == "blog-dwell") {
    result = benchkit::BuildBlogInstances(
        benchkit::ReadBlogPosts(a.blog),
        task == "blog-views" ? benchkit::BlogMetric::kViews : benchkit::BlogMetric::kDwell, ctx);
  } else if (task == "he") {
    result = benchkit::BuildHeInstances(benchkit::ReadHumanStudy(a.human), ctx);
  } else {
    throw ConfigError("unknown task '" + a.task +
                      "' (ts-ct, ts-gt, bs, cs-key, cs-web, cs-img, tc, blog-views, "
                      "blog-dwell, he)");
  }
  benchkit::WriteInstances(a.out, result.instances);
  Json skipped = Json::array();
  for (const auto& s : result.skipped) skipped.push_back({{"item", s.item_id}, {"reason", s.reason}});
  if (!a.skipped.empty()) {
    std::vector<Json> lines(skipped.begin(), skipped.end());
    WriteJsonLinesFile(a.skipped, lines);
  }
  Json summary = {{"task", a.task}, {"instances", result.instances.size()},
                  {"skipped", result.skipped.size()}};
  if (!split_summary.is_null()) summary["split"] = split_summary;
  WriteJsonTo(a.report, summary, out);
}

void BenchScore(const BenchArgs& a, const Globals& g, std::ostream& out) {
  auto instances = benchkit::ReadInstances(a.instances);
  auto submission = benchkit::ReadSubmission(a.submission);
  auto metric = benchkit::ParseMetric(a.metric);
  providers::ProviderHandle embedder;
  if (metric == benchkit::Metric::kEmbedF) {
    embedder = g.Provider(Role::kEmbedder, a.embedder, "mock://hash");
  }
  auto report = benchkit::ScoreSubmission(instances, submission, metric, a.task, embedder.get(),
                                          g.workers);
  WriteJsonTo(a.report, benchkit::ToJson(report), out);
}

void BenchEmit(const BenchArgs& a, const Globals& g, std::ostream& out) {
  BenchInputs inputs;
  benchkit::EmitOptions opts;
  opts.context = MakeContext(a, inputs);
  for (const auto& t : SplitCsv(a.tasks)) opts.tasks.insert(t);
  auto spec = SpecFrom(a);
  auto split = benchkit::MakeSplits(pairminer::ReadPairs(a.pairs), corpus::ReadPosts(a.posts), spec);
  benchkit::CheckSplitLeakage(split, spec);
  opts.context.split = split.tag + ":train";
  benchkit::EmitResult result;
  if (a.explain_k > 0) {
    auto generator = g.Provider(Role::kGenerator, a.generator, "mock://echo");
    result = benchkit::SynthesizeExplanations(split, opts, *generator, a.explain_k, a.seed);
  } else {
    result = benchkit::EmitInstructions(split, opts);
  }
  benchkit::WriteInstructions(a.out, result.examples);
  WriteJsonTo(a.report,
              {{"examples", result.examples.size()},
               {"counts", result.counts},
               {"augmented", result.augmented},
               {"augmentation_failures", result.augmentation_failures},
               {"split", benchkit::SplitSummaryJson(split)}},
              out);
}

void BenchHuman(const BenchArgs& a, const Globals& g, std::ostream& out) {
  auto instances = benchkit::ReadInstances(a.instances);
  auto generator = g.Provider(Role::kGenerator, a.generator, "mock://echo");
  providers::ProviderHandle scorer;
  if (!a.scorer.empty() || g.config.Has("provider.scorer.url")) {
    scorer = g.Provider(Role::kScorer, a.scorer, "mock://none");
  }
  WriteJsonTo(a.report, benchkit::ScoreHumanTransfer(instances, generator.get(), scorer.get(),
                                                     g.workers),
              out);
}

// ---- arena ----------------------------------------------------------------

struct ArenaArgs {
  std::string players, instances, judge, log, leaderboard, task, generator, out, instance_id;
  int rounds = 1;
  std::uint64_t seed = 0;
  double k_factor = 4.0;
  double initial_rating = 1000.0;
  bool single_order = false;
  bool overwrite = false;
  std::size_t per_round = 0;
  int k_failures = 3;
  int max_turns = 10;
};

arena::TournamentConfig ArenaConfig(const ArenaArgs& a, const Globals& g) {
  arena::TournamentConfig cfg;
  cfg.k_factor = a.k_factor;
  cfg.initial_rating = a.initial_rating;
  cfg.rounds = a.rounds;
  cfg.seed = a.seed;
  cfg.both_orders = !a.single_order;
  cfg.instances_per_round = a.per_round;
  cfg.workers = g.workers;
  cfg.Validate();
  return cfg;
}

std::vector<benchkit::TaskInstance> InstancesForTask(const std::string& path,
                                                     const std::string& task) {
  auto all = benchkit::ReadInstances(path);
  if (task.empty()) return all;
  std::vector<benchkit::TaskInstance> out;
  for (auto& inst : all) {
    if (inst.task == task || inst.task.rfind(task + "-", 0) == 0) out.push_back(std::move(inst));
  }
  return out;
}

Json LeaderboardDocument(const arena::RatingTable& table) {
  Json doc = {{"overall", table.Leaderboard()}};
  Json per = Json::object();
  for (const auto& t : table.tasks()) per[t] = table.Leaderboard(t);
  doc["per_task"] = per;
  return doc;
}

void ArenaRun(const ArenaArgs& a, const Globals& g, std::ostream& out) {
  auto cfg = ArenaConfig(a, g);
  auto players = arena::ReadPlayers(a.players);
  auto instances = InstancesForTask(a.instances, a.task);
  auto plan = arena::ScheduleMatches(players, instances, cfg);
  arena::RunOptions opts;
  if (!a.log.empty()) {
    if (std::filesystem::exists(a.log)) {
      if (!a.overwrite) {
        throw ConfigError("match log " + a.log + " exists; pass --overwrite to replace it");
      }
      std::filesystem::remove(a.log);
    }
    opts.log_path = a.log;
  }
  auto judge = g.Provider(Role::kJudge, a.judge, "mock://first");
  opts.start = arena::RatingTable(cfg.initial_rating);
  for (const auto& p : players) opts.start->Register(p.player_id);
  auto result = arena::RunTournament(plan, *judge, cfg, opts);
  Json doc = LeaderboardDocument(result.table);
  doc["matches"] = result.log.size();
  doc["abandoned"] = result.abandoned;
  doc["skipped"] = plan.skipped;
  WriteJsonTo(a.leaderboard, doc, out);
}

void ArenaReplay(const ArenaArgs& a, std::ostream& out) {
  arena::TournamentConfig cfg;
  cfg.k_factor = a.k_factor;
  cfg.initial_rating = a.initial_rating;
  std::vector<std::string> ids;
  if (!a.players.empty()) {
    for (const auto& p : arena::ReadPlayers(a.players)) ids.push_back(p.player_id);
  }
  auto table = arena::ReplayLog(arena::ReadMatchLog(a.log), cfg, ids);
  WriteJsonTo(a.leaderboard, LeaderboardDocument(table), out);
}

void ArenaBradleyTerry(const ArenaArgs& a, std::ostream& out) {
  auto log = arena::ReadMatchLog(a.log);
  WriteJsonTo(a.leaderboard, arena::ToJson(arena::FitBradleyTerry(log, a.task, a.initial_rating)),
              out);
}

void ArenaLoop(const ArenaArgs& a, const Globals& g, std::ostream& out) {
  arena::LoopConfig cfg{a.k_failures, a.max_turns};
  cfg.Validate();
  auto instances = InstancesForTask(a.instances, a.task);
  if (!a.instance_id.empty()) {
    std::erase_if(instances, [&](const auto& i) { return i.instance_id != a.instance_id; });
    if (instances.empty()) throw PreconditionError("no instance '" + a.instance_id + "'");
  }
  auto generator = g.Provider(Role::kGenerator, a.generator, "mock://echo");
  auto judge = g.Provider(Role::kJudge, a.judge, "mock://second");
  std::vector<Json> lines;
  std::vector<double> successes;
  std::int64_t interrupted = 0;
  for (const auto& inst : instances) {
    auto r = arena::IterateTranssuasion(inst, *generator, *judge, cfg);
    Json line = arena::ToJson(r);
    line["instance_id"] = inst.instance_id;
    lines.push_back(line);
    successes.push_back(r.n_success);
    if (r.interrupted) ++interrupted;
  }
  if (!a.out.empty()) WriteJsonLinesFile(a.out, lines);
  WriteJsonTo(a.leaderboard,
              {{"instances", instances.size()},
               {"mean_n_success", successes.empty() ? 0.0 : StableMean(successes)},
               {"interrupted", interrupted},
               {"k_failures", cfg.k_failures},
               {"max_turns", cfg.max_turns}},
              out);
}

// ---- serve ----------------------------------------------------------------

struct ServeArgs {
  std::string listen, data_dir, instances, judge;
};

void Serve(const ServeArgs& a, Globals& g, std::ostream& out) {
  if (!a.listen.empty()) g.config.Set("listen", a.listen);
  if (!a.data_dir.empty()) g.config.Set("data_dir", a.data_dir);
  if (!a.instances.empty()) g.config.Set("instances", a.instances);
  if (!a.judge.empty()) g.config.Set("provider.judge.url", a.judge);
  ServiceConfig cfg = ServiceConfigFrom(g.config);
  cfg.workers = std::max(cfg.workers, g.workers);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ArenaService service(cfg, providers::MakeProvider(cfg.judge));
  HttpServer server(service);
  int port = server.Bind(cfg.host, cfg.port);
  out << Json{{"listening", cfg.host + ":" + std::to_string(port)},
              {"data_dir", cfg.data_dir.string()}}
             .dump()
      << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
  });
  server.Listen();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
}

Json ErrorJson(const std::exception& e) {
  Json j;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = err->kind();
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) j["line"] = pe->line();
    if (const auto* ie = dynamic_cast<const IntegrityError*>(&e)) j["match_id"] = ie->match_id();
  } else if (dynamic_cast<const Json::exception*>(&e)) {
    j["error"] = "parse";
  } else if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) {
    j["error"] = "io";
  } else {
    j["error"] = "internal";
  }
  j["message"] = e.what();
  return j;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Persuasion benchmark toolkit: corpus, pair mining, benchmark and arena", "persuasion"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Key-value configuration file");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);

  // corpus
  CorpusArgs ca;
  auto* corpus_cmd = app.add_subcommand("corpus", "Ingest, filter and percentile posts");
  corpus_cmd->require_subcommand(1);
  auto* c_ingest = corpus_cmd->add_subcommand("ingest", "Raw records to PostRecords");
  c_ingest->add_option("--in", ca.in)->required();
  c_ingest->add_option("--out", ca.out)->required();
  auto* c_filter = corpus_cmd->add_subcommand("filter", "Reply/date/length/likes filters");
  c_filter->add_option("--in", ca.in)->required();
  c_filter->add_option("--out", ca.out)->required();
  c_filter->add_option("--report", ca.report, "FilterReport JSON (default stdout)");
  c_filter->add_option("--cutoff", ca.cutoff, "Drop posts before this date")->capture_default_str();
  c_filter->add_option("--min-words", ca.min_words)->capture_default_str();
  c_filter->add_option("--min-likes", ca.min_likes)->capture_default_str();
  c_filter->add_flag("--keep-raw-text", ca.keep_raw_text, "Do not normalize kept posts");
  auto* c_caption = corpus_cmd->add_subcommand("caption", "Verbalize media with a captioner");
  c_caption->add_option("--in", ca.in)->required();
  c_caption->add_option("--out", ca.out)->required();
  c_caption->add_option("--captioner", ca.captioner, "Captioner endpoint");
  c_caption->add_option("--report", ca.report);
  auto* c_pct = corpus_cmd->add_subcommand("percentiles", "Like percentiles per group");
  c_pct->add_option("--in", ca.in)->required();
  c_pct->add_option("--out", ca.out)->required();
  c_pct->add_option("--group", ca.group, "account-month or month")->capture_default_str();
  auto* c_acc = corpus_cmd->add_subcommand("accounts", "Profile, classify and filter accounts");
  c_acc->add_option("--posts", ca.in)->required();
  c_acc->add_option("--accounts", ca.accounts)->required();
  c_acc->add_option("--out", ca.out)->required();
  c_acc->add_option("--report", ca.report);
  c_acc->add_option("--classifier", ca.classifier, "Classifier endpoint");
  c_acc->add_option("--min-posts", ca.min_posts)->capture_default_str();
  c_acc->add_option("--max-daily", ca.max_daily)->capture_default_str();
  c_acc->add_option("--max-news-share", ca.max_news_share)->capture_default_str();

  // pairminer
  MineArgs ma;
  auto* pm_cmd = app.add_subcommand("pairminer", "Mine same-account transsuasion pairs");
  pm_cmd->require_subcommand(1);
  auto* pm_mine = pm_cmd->add_subcommand("mine", "Candidate generation, gating and capping");
  pm_mine->add_option("--posts", ma.posts)->required();
  pm_mine->add_option("--out", ma.out)->required();
  pm_mine->add_option("--thresholds", ma.thresholds, "GateThresholds JSON");
  pm_mine->add_option("--retry-queue", ma.retry_queue, "Deferred candidates (NDJSON)");
  pm_mine->add_option("--contexts", ma.contexts, "Link key -> page excerpt JSON");
  pm_mine->add_option("--summary", ma.summary, "Summary JSON (default stdout)");
  pm_mine->add_option("--embedder", ma.embedder, "Embedder endpoint");

  // transcreate
  TranscreateArgs ta;
  auto* tc_cmd = app.add_subcommand("transcreate", "Group accounts and mine cross-account pairs");
  tc_cmd->require_subcommand(1);
  auto* tc_mine = tc_cmd->add_subcommand("mine", "Company grouping and pair mining");
  tc_mine->add_option("--posts", ta.posts)->required();
  tc_mine->add_option("--out", ta.out)->required();
  tc_mine->add_option("--accounts", ta.accounts);
  tc_mine->add_option("--groups-out", ta.groups_out);
  tc_mine->add_option("--summary", ta.summary);
  tc_mine->add_option("--jaccard-min", ta.jaccard_min)->capture_default_str();
  tc_mine->add_option("--cosine-min", ta.cosine_min)->capture_default_str();
  tc_mine->add_option("--delta-percentile-min", ta.delta_min)->capture_default_str();
  tc_mine->add_option("--max-pairs-per-post", ta.max_per_post)->capture_default_str();
  tc_mine->add_option("--embedder", ta.embedder);
  tc_mine->add_option("--assistant", ta.assistant, "Classifier endpoint for singletons");

  // bench
  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Build, score and emit benchmark data");
  bench_cmd->require_subcommand(1);
  auto add_split_opts = [&](CLI::App* cmd) {
    cmd->add_option("--split", ba.split, "none, random, brand or time")->capture_default_str();
    cmd->add_option("--seed", ba.seed)->capture_default_str();
    cmd->add_option("--holdout", ba.holdout, "Comma-separated held-out accounts");
    cmd->add_option("--cutoff", ba.cutoff, "Time-split cutoff date");
    cmd->add_option("--test-fraction", ba.test_fraction)->capture_default_str();
    cmd->add_option("--accounts", ba.accounts);
    cmd->add_option("--contexts", ba.contexts);
    cmd->add_option("--templates", ba.templates, "Template directory");
    cmd->add_option("--report", ba.report);
  };
  auto* b_build = bench_cmd->add_subcommand("build", "Render task instances");
  b_build->add_option("--task", ba.task)->required();
  b_build->add_option("--out", ba.out)->required();
  b_build->add_option("--posts", ba.posts);
  b_build->add_option("--pairs", ba.pairs);
  b_build->add_option("--tc-pairs", ba.tc_pairs);
  b_build->add_option("--blog", ba.blog);
  b_build->add_option("--human", ba.human);
  b_build->add_option("--side", ba.side, "test or train")->capture_default_str();
  b_build->add_option("--skipped", ba.skipped, "Skipped items (NDJSON)");
  add_split_opts(b_build);
  auto* b_score = bench_cmd->add_subcommand("score", "Score a submission");
  b_score->add_option("--instances", ba.instances)->required();
  b_score->add_option("--submission", ba.submission)->required();
  b_score->add_option("--task", ba.task);
  b_score->add_option("--metric", ba.metric)->capture_default_str();
  b_score->add_option("--embedder", ba.embedder);
  b_score->add_option("--report", ba.report);
  auto* b_emit = bench_cmd->add_subcommand("emit", "Instruction examples from the train split");
  b_emit->add_option("--posts", ba.posts)->required();
  b_emit->add_option("--pairs", ba.pairs)->required();
  b_emit->add_option("--out", ba.out)->required();
  b_emit->add_option("--tasks", ba.tasks)->capture_default_str();
  b_emit->add_option("--explain-k", ba.explain_k, "Pairs to augment with explanations");
  b_emit->add_option("--generator", ba.generator);
  add_split_opts(b_emit);
  auto* b_human = bench_cmd->add_subcommand("human", "Human-study transfer scores");
  b_human->add_option("--instances", ba.instances)->required();
  b_human->add_option("--generator", ba.generator);
  b_human->add_option("--scorer", ba.scorer);
  b_human->add_option("--report", ba.report);

  // arena
  ArenaArgs aa;
  auto* arena_cmd = app.add_subcommand("arena", "Judge-refereed Elo tournaments");
  arena_cmd->require_subcommand(1);
  auto* a_run = arena_cmd->add_subcommand("run", "Schedule and run a tournament");
  a_run->add_option("--players", aa.players)->required();
  a_run->add_option("--instances", aa.instances)->required();
  a_run->add_option("--rounds", aa.rounds)->capture_default_str();
  a_run->add_option("--seed", aa.seed)->capture_default_str();
  a_run->add_option("--task", aa.task);
  a_run->add_option("--judge", aa.judge);
  a_run->add_option("--log", aa.log, "Match log (NDJSON)");
  a_run->add_flag("--overwrite", aa.overwrite, "Replace an existing match log");
  a_run->add_option("--leaderboard", aa.leaderboard, "Leaderboard JSON (default stdout)");
  a_run->add_option("--k-factor", aa.k_factor)->capture_default_str();
  a_run->add_option("--initial-rating", aa.initial_rating)->capture_default_str();
  a_run->add_option("--instances-per-round", aa.per_round);
  a_run->add_flag("--single-order", aa.single_order, "Judge each comparison in one order");
  auto* a_replay = arena_cmd->add_subcommand("replay", "Recompute ratings from a match log");
  a_replay->add_option("--log", aa.log)->required();
  a_replay->add_option("--players", aa.players);
  a_replay->add_option("--k-factor", aa.k_factor)->capture_default_str();
  a_replay->add_option("--initial-rating", aa.initial_rating)->capture_default_str();
  a_replay->add_option("--leaderboard", aa.leaderboard);
  auto* a_bt = arena_cmd->add_subcommand("bt", "Bradley-Terry fit over a match log");
  a_bt->add_option("--log", aa.log)->required();
  a_bt->add_option("--task", aa.task);
  a_bt->add_option("--initial-rating", aa.initial_rating)->capture_default_str();
  a_bt->add_option("--leaderboard", aa.leaderboard);
  auto* a_loop = arena_cmd->add_subcommand("loop", "Iterative improvement with K-failure stop");
  a_loop->add_option("--instances", aa.instances)->required();
  a_loop->add_option("--instance-id", aa.instance_id);
  a_loop->add_option("--task", aa.task);
  a_loop->add_option("--k-failures", aa.k_failures)->capture_default_str();
  a_loop->add_option("--max-turns", aa.max_turns)->capture_default_str();
  a_loop->add_option("--generator", aa.generator);
  a_loop->add_option("--judge", aa.judge);
  a_loop->add_option("--out", aa.out, "Per-instance results (NDJSON)");
  a_loop->add_option("--report", aa.leaderboard);

  // serve
  ServeArgs sa;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP arena service");
  serve_cmd->add_option("--listen", sa.listen, "host:port");
  serve_cmd->add_option("--data-dir", sa.data_dir);
  serve_cmd->add_option("--instances", sa.instances, "Benchmark build for submissions");
  serve_cmd->add_option("--judge", sa.judge);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << Json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    g.Load();
    if (c_ingest->parsed()) CorpusIngest(ca);
    else if (c_filter->parsed()) CorpusFilter(ca, out);
    else if (c_caption->parsed()) CorpusCaption(ca, g, out);
    else if (c_pct->parsed()) CorpusPercentiles(ca);
    else if (c_acc->parsed()) CorpusAccounts(ca, g, out);
    else if (pm_mine->parsed()) PairminerMine(ma, g, out);
    else if (tc_mine->parsed()) TranscreateMine(ta, g, out);
    else if (b_build->parsed()) BenchBuild(ba, out);
    else if (b_score->parsed()) BenchScore(ba, g, out);
    else if (b_emit->parsed()) BenchEmit(ba, g, out);
    else if (b_human->parsed()) BenchHuman(ba, g, out);
    else if (a_run->parsed()) ArenaRun(aa, g, out);
    else if (a_replay->parsed()) ArenaReplay(aa, out);
    else if (a_bt->parsed()) ArenaBradleyTerry(aa, out);
    else if (a_loop->parsed()) ArenaLoop(aa, g, out);
    else if (serve_cmd->parsed()) Serve(sa, g, out);
  } catch (const std::exception& e) {
    err << ErrorJson(e).dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace persuasion::gateway

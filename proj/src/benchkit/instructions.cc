#include "persuasion/benchkit/instructions.h"

#include <algorithm>
#include <tuple>

#include "persuasion/common/errors.h"
#include "persuasion/common/rng.h"
#include "persuasion/pairminer/miner.h"

namespace persuasion::benchkit {
namespace {

using pairminer::TranssuasionPair;

std::string WithExplanation(const std::string& input, const std::string& explanation) {
  return input + "\n\nSuggestions for the improved version:\n" + explanation;
}

std::vector<std::string> SourcePosts(const TaskInstance& t) {
  std::vector<std::string> out;
  if (t.meta.contains("posts")) {
    for (const auto& p : t.meta["posts"]) out.push_back(p.get<std::string>());
  }
  return out;
}

InstructionExample FromInstance(const TaskInstance& t, const std::string& tag) {
  InstructionExample e;
  e.input = t.prompt;
  e.output = t.label ? *t.label : t.references.front();
  e.task = tag;
  e.source_posts = SourcePosts(t);
  return e;
}

EmitResult Emit(const SplitResult& split, const EmitOptions& options,
                const std::map<std::string, std::string>& explanations) {
  for (const auto& t : options.tasks) {
    if (!kInstructionTasks.count(t)) throw ConfigError("unknown instruction task '" + t + "'");
  }
  auto posts = split.train_posts;
  corpus::SortCanonical(posts);
  auto pairs = split.train_pairs;
  pairminer::SortPairsCanonical(pairs);
  const BuildContext& ctx = options.context;

  EmitResult out;
  auto add = [&](InstructionExample e) {
    ++out.counts[e.task];
    out.examples.push_back(std::move(e));
  };
  if (options.tasks.count("BS")) {
    for (const auto& t : BuildBsInstances(posts, ctx).instances) add(FromInstance(t, "BS"));
  }
  if (options.tasks.count("CS")) {
    auto model = KeywordModel::Build(posts);
    for (CsVariant v : {CsVariant::kKey, CsVariant::kImg, CsVariant::kWeb}) {
      for (const auto& t : BuildCsInstances(posts, v, model, ctx).instances) {
        add(FromInstance(t, t.task));
      }
    }
  }
  const bool gt = options.tasks.count("TS-GT") > 0;
  const bool ct = options.tasks.count("TS-CT") > 0;
  if (gt || ct) {
    for (const auto& p : pairs) {
      std::vector<TranssuasionPair> one = {p};
      auto it = explanations.find(p.pair_id());
      const std::string* expl = it == explanations.end() ? nullptr : &it->second;
      if (gt) {
        for (const auto& t : BuildGtInstances(one, ctx).instances) {
          auto e = FromInstance(t, "TS-GT");
          if (expl) {
            e.input = WithExplanation(e.input, *expl);
            e.explanation = *expl;
          }
          add(std::move(e));
        }
      }
      if (ct) {
        for (const auto& t : BuildCtInstances(one, ctx).instances) {
          auto e = FromInstance(t, "TS-CT");
          if (expl) {
            e.input = WithExplanation(e.input, *expl);
            e.explanation = *expl;
          }
          add(std::move(e));
        }
      }
      if (expl) ++out.augmented;
    }
  }
  CheckLeakage(out.examples, split.TestPostIds());
  std::set<std::string> test_pair_posts;
  for (const auto& p : split.test_pairs) {
    test_pair_posts.insert(p.t1.post_id);
    test_pair_posts.insert(p.t2.post_id);
  }
  CheckLeakage(out.examples, test_pair_posts);
  return out;
}

}  // namespace

Json ToJson(const InstructionExample& e) {
  Json j = {{"input", e.input},
            {"output", e.output},
            {"task", e.task},
            {"source_posts", e.source_posts}};
  j["explanation"] = e.explanation ? Json(*e.explanation) : Json(nullptr);
  return j;
}

void WriteInstructions(const std::filesystem::path& path,
                       const std::vector<InstructionExample>& examples) {
  std::vector<Json> lines;
  lines.reserve(examples.size());
  for (const auto& e : examples) lines.push_back(ToJson(e));
  WriteJsonLinesFile(path, lines);
}

void CheckLeakage(const std::vector<InstructionExample>& examples,
                  const std::set<std::string>& test_post_ids) {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    for (const auto& id : examples[i].source_posts) {
      if (test_post_ids.count(id)) {
        throw LeakageError("instruction example " + std::to_string(i) + " (" +
                           examples[i].task + ") uses test post '" + id + "'");
      }
    }
  }
}

EmitResult EmitInstructions(const SplitResult& split, const EmitOptions& options) {
  return Emit(split, options, {});
}

EmitResult SynthesizeExplanations(const SplitResult& split, const EmitOptions& options,
                                  providers::ProviderClient& generator, std::size_t k,
                                  std::uint64_t seed) {
  auto pairs = split.train_pairs;
  pairminer::SortPairsCanonical(pairs);
  if (k > pairs.size()) {
    throw PreconditionError("cannot sample " + std::to_string(k) + " of " +
                            std::to_string(pairs.size()) + " train pairs");
  }
  std::vector<std::size_t> idx(pairs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  StableRng rng(seed);
  rng.Shuffle(idx);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());

  const auto& tmpl = options.context.templates().Get("explanation");
  std::map<std::string, std::string> explanations;
  std::int64_t failures = 0;
  for (std::size_t i : idx) {
    const auto& p = pairs[i];
    try {
      std::string text = providers::Generate(
          tmpl.Render({{"tweet_a", p.t1.text}, {"tweet_b", p.t2.text}}), generator);
      if (text.empty()) {
        ++failures;
        continue;
      }
      explanations[p.pair_id()] = text;
    } catch (const ContractError&) {
      throw;
    } catch (const Error&) {
      ++failures;
    }
  }
  EmitResult out = Emit(split, options, explanations);
  out.augmentation_failures = failures;
  return out;
}

}  // namespace persuasion::benchkit

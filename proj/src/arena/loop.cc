#include "persuasion/arena/loop.h"

#include "persuasion/common/errors.h"
#include "persuasion/providers/operations.h"

namespace persuasion::arena {

void LoopConfig::Validate() const {
  if (k_failures < 1) throw ConfigError("k_failures must be at least 1");
  if (max_turns < 1) throw ConfigError("max_turns must be at least 1");
}

Json ToJson(const LoopResult& r) {
  Json history = Json::array();
  for (const auto& t : r.history) {
    history.push_back({{"turn", t.turn},
                       {"candidate", t.candidate},
                       {"accepted", t.accepted},
                       {"raw_verdict", t.raw_verdict}});
  }
  Json out = {{"final_generation", r.final_generation},
              {"n_success", r.n_success},
              {"turns", r.turns},
              {"interrupted", r.interrupted},
              {"history", history}};
  if (!r.error.empty()) out["error"] = r.error;
  return out;
}

LoopResult IterateTranssuasion(const benchkit::TaskInstance& instance,
                               providers::ProviderClient& generator,
                               providers::ProviderClient& judge, const LoopConfig& cfg,
                               const benchkit::TemplateRegistry* registry,
                               const std::optional<std::string>& initial) {
  cfg.Validate();
  const benchkit::TemplateRegistry& templates =
      registry ? *registry : benchkit::TemplateRegistry::Default();
  LoopResult result;
  try {
    result.final_generation = initial ? *initial : providers::Generate(instance.prompt, generator);
  } catch (const ContractError&) {
    throw;
  } catch (const Error& e) {
    result.interrupted = true;
    result.error = e.what();
    return result;
  }

  int failures = 0;
  while (result.turns < cfg.max_turns && failures < cfg.k_failures) {
    LoopTurn turn;
    turn.turn = result.turns + 1;
    try {
      std::string prompt = templates.Render(
          "improve", {{"task_prompt", instance.prompt}, {"draft", result.final_generation}});
      turn.candidate = providers::Generate(prompt, generator);
      auto verdict =
          providers::JudgePair(instance.prompt, result.final_generation, turn.candidate, judge);
      turn.raw_verdict = verdict.raw_response;
      turn.accepted = verdict.winner == providers::Winner::kSecond;
    } catch (const ContractError&) {
      throw;
    } catch (const Error& e) {
      result.interrupted = true;
      result.error = e.what();
      break;
    }
    ++result.turns;
    if (turn.accepted) {
      ++result.n_success;
      failures = 0;
      result.final_generation = turn.candidate;
    } else {
      ++failures;
    }
    result.history.push_back(std::move(turn));
  }
  return result;
}

}  // namespace persuasion::arena

#ifndef PERSUASION_ARENA_LOOP_H_
#define PERSUASION_ARENA_LOOP_H_

#include <optional>
#include <string>
#include <vector>

#include "persuasion/benchkit/instances.h"
#include "persuasion/benchkit/templates.h"
#include "persuasion/common/jsonl.h"
#include "persuasion/providers/provider.h"

namespace persuasion::arena {

struct LoopConfig {
  int k_failures = 3;
  int max_turns = 10;

  void Validate() const;
};

struct LoopTurn {
  int turn = 0;
  std::string candidate;
  bool accepted = false;
  std::string raw_verdict;
};

struct LoopResult {
  std::string final_generation;
  int n_success = 0;
  int turns = 0;
  bool interrupted = false;
  std::string error;
  std::vector<LoopTurn> history;
};

Json ToJson(const LoopResult& result);

// Turn 0 asks for an initial generation from the instance prompt; each later
// turn asks for an improvement of the latest accepted output and lets the
// judge compare (previous, candidate). A turn succeeds when the candidate
// wins. If `initial` is given it replaces the turn-0 generation.
LoopResult IterateTranssuasion(const benchkit::TaskInstance& instance,
                               providers::ProviderClient& generator,
                               providers::ProviderClient& judge, const LoopConfig& cfg,
                               const benchkit::TemplateRegistry* registry = nullptr,
                               const std::optional<std::string>& initial = std::nullopt);

}  // namespace persuasion::arena

#endif  // PERSUASION_ARENA_LOOP_H_

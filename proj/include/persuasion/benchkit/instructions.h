#ifndef PERSUASION_BENCHKIT_INSTRUCTIONS_H_
#define PERSUASION_BENCHKIT_INSTRUCTIONS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "persuasion/benchkit/instances.h"
#include "persuasion/benchkit/splits.h"

namespace persuasion::benchkit {

struct InstructionExample {
  std::string input;
  std::string output;
  std::string task;
  std::optional<std::string> explanation;
  std::vector<std::string> source_posts;

  friend bool operator==(const InstructionExample&, const InstructionExample&) = default;
};

Json ToJson(const InstructionExample& example);
void WriteInstructions(const std::filesystem::path& path,
                       const std::vector<InstructionExample>& examples);

// Task families accepted by EmitInstructions.
inline const std::set<std::string> kInstructionTasks = {"BS", "CS", "TS-GT", "TS-CT"};

struct EmitOptions {
  std::set<std::string> tasks;
  BuildContext context;
};

struct EmitResult {
  std::vector<InstructionExample> examples;
  std::map<std::string, std::int64_t> counts;  // per task tag
  std::int64_t augmented = 0;
  std::int64_t augmentation_failures = 0;
};

// Renders training examples from the train side of `split` only, in a fixed
// order: BS, CS (Key, Img, Web), then per pair TS-GT followed by its two
// TS-CT twins. Ends with CheckLeakage against the test side.
EmitResult EmitInstructions(const SplitResult& split, const EmitOptions& options);

// LeakageError naming the first example built from a test post.
void CheckLeakage(const std::vector<InstructionExample>& examples,
                  const std::set<std::string>& test_post_ids);

// Plain emission in which k seeded-sampled train pairs also carry an
// explanation from the generator: appended to the TS-GT input and to both
// TS-CT inputs. A failed generation leaves that pair plain and is counted.
// PreconditionError when k exceeds the number of train pairs.
EmitResult SynthesizeExplanations(const SplitResult& split, const EmitOptions& options,
                                  providers::ProviderClient& generator, std::size_t k,
                                  std::uint64_t seed);

}  // namespace persuasion::benchkit

#endif  // PERSUASION_BENCHKIT_INSTRUCTIONS_H_

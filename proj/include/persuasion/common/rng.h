#ifndef PERSUASION_COMMON_RNG_H_
#define PERSUASION_COMMON_RNG_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace persuasion {

// Seeded generator whose derived draws are identical on every platform.
// std::mt19937_64's raw output is fully specified by the standard, but the
// std distributions and std::shuffle are not, so the draws here are built
// directly on the engine.
class StableRng {
 public:
  explicit StableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, n), n > 0, by rejection sampling.
  std::uint64_t Index(std::uint64_t n);

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace persuasion

#endif  // PERSUASION_COMMON_RNG_H_

#ifndef PERSUASION_COMMON_STATS_H_
#define PERSUASION_COMMON_STATS_H_

#include <span>
#include <vector>

namespace persuasion {

// Neumaier-compensated summation, so means do not depend on how a parallel
// schedule happened to order partial results.
class StableSum {
 public:
  void Add(double x);
  double Value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double StableMean(std::span<const double> values);

// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> MidRanks(std::span<const double> values);

}  // namespace persuasion

#endif  // PERSUASION_COMMON_STATS_H_

#ifndef PERSUASION_CORPUS_PERCENTILES_H_
#define PERSUASION_CORPUS_PERCENTILES_H_

#include <string>
#include <vector>

#include "persuasion/corpus/records.h"

namespace persuasion::corpus {

enum class PercentileGrouping { kAccountMonth, kMonth };

PercentileGrouping ParseGrouping(const std::string& name);

// like_percentile = 100 * (midrank - 0.5) / group_size, where midrank is
// the 1-based rank of like_count within its group with ties averaged.
// A singleton group gets 50. Returns posts in canonical order.
std::vector<PostRecord> ComputePercentiles(std::vector<PostRecord> posts,
                                           PercentileGrouping grouping);

// Same formula over a bare list of values, in input order.
std::vector<double> MidrankPercentiles(const std::vector<double>& values);

enum class EngagementBin { kLow, kMedium, kHigh };

std::string ToString(EngagementBin bin);
EngagementBin ParseEngagementBin(const std::string& name);

struct BinEdges {
  double low_upper = 30.0;
  double medium_upper = 80.0;
};

// [0, low_upper) -> low, [low_upper, medium_upper) -> medium,
// [medium_upper, 100] -> high. RangeError outside [0, 100].
EngagementBin BinPercentile(double p, BinEdges edges = {});

}  // namespace persuasion::corpus

#endif  // PERSUASION_CORPUS_PERCENTILES_H_

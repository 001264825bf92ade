#ifndef PERSUASION_ARENA_ELO_H_
#define PERSUASION_ARENA_ELO_H_

#include <utility>

namespace persuasion::arena {

// Win expectancy of a against b on the base-10, 400-point logistic curve.
double ExpectedScore(double r_a, double r_b);

// s_a is 1 when a wins, 0 when b wins, 0.5 for a tie. The pair keeps its
// rating sum.
std::pair<double, double> UpdateRatings(double r_a, double r_b, double s_a,
                                        double k_factor);

}  // namespace persuasion::arena

#endif  // PERSUASION_ARENA_ELO_H_

#include "persuasion/arena/elo.h"

#include <cmath>

namespace persuasion::arena {

double ExpectedScore(double r_a, double r_b) {
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / 400.0));
}

std::pair<double, double> UpdateRatings(double r_a, double r_b, double s_a,
                                        double k_factor) {
  double e_a = ExpectedScore(r_a, r_b);
  double delta = k_factor * (s_a - e_a);
  return {r_a + delta, r_b - delta};
}

}  // namespace persuasion::arena

#include <cmath>

#include "exprog/tamp.hpp"

namespace exprog {

double lcb(double c_min, double c_max, int n, double delta) {
  if (n < 2) {
    return -std::numeric_limits<double>::infinity();
  }
  if (c_max == c_min) {
    return c_min;
  }
  return c_min - (c_max - c_min) / (n - 1) * std::pow(delta, -1.0 / n);
}

void ArmStats::record(std::optional<double> cost, int max_failures) {
  if (cost) {
    ++n;
    c_min = std::min(c_min, *cost);
    c_max = std::max(c_max, *cost);
    return;
  }
  ++failures;
  if (n == 0 && failures >= max_failures) {
    dead = true;
  }
}

std::optional<std::size_t> select_arm(std::span<const ArmStats> arms, double delta) {
  std::optional<std::size_t> best;
  double best_bound = 0.0;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i].dead || !arms[i].feasible()) continue;
    const double b = arms[i].bound(delta);
    if (!best || b < best_bound) {
      best = i;
      best_bound = b;
    }
  }
  return best;
}

}  // namespace exprog

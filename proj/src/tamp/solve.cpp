#include <algorithm>

#include "exprog/tamp.hpp"

namespace exprog {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t arm_seed(std::uint64_t master, const PlanSkeleton& skeleton) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_string(skeleton)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return mix_seed(master, h);
}

SolveResult solve(const World& world, const WorldState& w0, const GroundedTask& g, const SolveProfile& profile,
                  std::span<const PlanSkeleton> forced) {
  SolveResult result;
  std::vector<std::mt19937_64> rngs;
  std::vector<int> limits;

  auto add = [&](const PlanSkeleton& p, bool is_forced) {
    ArmReport arm{p, {}, std::nullopt};
    arm.stats.forced = is_forced;
    result.arms.push_back(std::move(arm));
    rngs.emplace_back(arm_seed(profile.seed, p));
    limits.push_back(is_forced ? profile.forced_failures : 1);
  };
  auto pull = [&](std::size_t i) {
    ++result.iterations;
    auto r = refine(result.arms[i].skeleton, world, w0, profile.budget, profile.cost, rngs[i]);
    result.arms[i].stats.record(r ? std::optional<double>(r->cost) : std::nullopt, limits[i]);
    if (!r) return;
    auto& arm_best = result.arms[i].best;
    if (profile.keep_arm_refinements && (!arm_best || r->cost < arm_best->cost)) {
      arm_best = *r;
    }
    if (!result.best || r->cost < result.best->cost) {
      result.best = std::move(r);
    }
  };
  auto feasible = [&] {
    return std::count_if(result.arms.begin(), result.arms.end(),
                         [](const ArmReport& a) { return a.stats.feasible(); });
  };
  auto known = [&](const PlanSkeleton& p) {
    return std::any_of(result.arms.begin(), result.arms.end(), [&](const ArmReport& a) { return a.skeleton == p; });
  };

  for (const auto& p : forced) {
    if (!known(p)) add(p, true);
  }
  for (std::size_t i = 0; i < result.arms.size(); ++i) {
    while (!result.arms[i].stats.dead && !result.arms[i].stats.feasible() &&
           result.iterations < profile.solve_iterations) {
      pull(i);
    }
  }

  const auto s0 = world.perceive(w0);
  SkeletonStream stream(s0, g, profile.search);
  while (feasible() < profile.max_candidates && result.iterations < profile.solve_iterations) {
    auto p = stream.next();
    if (!p) break;
    if (known(*p)) continue;
    add(*p, false);
    pull(result.arms.size() - 1);
  }

  std::vector<ArmStats> stats;
  while (result.iterations < profile.solve_iterations) {
    stats.clear();
    for (const auto& a : result.arms) stats.push_back(a.stats);
    const auto i = select_arm(stats, profile.delta);
    if (!i) break;
    pull(*i);
  }
  return result;
}

}  // namespace exprog

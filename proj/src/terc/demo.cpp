#include <algorithm>

#include "exprog/terc.hpp"

namespace exprog {

std::vector<Action> jitter_actions(std::span<const Action> actions, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> noise(-amplitude, amplitude);
  std::vector<Action> out(actions.begin(), actions.end());
  bool prev_grip = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool changes = out[i].grip != prev_grip;
    const bool approach = i + 1 < out.size() && out[i + 1].grip != out[i].grip;
    prev_grip = out[i].grip;
    if (changes || approach || i + 1 == out.size()) continue;
    out[i].waypoint.x = std::clamp(out[i].waypoint.x + noise(rng), 0.0, 1.0);
    out[i].waypoint.y = std::clamp(out[i].waypoint.y + noise(rng), 0.0, 1.0);
  }
  return out;
}

std::vector<Action> pad_actions(std::vector<Action> actions, Vec2 start, std::size_t min_frames) {
  const Action hold = actions.empty() ? Action{start, false} : actions.back();
  while (actions.size() < min_frames) actions.push_back(hold);
  return actions;
}

Trajectory generate_demo(const TaskDef& task, const WorldState& w0, const DemoConfig& config, std::uint64_t seed,
                         const World& world) {
  const auto r = eval(task.program, world.perceive(w0));
  if (!r.ok()) {
    throw DemoFailure("task " + std::to_string(task.id) + " does not ground: " + std::string(to_string(r.error)));
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < config.retries; ++attempt) {
    SolveProfile profile = config.profile;
    profile.seed = mix_seed(seed, static_cast<std::uint64_t>(attempt));
    profile.keep_arm_refinements = !config.noise_free;
    const auto res = solve(world, w0, r.task, profile);
    if (!res.ok()) continue;
    const Refinement* chosen = &*res.best;
    if (!config.noise_free) {
      std::vector<double> costs;
      for (const auto& arm : res.arms) {
        costs.push_back(arm.best ? arm.best->cost : std::numeric_limits<double>::infinity());
      }
      const auto p = boltzmann(costs, config.beta);
      const auto pick = std::discrete_distribution<std::size_t>(p.begin(), p.end())(rng);
      chosen = &*res.arms[pick].best;
    }
    auto actions = config.noise_free ? chosen->actions : jitter_actions(chosen->actions, config.jitter, rng);
    actions = pad_actions(std::move(actions), w0.agent.position, config.min_frames);
    if (actions.size() > config.max_frames) continue;
    auto tau = world.rollout(w0, actions);
    if (satisfies(task.program, tau, world)) {
      return tau;
    }
  }
  throw DemoFailure("no valid demonstration for task " + std::to_string(task.id));
}

DemoSet generate_demos(const TaskDef& task, int k, std::uint64_t seed, const DemoConfig& config, const World& world) {
  DemoSet set;
  set.task = task.id;
  for (int i = 0; i < k; ++i) {
    bool done = false;
    for (std::uint64_t attempt = 0; attempt < 6 && !done; ++attempt) {
      const std::uint64_t base = mix_seed(mix_seed(seed, static_cast<std::uint64_t>(i)), attempt);
      auto w0 = sample_environment(task, base, world);
      try {
        auto tau = generate_demo(task, w0, config, mix_seed(base, 1), world);
        set.environments.push_back(std::move(w0));
        set.demos.push_back(std::move(tau));
        done = true;
      } catch (const DemoFailure&) {
      }
    }
    if (!done) throw DemoFailure("could not generate demo " + std::to_string(i) + " for task " + std::to_string(task.id));
  }
  return set;
}

}  // namespace exprog

#include <cmath>

#include "exprog/terc.hpp"

namespace exprog {

double EvalReport::success_se() const {
  if (trials == 0) return 0.0;
  const double p = success_rate();
  return std::sqrt(p * (1.0 - p) / trials);
}

WorldState evaluation_environment(const TaskDef& task, int env, int pose, std::uint64_t seed, const World& world) {
  std::mt19937_64 objects_rng(mix_seed(seed, static_cast<std::uint64_t>(env) + 1));
  for (int attempt = 0; attempt < 50; ++attempt) {
    auto objects = sample_objects(task, objects_rng);
    std::mt19937_64 pose_rng(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(env) + 1),
                                      static_cast<std::uint64_t>(pose) + 1000));
    try {
      return sample_poses(task, std::move(objects), pose_rng, world);
    } catch (const SamplerExhausted&) {
    }
  }
  throw SamplerExhausted("no evaluation environment for task " + std::to_string(task.id));
}

bool equivalent_to_truth(const Program& p, const TaskDef& task, const EvalConfig& config, const World& world) {
  return extensional_equiv(p, task.program, task_state_sampler(task, world), config.equiv_samples,
                           mix_seed(config.seed, 0xE0u));
}

EvalReport evaluate(std::span<const Program> ranked, const TaskDef& task, const EvalConfig& config,
                    const World& world) {
  EvalReport report;
  report.task = task.id;
  for (std::size_t i = 0; i < ranked.size() && i < 10; ++i) {
    if (!equivalent_to_truth(ranked[i], task, config, world)) continue;
    report.top10 = true;
    report.top5 = report.top5 || i < 5;
    report.top1 = report.top1 || i == 0;
    break;
  }
  for (int env = 0; env < config.envs; ++env) {
    for (int pose = 0; pose < config.poses; ++pose) {
      ++report.trials;
      if (ranked.empty()) continue;
      const auto w = evaluation_environment(task, env, pose, config.seed, world);
      const auto r = eval(ranked.front(), world.perceive(w));
      if (!r.ok()) continue;
      SolveProfile profile = config.profile;
      profile.seed = mix_seed(config.seed, static_cast<std::uint64_t>(env * 100 + pose));
      const auto res = solve(world, w, r.task, profile);
      if (res.ok() && satisfies(task.program, res.best->trajectory, world)) ++report.successes;
    }
  }
  return report;
}

}  // namespace exprog

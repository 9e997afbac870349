#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "exprog/dsl.hpp"
#include "exprog/inverse.hpp"
#include "exprog/tamp.hpp"
#include "exprog/world.hpp"

namespace exprog {

struct ObjectSpec {
  std::optional<ShapeClass> shape;
  std::optional<Color> color;
};

/// Declarative environment sampler. Required objects always appear, optional
/// ones with `optional_p`; the remaining slots are random distractors that must
/// not match `exclude`.
struct SamplerSpec {
  std::vector<ObjectSpec> required;
  std::vector<ObjectSpec> optional;
  double optional_p = 0.5;
  int min_objects = 3;
  int max_objects = 6;
  std::optional<Node> exclude;
  /// Distractor colors come from this many randomly chosen colors (0 = all).
  int palette_size = 0;
};

struct TaskDef {
  int id = 0;
  std::string description;
  Program program;
  SamplerSpec sampler;

  bool hard() const { return id > 25; }
};

/// The 35-task corpus, ids 1..35.
const std::vector<TaskDef>& terc_tasks();
const TaskDef& terc_task(int id);
bool valid_task_id(int id);

class SamplerExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DemoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Object attributes (shapes and colors) for one environment.
std::vector<ObjectState> sample_objects(const TaskDef& task, std::mt19937_64& rng);
/// Poses and agent position for a fixed object set; checks the task validators.
WorldState sample_poses(const TaskDef& task, std::vector<ObjectState> objects, std::mt19937_64& rng,
                        const World& world);
WorldState sample_environment(const TaskDef& task, std::uint64_t seed, const World& world = World{});

/// Unique superlatives and frequency winners, non-empty goals, and every goal
/// object initially outside some of its goal regions.
bool environment_ok(const TaskDef& task, const WorldState& w, const World& world);

struct DemoConfig {
  bool noise_free = false;
  double jitter = 0.003;
  /// Inverse temperature of the demonstrator's skeleton choice.
  double beta = 0.05;
  std::size_t min_frames = 80;
  std::size_t max_frames = 120;
  int retries = 8;
  SolveProfile profile = SolveProfile::forward();
};

Trajectory generate_demo(const TaskDef& task, const WorldState& w0, const DemoConfig& config, std::uint64_t seed,
                         const World& world = World{});
/// Jittered copy of a refinement's actions; grip changes and their approach
/// waypoints are left exact.
std::vector<Action> jitter_actions(std::span<const Action> actions, double amplitude, std::mt19937_64& rng);
/// Appends hold-position frames until `min_frames`.
std::vector<Action> pad_actions(std::vector<Action> actions, Vec2 start, std::size_t min_frames);

struct DemoSet {
  int task = 0;
  std::vector<WorldState> environments;
  std::vector<Trajectory> demos;
};

DemoSet generate_demos(const TaskDef& task, int k, std::uint64_t seed, const DemoConfig& config = {},
                       const World& world = World{});

/// Mixes task-sampler states with generic random states.
StateSampler task_state_sampler(const TaskDef& task, const World& world = World{});

struct EvalConfig {
  int envs = 3;
  int poses = 5;
  int equiv_samples = 50;
  std::uint64_t seed = 0;
  SolveProfile profile = SolveProfile::forward();
};

struct EvalReport {
  int task = 0;
  bool top1 = false;
  bool top5 = false;
  bool top10 = false;
  int successes = 0;
  int trials = 0;

  double success_rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
  /// Binomial standard error of the success rate.
  double success_se() const;
};

bool equivalent_to_truth(const Program& p, const TaskDef& task, const EvalConfig& config,
                         const World& world = World{});

/// Comprehension of a ranked hypothesis list and success of its first entry.
EvalReport evaluate(std::span<const Program> ranked, const TaskDef& task, const EvalConfig& config,
                    const World& world = World{});

/// Environment for rollout (env, pose) of the evaluation protocol.
WorldState evaluation_environment(const TaskDef& task, int env, int pose, std::uint64_t seed,
                                  const World& world = World{});

}  // namespace exprog

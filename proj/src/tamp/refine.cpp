#include <algorithm>
#include <array>
#include <cmath>

#include "exprog/tamp.hpp"

namespace exprog {
namespace {

// Collision context for one operator: static obstacles plus the carried body
// expressed relative to the agent.
struct Scene {
  const World& world;
  std::vector<Circle> obstacles;
  std::vector<Circle> carried;
  double clearance;

  bool free(Vec2 q) const {
    const Rect& b = world.bounds();
    const Circle agent{q, world.config().agent_radius};
    if (!b.contains(agent, clearance) || blocked(agent)) return false;
    for (const auto& c : carried) {
      const Circle placed{q + c.center, c.radius};
      if (!b.contains(placed, clearance) || blocked(placed)) return false;
    }
    return true;
  }

  bool blocked(const Circle& c) const {
    const Circle grown{c.center, c.radius + clearance};
    return std::any_of(obstacles.begin(), obstacles.end(), [&](const Circle& o) { return overlap(grown, o); });
  }
};

Scene scene_for(const World& world, const WorldState& w, double clearance) {
  Scene s{world, world.obstacles(w), {}, clearance};
  if (w.agent.held) {
    const auto& obj = w.objects[w.agent.held->object];
    for (const auto& c : world.object_circles_at(obj, w.agent.held->offset)) {
      s.carried.push_back(c);
    }
  }
  return s;
}

// Executes actions one by one and records frames; false if the agent is ever
// stopped short of a waypoint.
struct Executor {
  const World& world;
  WorldState state;
  std::vector<Frame> frames;
  std::vector<Action> actions;

  bool run(const Action& a) {
    WorldState next = world.step(state, a);
    frames.push_back({state, a});
    actions.push_back(a);
    state = std::move(next);
    return state.agent.position == a.waypoint;
  }

  bool follow(std::span<const Vec2> path, bool grip) {
    const double max_step = world.config().max_step();
    for (std::size_t i = 1; i < path.size(); ++i) {
      const Vec2 a = path[i - 1];
      const Vec2 b = path[i];
      const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / max_step)));
      for (int k = 1; k <= n; ++k) {
        const Vec2 p = k == n ? b : lerp(a, b, static_cast<double>(k) / n);
        if (!run({p, grip})) return false;
      }
    }
    return true;
  }

  void rewind(std::size_t frame_count, WorldState at) {
    frames.resize(frame_count);
    actions.resize(frame_count);
    state = std::move(at);
  }
};

std::optional<Vec2> sample_grasp(const World& world, const WorldState& w, ObjectId o, const Scene& scene,
                                 const RefineBudget& budget, std::mt19937_64& rng) {
  const auto& obj = w.objects[o];
  const Vec2 center = obj.pose.position();
  const double reach =
      bounding_radius(world.local_cover(obj.shape)) + world.config().agent_radius + budget.max_grasp_gap + 1e-3;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> gap(budget.min_grasp_gap, budget.max_grasp_gap);
  const double phi = angle(rng);
  const double target = gap(rng);
  const Vec2 dir{std::cos(phi), std::sin(phi)};
  double lo = 0.0;
  double hi = reach;
  for (int i = 0; i < 50; ++i) {
    const double mid = 0.5 * (lo + hi);
    (world.grasp_gap(center + dir * mid, obj) < target ? lo : hi) = mid;
  }
  const Vec2 p = center + dir * hi;
  const double g = world.grasp_gap(p, obj);
  if (g < budget.min_grasp_gap || g > budget.max_grasp_gap || !scene.free(p)) {
    return std::nullopt;
  }
  WorldState probe = w;
  probe.agent.position = p;
  if (world.graspable(probe) != o) {
    return std::nullopt;
  }
  return p;
}

bool in_regions(const World& world, Vec2 c, RegionMask regions) {
  return (world.regions_at(c) & regions) == regions;
}

std::optional<Vec2> sample_placement(const World& world, const WorldState& w, const GroundedOp& op,
                                     const Scene& scene, const RefineBudget& budget, std::mt19937_64& rng) {
  const auto& held = *w.agent.held;
  const auto& obj = w.objects[held.object];
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto c = op.regions ? sample_in_regions(op.regions, world, world.config().delta_pose, rng)
                            : std::optional<Vec2>(Vec2{unit(rng), unit(rng)});
  if (!c) return std::nullopt;
  const Vec2 q = *c - held.offset;
  if (op.regions && !in_regions(world, q + held.offset, op.regions)) return std::nullopt;
  const auto body = world.object_circles_at(obj, *c);
  if (!world.inside(body, budget.clearance)) return std::nullopt;
  if (!scene.free(q)) return std::nullopt;
  return q;
}

}  // namespace

std::optional<Vec2> sample_in_regions(RegionMask regions, const World& world, double margin, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& cfg = world.config();
  auto disc = [&](Vec2 center, double radius) {
    const double r = radius * std::sqrt(unit(rng));
    const double t = 2.0 * M_PI * unit(rng);
    return center + Vec2{r * std::cos(t), r * std::sin(t)};
  };
  if (has(regions, Region::Middle)) {
    if (regions != bit(Region::Middle)) return std::nullopt;
    return disc({0.5, 0.5}, cfg.r_middle - margin);
  }
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (has(regions, Region::Left)) x1 = std::min(x1, 0.5 - margin);
  if (has(regions, Region::Right)) x0 = std::max(x0, 0.5 + margin);
  if (has(regions, Region::Bottom)) y1 = std::min(y1, 0.5 - margin);
  if (has(regions, Region::Top)) y0 = std::max(y0, 0.5 + margin);
  if (x0 >= x1 || y0 >= y1) return std::nullopt;
  if (has(regions, Region::Corner)) {
    std::vector<Vec2> corners;
    for (Vec2 v : std::array<Vec2, 4>{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}, Vec2{1, 1}}) {
      if (v.x >= x0 && v.x <= x1 && v.y >= y0 && v.y <= y1) corners.push_back(v);
    }
    if (corners.empty()) return std::nullopt;
    const Vec2 v = corners[std::uniform_int_distribution<std::size_t>(0, corners.size() - 1)(rng)];
    for (int i = 0; i < 64; ++i) {
      const Vec2 p = disc(v, cfg.r_corner - margin);
      if (p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1) return p;
    }
    return std::nullopt;
  }
  return Vec2{x0 + (x1 - x0) * unit(rng), y0 + (y1 - y0) * unit(rng)};
}

double plan_cost(Vec2 start, std::span<const Action> actions, std::size_t operators, const CostModel& model) {
  double length = 0.0;
  Vec2 prev = start;
  for (const auto& a : actions) {
    length += distance(prev, a.waypoint);
    prev = a.waypoint;
  }
  return model.scale * length + model.lambda * static_cast<double>(operators);
}

std::optional<Refinement> refine(const PlanSkeleton& skeleton, const World& world, const WorldState& w0,
                                 const RefineBudget& budget, const CostModel& cost, std::mt19937_64& rng) {
  for (int restart = 0; restart <= budget.global_restarts; ++restart) {
    Executor ex{world, w0, {}, {}};
    std::vector<std::size_t> op_end;
    bool ok = true;
    for (const auto& op : skeleton) {
      const WorldState before = ex.state;
      const std::size_t mark = ex.frames.size();
      const Scene scene = scene_for(world, before, budget.clearance);
      bool done = false;
      for (int attempt = 0; attempt <= budget.local_backtracks && !done; ++attempt) {
        ex.rewind(mark, before);
        std::optional<Vec2> target;
        for (int s = 0; s < budget.samples && !target; ++s) {
          if (op.kind == OpKind::Pick) {
            if (before.agent.held || op.object >= before.objects.size()) break;
            target = sample_grasp(world, before, op.object, scene, budget, rng);
          } else {
            if (!before.agent.held || before.agent.held->object != op.object) break;
            target = sample_placement(world, before, op, scene, budget, rng);
          }
        }
        if (!target) break;
        const auto path = rrt_connect(before.agent.position, *target,
                                      [&](Vec2 q) { return scene.free(q); }, budget.motion, rng);
        if (!path) continue;
        const bool grip = op.kind == OpKind::Place;
        if (!ex.follow(*path, grip) || !ex.run({*target, !grip})) continue;
        if (op.kind == OpKind::Pick) {
          done = ex.state.agent.held && ex.state.agent.held->object == op.object;
        } else {
          done = !ex.state.agent.held &&
                 (op.regions == 0 || in_regions(world, ex.state.objects[op.object].pose.position(), op.regions));
        }
      }
      if (!done) {
        ok = false;
        break;
      }
      op_end.push_back(ex.actions.size());
    }
    if (!ok) continue;
    Refinement r;
    r.skeleton = skeleton;
    r.cost = plan_cost(w0.agent.position, ex.actions, skeleton.size(), cost);
    r.actions = std::move(ex.actions);
    r.trajectory.frames = std::move(ex.frames);
    r.trajectory.terminal = std::move(ex.state);
    r.op_end = std::move(op_end);
    return r;
  }
  return std::nullopt;
}

}  // namespace exprog

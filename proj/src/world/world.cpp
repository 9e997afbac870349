#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

#include "exprog/world.hpp"

namespace exprog {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::Left: return "Left";
    case Region::Right: return "Right";
    case Region::Top: return "Top";
    case Region::Bottom: return "Bottom";
    case Region::Corner: return "Corner";
    case Region::Middle: return "Middle";
  }
  return "?";
}

std::optional<Region> parse_region(std::string_view s) {
  for (int i = 0; i < kRegionCount; ++i) {
    if (to_string(static_cast<Region>(i)) == s) {
      return static_cast<Region>(i);
    }
  }
  return std::nullopt;
}

std::vector<Region> regions_of(RegionMask m) {
  std::vector<Region> out;
  for (int i = 0; i < kRegionCount; ++i) {
    if (has(m, static_cast<Region>(i))) {
      out.push_back(static_cast<Region>(i));
    }
  }
  return out;
}

std::string mask_to_string(RegionMask m) {
  std::string out;
  for (auto r : regions_of(m)) {
    if (!out.empty()) {
      out += ' ';
    }
    out += to_string(r);
  }
  return out;
}

bool region_set_satisfiable(RegionMask m) {
  if (has(m, Region::Middle) && m != bit(Region::Middle)) {
    return false;
  }
  if (has(m, Region::Left) && has(m, Region::Right)) {
    return false;
  }
  return !(has(m, Region::Top) && has(m, Region::Bottom));
}

const std::vector<RegionMask>& satisfiable_region_sets() {
  static const std::vector<RegionMask> sets = [] {
    std::vector<RegionMask> out;
    for (int m = 1; m < (1 << kRegionCount); ++m) {
      if (region_set_satisfiable(static_cast<RegionMask>(m))) {
        out.push_back(static_cast<RegionMask>(m));
      }
    }
    std::stable_sort(out.begin(), out.end(), [](RegionMask a, RegionMask b) {
      return std::popcount(static_cast<unsigned>(a)) < std::popcount(static_cast<unsigned>(b));
    });
    return out;
  }();
  return sets;
}

std::vector<Atom> SymbolicState::atoms() const {
  std::vector<Atom> out;
  for (ObjectId i = 0; i < at.size(); ++i) {
    for (auto r : regions_of(at[i])) {
      out.push_back({i, r});
    }
  }
  return out;
}

std::string ObjectState::name() const {
  std::string kind{to_string(shape.kind)};
  if (shape.kind == ShapeKind::Box) {
    kind = shape.is_square() ? "square" : "rectangle";
  }
  return std::string(to_string(color)) + "_" + kind + "_" + std::to_string(id);
}

World::World(WorldConfig config) : config_(config) {}

ObjectState World::make_object(ObjectId id, Shape shape, Color color, Pose pose) const {
  return ObjectState{id, shape, color, pose};
}

std::vector<Circle> World::local_cover(const Shape& shape) const {
  return decompose(shape, config_.decomposition_resolution);
}

std::vector<Circle> World::object_circles(const ObjectState& object) const {
  return object_circles_at(object, object.pose.position());
}

std::vector<Circle> World::object_circles_at(const ObjectState& object, Vec2 position) const {
  const auto local = local_cover(object.shape);
  return place(local, position, object.pose.theta);
}

std::vector<Circle> World::moving_body(const WorldState& w, Vec2 position) const {
  std::vector<Circle> body{{position, config_.agent_radius}};
  if (w.agent.held) {
    const auto& obj = w.objects.at(w.agent.held->object);
    const auto circles = object_circles_at(obj, position + w.agent.held->offset);
    body.insert(body.end(), circles.begin(), circles.end());
  }
  return body;
}

std::vector<Circle> World::obstacles(const WorldState& w, std::optional<ObjectId> skip) const {
  std::vector<Circle> out;
  for (const auto& obj : w.objects) {
    if ((w.agent.held && w.agent.held->object == obj.id) || (skip && *skip == obj.id)) {
      continue;
    }
    const auto circles = object_circles(obj);
    out.insert(out.end(), circles.begin(), circles.end());
  }
  return out;
}

bool World::inside(std::span<const Circle> body, double margin) const {
  return std::all_of(body.begin(), body.end(),
                     [&](const Circle& c) { return bounds_.contains(c, margin); });
}

double World::grasp_gap(Vec2 agent, const ObjectState& object) const {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& c : object_circles(object)) {
    gap = std::min(gap, distance(agent, c.center) - c.radius);
  }
  return gap - config_.agent_radius;
}

std::optional<ObjectId> World::graspable(const WorldState& w) const {
  std::optional<ObjectId> best;
  double best_gap = config_.eps_grasp;
  for (const auto& obj : w.objects) {
    const double gap = grasp_gap(w.agent.position, obj);
    if (gap <= best_gap && (!best || gap < best_gap)) {
      best = obj.id;
      best_gap = gap;
    }
  }
  return best;
}

bool World::valid(const WorldState& w) const {
  std::vector<std::vector<Circle>> covers;
  for (std::size_t i = 0; i < w.objects.size(); ++i) {
    const auto& obj = w.objects[i];
    if (obj.id != i || !obj.shape.valid()) {
      return false;
    }
    covers.push_back(object_circles(obj));
    if (!inside(covers.back())) {
      return false;
    }
  }
  for (std::size_t i = 0; i < covers.size(); ++i) {
    for (std::size_t j = i + 1; j < covers.size(); ++j) {
      if (collide(covers[i], covers[j])) {
        return false;
      }
    }
  }
  if (w.agent.held && w.agent.held->object >= w.objects.size()) {
    return false;
  }
  const auto body = moving_body(w, w.agent.position);
  return inside(body) && !collide(body, obstacles(w));
}

WorldState World::step(const WorldState& w, const Action& a) const {
  WorldState next = w;
  if (a.grip && !w.agent.grip) {
    if (const auto id = graspable(w)) {
      next.agent.held = Held{*id, w.objects[*id].pose.position() - w.agent.position};
    }
  } else if (!a.grip && w.agent.grip) {
    next.agent.held.reset();
  }
  next.agent.grip = a.grip;

  const Vec2 from = next.agent.position;
  const Vec2 target{std::clamp(a.waypoint.x, bounds_.min.x, bounds_.max.x),
                    std::clamp(a.waypoint.y, bounds_.min.y, bounds_.max.y)};
  const double len = distance(from, target);
  if (len == 0.0) {
    return next;
  }
  const double reach = config_.max_step();
  const Vec2 goal = len <= reach * (1.0 + 1e-12) ? target : from + (target - from) * (reach / len);

  // Advance in substeps and stop at the last contact-free one.
  const auto blockers = obstacles(next);
  Vec2 reached = from;
  for (int i = 1; i <= config_.substeps; ++i) {
    const Vec2 p = i == config_.substeps ? goal : lerp(from, goal, static_cast<double>(i) / config_.substeps);
    const auto body = moving_body(next, p);
    if (!inside(body) || collide(body, blockers)) {
      break;
    }
    reached = p;
  }
  next.agent.position = reached;
  if (next.agent.held) {
    auto& obj = next.objects[next.agent.held->object];
    const Vec2 p = reached + next.agent.held->offset;
    obj.pose.x = p.x;
    obj.pose.y = p.y;
  }
  return next;
}

Trajectory World::rollout(const WorldState& w0, std::span<const Action> actions) const {
  Trajectory tau;
  tau.frames.reserve(actions.size());
  WorldState w = w0;
  for (const auto& a : actions) {
    WorldState next = step(w, a);
    tau.frames.push_back({std::move(w), a});
    w = std::move(next);
  }
  tau.terminal = std::move(w);
  return tau;
}

RegionMask World::regions_at(Vec2 p) const {
  RegionMask m = 0;
  if (p.x < 0.5) m |= bit(Region::Left);
  if (p.x > 0.5) m |= bit(Region::Right);
  if (p.y > 0.5) m |= bit(Region::Top);
  if (p.y < 0.5) m |= bit(Region::Bottom);
  const std::array<Vec2, 4> vertices{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}, Vec2{1, 1}};
  for (const auto& v : vertices) {
    if (distance(p, v) <= config_.r_corner) {
      m |= bit(Region::Corner);
    }
  }
  if (distance(p, {0.5, 0.5}) <= config_.r_middle) {
    m |= bit(Region::Middle);
  }
  return m;
}

double World::boundary_distance(Vec2 p) const {
  double d = std::min(std::abs(p.x - 0.5), std::abs(p.y - 0.5));
  const std::array<Vec2, 4> vertices{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}, Vec2{1, 1}};
  for (const auto& v : vertices) {
    d = std::min(d, std::abs(distance(p, v) - config_.r_corner));
  }
  return std::min(d, std::abs(distance(p, {0.5, 0.5}) - config_.r_middle));
}

SymbolicState World::perceive(const WorldState& w) const {
  SymbolicState s;
  s.attributes.reserve(w.objects.size());
  s.at.reserve(w.objects.size());
  for (const auto& obj : w.objects) {
    s.attributes.push_back({obj.color, obj.shape.kind, obj.shape.is_square(), obj.shape.area(),
                            obj.shape.perimeter(), obj.shape.max_dimension()});
    s.at.push_back(regions_at(obj.pose.position()));
  }
  if (w.agent.held) {
    s.holding = w.agent.held->object;
  }
  return s;
}

}  // namespace exprog

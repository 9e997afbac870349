#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exprog/geometry.hpp"

namespace exprog {

enum class Color : std::uint8_t { Red, Green, Blue, Yellow, Orange, Purple, Pink };
inline constexpr int kColorCount = 7;

enum class ShapeKind : std::uint8_t { Circle, Box, Triangle };

std::string_view to_string(Color c);
std::string_view to_string(ShapeKind k);
std::optional<Color> parse_color(std::string_view s);
std::optional<ShapeKind> parse_shape_kind(std::string_view s);

/// Circle uses `a` as radius, box uses `a` x `b`, triangle is equilateral with side `a`.
struct Shape {
  ShapeKind kind = ShapeKind::Circle;
  double a = 0.0;
  double b = 0.0;

  static Shape circle(double radius) { return {ShapeKind::Circle, radius, 0.0}; }
  static Shape box(double width, double height) { return {ShapeKind::Box, width, height}; }
  static Shape triangle(double side) { return {ShapeKind::Triangle, side, 0.0}; }

  double area() const;
  double perimeter() const;
  double max_dimension() const;
  bool is_square() const { return kind == ShapeKind::Box && a == b; }
  bool valid() const { return a > 0.0 && (kind != ShapeKind::Box || b > 0.0); }

  /// True when `p` (shape frame, unrotated) lies inside or on the outline.
  bool contains(Vec2 p, double tolerance = 0.0) const;
  /// Polygon corners in the shape frame (counter-clockwise); empty for circles.
  std::vector<Vec2> outline() const;
  /// Evenly spaced points on the outline, shape frame.
  std::vector<Vec2> boundary_samples(int count) const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Circle cover of a shape in its own frame. The union of the returned circles
/// contains the whole shape; the overshoot shrinks as `resolution` grows.
std::vector<Circle> decompose(const Shape& shape, int resolution);

/// Upper bound on how far the cover returned by `decompose` reaches past the outline.
double decomposition_overshoot(const Shape& shape, int resolution);

/// Smallest resolution whose cover stays within `tolerance` of the outline.
int min_resolution_for(const Shape& shape, double tolerance);

enum class Region : std::uint8_t { Left, Right, Top, Bottom, Corner, Middle };
inline constexpr int kRegionCount = 6;
using RegionMask = std::uint8_t;

constexpr RegionMask bit(Region r) { return static_cast<RegionMask>(1u << static_cast<int>(r)); }
constexpr bool has(RegionMask m, Region r) { return (m & bit(r)) != 0; }

std::string_view to_string(Region r);
std::optional<Region> parse_region(std::string_view s);
std::vector<Region> regions_of(RegionMask m);
std::string mask_to_string(RegionMask m);

/// A region combination a single centroid can occupy: Middle stands alone,
/// Left/Right and Top/Bottom are exclusive.
bool region_set_satisfiable(RegionMask m);

/// Every non-empty satisfiable region combination, in a fixed order.
const std::vector<RegionMask>& satisfiable_region_sets();

struct WorldConfig {
  double dt = 0.1;
  double v_max = 0.5;
  double eps_grasp = 0.03;
  double eps_cover = 0.005;
  double delta_pose = 0.01;
  double agent_radius = 0.02;
  double r_middle = 0.15;
  double r_corner = 0.15;
  int decomposition_resolution = 4;
  int substeps = 8;

  double max_step() const { return v_max * dt; }
  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

using ObjectId = std::uint32_t;

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Objects are indexed by id: `objects[i].id == i` in every valid world.
struct ObjectState {
  ObjectId id = 0;
  Shape shape;
  Color color = Color::Red;
  Pose pose;

  std::string name() const;
  friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

struct Held {
  ObjectId object = 0;
  Vec2 offset;  // object position minus agent position

  friend bool operator==(const Held&, const Held&) = default;
};

struct AgentState {
  Vec2 position;
  bool grip = false;
  std::optional<Held> held;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct WorldState {
  std::vector<ObjectState> objects;
  AgentState agent;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct Action {
  Vec2 waypoint;
  bool grip = false;

  friend bool operator==(const Action&, const Action&) = default;
};

struct Frame {
  WorldState state;
  Action action;

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// States x_0 .. x_T: `frames[t].state` for t < T, then `terminal`.
struct Trajectory {
  std::vector<Frame> frames;
  WorldState terminal;

  std::size_t length() const { return frames.size(); }
  std::size_t state_count() const { return frames.size() + 1; }
  const WorldState& state(std::size_t t) const {
    return t < frames.size() ? frames[t].state : terminal;
  }
  const WorldState& initial() const { return state(0); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct ObjectAttributes {
  Color color = Color::Red;
  ShapeKind kind = ShapeKind::Circle;
  bool square = false;
  double area = 0.0;
  double perimeter = 0.0;
  double extent = 0.0;

  friend bool operator==(const ObjectAttributes&, const ObjectAttributes&) = default;
};

struct Atom {
  ObjectId object = 0;
  Region region = Region::Left;

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Perceived abstraction of a world. `at[i]` holds the regions containing the
/// centroid of object i.
struct SymbolicState {
  std::vector<ObjectAttributes> attributes;
  std::vector<RegionMask> at;
  std::optional<ObjectId> holding;

  std::size_t object_count() const { return attributes.size(); }
  bool holds(Atom a) const { return a.object < at.size() && has(at[a.object], a.region); }
  bool hand_empty() const { return !holding.has_value(); }
  std::vector<Atom> atoms() const;

  /// Equality on the dynamic part (atoms and hand); attributes never change along a trajectory.
  bool same_facts(const SymbolicState& other) const {
    return at == other.at && holding == other.holding;
  }
  friend bool operator==(const SymbolicState&, const SymbolicState&) = default;
};

/// Deterministic quasi-static pick-and-place world on the unit square.
class World {
 public:
  explicit World(WorldConfig config = {});

  const WorldConfig& config() const { return config_; }
  const Rect& bounds() const { return bounds_; }

  ObjectState make_object(ObjectId id, Shape shape, Color color, Pose pose) const;

  /// Circle cover of one object in world coordinates.
  std::vector<Circle> object_circles(const ObjectState& object) const;
  std::vector<Circle> object_circles_at(const ObjectState& object, Vec2 position) const;
  std::vector<Circle> local_cover(const Shape& shape) const;

  /// Agent disc plus any held object, with the agent at `position`.
  std::vector<Circle> moving_body(const WorldState& w, Vec2 position) const;
  /// Circles of every object except the held one and `skip`.
  std::vector<Circle> obstacles(const WorldState& w, std::optional<ObjectId> skip = std::nullopt) const;

  /// True when the circles stay inside the workspace (shrunk by `margin`).
  bool inside(std::span<const Circle> body, double margin = 0.0) const;

  /// Gap between the agent disc and an object's cover (negative when overlapping).
  double grasp_gap(Vec2 agent, const ObjectState& object) const;
  /// Nearest object whose gap is within eps_grasp.
  std::optional<ObjectId> graspable(const WorldState& w) const;

  /// No overlapping objects, agent clear of non-held objects, everything in bounds.
  bool valid(const WorldState& w) const;

  WorldState step(const WorldState& w, const Action& a) const;
  Trajectory rollout(const WorldState& w0, std::span<const Action> actions) const;

  SymbolicState perceive(const WorldState& w) const;
  RegionMask regions_at(Vec2 p) const;
  /// Distance from `p` to the nearest region boundary.
  double boundary_distance(Vec2 p) const;

 private:
  WorldConfig config_;
  Rect bounds_;
};

}  // namespace exprog

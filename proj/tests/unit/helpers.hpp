#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "exprog/world.hpp"

namespace testing {

using namespace exprog;

inline ObjectState object(ObjectId id, Shape shape, Color color, double x, double y, double theta = 0.0) {
  return ObjectState{id, shape, color, Pose{x, y, theta}};
}

inline WorldState scene(std::vector<ObjectState> objects, Vec2 agent = {0.5, 0.05}) {
  WorldState w;
  w.objects = std::move(objects);
  w.agent.position = agent;
  return w;
}

/// Symbolic state with one entry per (color, kind, area, regions).
struct Obj {
  Color color;
  ShapeKind kind;
  double area;
  RegionMask at;
  bool square = false;
};

inline SymbolicState symbolic(std::vector<Obj> objs) {
  SymbolicState s;
  for (const auto& o : objs) {
    s.attributes.push_back({o.color, o.kind, o.square, o.area, 4 * std::sqrt(o.area), std::sqrt(o.area)});
    s.at.push_back(o.at);
  }
  return s;
}

/// Point-in-shape test written from scratch in world coordinates.
inline bool point_in_object(Vec2 p, const ObjectState& o) {
  const double c = std::cos(-o.pose.theta), s = std::sin(-o.pose.theta);
  const double dx = p.x - o.pose.x, dy = p.y - o.pose.y;
  const double lx = c * dx - s * dy, ly = s * dx + c * dy;
  switch (o.shape.kind) {
    case ShapeKind::Circle: return lx * lx + ly * ly <= o.shape.a * o.shape.a;
    case ShapeKind::Box: return std::abs(lx) <= o.shape.a / 2 && std::abs(ly) <= o.shape.b / 2;
    case ShapeKind::Triangle: {
      const double h = o.shape.a * std::sqrt(3.0) / 2;
      const double top = 2 * h / 3, bottom = -h / 3;
      if (ly < bottom || ly > top) return false;
      const double half = (top - ly) / h * o.shape.a / 2;
      return std::abs(lx) <= half;
    }
  }
  return false;
}

}  // namespace testing

#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace exprog {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

inline Vec2 rotate(Vec2 v, double theta) {
  if (theta == 0.0) {
    return v;
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 lerp(Vec2 a, Vec2 b, double t) { return a + (b - a) * t; }

struct Circle {
  Vec2 center;
  double radius = 0.0;

  friend constexpr bool operator==(const Circle&, const Circle&) = default;
};

/// Tangent circles count as colliding.
inline bool overlap(const Circle& a, const Circle& b) {
  const double dx = b.center.x - a.center.x;
  const double dy = b.center.y - a.center.y;
  const double r = a.radius + b.radius;
  return dx * dx + dy * dy <= r * r;
}

/// True iff some pair of circles drawn one from each set overlaps.
bool collide(std::span<const Circle> a, std::span<const Circle> b);

/// Same test with every radius grown by `margin`.
bool collide_inflated(std::span<const Circle> a, std::span<const Circle> b, double margin);

/// Places local circles at `position` rotated by `theta`.
std::vector<Circle> place(std::span<const Circle> local, Vec2 position, double theta);

/// Smallest circle about the origin containing all local circles.
double bounding_radius(std::span<const Circle> local);

struct Rect {
  Vec2 min{0.0, 0.0};
  Vec2 max{1.0, 1.0};

  bool contains(Vec2 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool contains(const Circle& c, double margin = 0.0) const {
    const double r = c.radius + margin;
    return c.center.x - r >= min.x && c.center.x + r <= max.x && c.center.y - r >= min.y &&
           c.center.y + r <= max.y;
  }
};

}  // namespace exprog

#include "exprog/geometry.hpp"

#include <algorithm>

namespace exprog {

bool collide(std::span<const Circle> a, std::span<const Circle> b) {
  for (const auto& ca : a) {
    for (const auto& cb : b) {
      if (overlap(ca, cb)) {
        return true;
      }
    }
  }
  return false;
}

bool collide_inflated(std::span<const Circle> a, std::span<const Circle> b, double margin) {
  for (const auto& ca : a) {
    for (const auto& cb : b) {
      const double dx = cb.center.x - ca.center.x;
      const double dy = cb.center.y - ca.center.y;
      const double r = ca.radius + cb.radius + margin;
      if (dx * dx + dy * dy <= r * r) {
        return true;
      }
    }
  }
  return false;
}

std::vector<Circle> place(std::span<const Circle> local, Vec2 position, double theta) {
  std::vector<Circle> out;
  out.reserve(local.size());
  for (const auto& c : local) {
    out.push_back({position + rotate(c.center, theta), c.radius});
  }
  return out;
}

double bounding_radius(std::span<const Circle> local) {
  double r = 0.0;
  for (const auto& c : local) {
    r = std::max(r, norm(c.center) + c.radius);
  }
  return r;
}

}  // namespace exprog

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "exprog/world.hpp"

namespace exprog {
namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// Equilateral triangle with its centroid at the origin and one vertex pointing up.
std::array<Vec2, 3> triangle_vertices(double side) {
  const double h = side * kSqrt3 / 2.0;
  return {Vec2{0.0, 2.0 * h / 3.0}, Vec2{-side / 2.0, -h / 3.0}, Vec2{side / 2.0, -h / 3.0}};
}

// Circles centred halfway between the centroid and each vertex. Each one is
// the circumcircle of the kite (vertex, two edge midpoints, centroid), so the
// three together cover the triangle.
void add_kites(std::vector<Circle>& out, std::array<Vec2, 3> v) {
  const Vec2 g = (v[0] + v[1] + v[2]) * (1.0 / 3.0);
  for (const auto& p : v) {
    out.push_back({lerp(g, p, 0.5), distance(g, p) / 2.0});
  }
}

int triangle_level(int resolution) {
  return std::max(1, static_cast<int>(std::floor(std::sqrt(resolution / 3.0))));
}

std::pair<int, int> box_grid(double w, double h, int resolution) {
  const int nx = std::max(1, static_cast<int>(std::lround(std::sqrt(resolution * w / h))));
  const int ny = std::max(1, static_cast<int>(std::lround(std::sqrt(resolution * h / w))));
  return {nx, ny};
}

}  // namespace

std::string_view to_string(Color c) {
  switch (c) {
    case Color::Red: return "red";
    case Color::Green: return "green";
    case Color::Blue: return "blue";
    case Color::Yellow: return "yellow";
    case Color::Orange: return "orange";
    case Color::Purple: return "purple";
    case Color::Pink: return "pink";
  }
  return "?";
}

std::string_view to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Box: return "box";
    case ShapeKind::Triangle: return "triangle";
  }
  return "?";
}

std::optional<Color> parse_color(std::string_view s) {
  for (int i = 0; i < kColorCount; ++i) {
    if (to_string(static_cast<Color>(i)) == s) {
      return static_cast<Color>(i);
    }
  }
  return std::nullopt;
}

std::optional<ShapeKind> parse_shape_kind(std::string_view s) {
  for (auto k : {ShapeKind::Circle, ShapeKind::Box, ShapeKind::Triangle}) {
    if (to_string(k) == s) {
      return k;
    }
  }
  return std::nullopt;
}

double Shape::area() const {
  switch (kind) {
    case ShapeKind::Circle: return M_PI * a * a;
    case ShapeKind::Box: return a * b;
    case ShapeKind::Triangle: return kSqrt3 / 4.0 * a * a;
  }
  return 0.0;
}

double Shape::perimeter() const {
  switch (kind) {
    case ShapeKind::Circle: return 2.0 * M_PI * a;
    case ShapeKind::Box: return 2.0 * (a + b);
    case ShapeKind::Triangle: return 3.0 * a;
  }
  return 0.0;
}

double Shape::max_dimension() const {
  switch (kind) {
    case ShapeKind::Circle: return 2.0 * a;
    case ShapeKind::Box: return std::max(a, b);
    case ShapeKind::Triangle: return a;
  }
  return 0.0;
}

std::vector<Vec2> Shape::outline() const {
  switch (kind) {
    case ShapeKind::Box:
      return {{-a / 2, -b / 2}, {a / 2, -b / 2}, {a / 2, b / 2}, {-a / 2, b / 2}};
    case ShapeKind::Triangle: {
      const auto v = triangle_vertices(a);
      return {v[1], v[2], v[0]};
    }
    default: return {};
  }
}

bool Shape::contains(Vec2 p, double tolerance) const {
  switch (kind) {
    case ShapeKind::Circle:
      return norm(p) <= a + tolerance;
    case ShapeKind::Box:
      return std::abs(p.x) <= a / 2.0 + tolerance && std::abs(p.y) <= b / 2.0 + tolerance;
    case ShapeKind::Triangle: {
      const auto v = triangle_vertices(a);
      for (int i = 0; i < 3; ++i) {
        const Vec2 e = v[(i + 1) % 3] - v[i];
        const Vec2 outward{e.y, -e.x};  // vertices run counter-clockwise
        if (dot(p - v[i], outward) / norm(outward) > tolerance) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

std::vector<Vec2> Shape::boundary_samples(int count) const {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(count));
  if (kind == ShapeKind::Circle) {
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * M_PI * i / count;
      out.push_back({a * std::cos(t), a * std::sin(t)});
    }
    return out;
  }
  std::vector<Vec2> poly;
  if (kind == ShapeKind::Box) {
    poly = {{-a / 2, -b / 2}, {a / 2, -b / 2}, {a / 2, b / 2}, {-a / 2, b / 2}};
  } else {
    const auto v = triangle_vertices(a);
    poly.assign(v.begin(), v.end());
  }
  const double total = perimeter();
  for (int i = 0; i < count; ++i) {
    double s = total * i / count;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 p = poly[k];
      const Vec2 q = poly[(k + 1) % poly.size()];
      const double len = distance(p, q);
      if (s <= len || k + 1 == poly.size()) {
        out.push_back(lerp(p, q, std::min(1.0, s / len)));
        break;
      }
      s -= len;
    }
  }
  return out;
}

std::vector<Circle> decompose(const Shape& shape, int resolution) {
  if (resolution < 1) {
    throw std::invalid_argument("decompose: resolution must be >= 1");
  }
  std::vector<Circle> out;
  switch (shape.kind) {
    case ShapeKind::Circle:
      out.push_back({{0.0, 0.0}, shape.a});
      break;
    case ShapeKind::Box: {
      const auto [nx, ny] = box_grid(shape.a, shape.b, resolution);
      const double cw = shape.a / nx;
      const double ch = shape.b / ny;
      const double r = std::hypot(cw, ch) / 2.0;
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          out.push_back({{-shape.a / 2 + cw * (i + 0.5), -shape.b / 2 + ch * (j + 0.5)}, r});
        }
      }
      break;
    }
    case ShapeKind::Triangle: {
      if (resolution < 3) {
        out.push_back({{0.0, 0.0}, shape.a / kSqrt3});
        break;
      }
      // Split into n^2 congruent sub-triangles and cover each with its kites.
      const int n = triangle_level(resolution);
      const auto v = triangle_vertices(shape.a);
      const Vec2 u = (v[2] - v[1]) * (1.0 / n);  // along the base
      const Vec2 w = (v[0] - v[1]) * (1.0 / n);  // towards the apex
      for (int row = 0; row < n; ++row) {
        for (int col = 0; col + row < n; ++col) {
          const Vec2 o = v[1] + u * col + w * row;
          add_kites(out, {o + w, o, o + u});
          if (col + row + 1 < n) {
            add_kites(out, {o + w + u, o + w, o + u});
          }
        }
      }
      break;
    }
  }
  return out;
}

double decomposition_overshoot(const Shape& shape, int resolution) {
  switch (shape.kind) {
    case ShapeKind::Circle:
      return 0.0;
    case ShapeKind::Box: {
      const auto [nx, ny] = box_grid(shape.a, shape.b, resolution);
      const double cw = shape.a / nx;
      const double ch = shape.b / ny;
      return std::hypot(cw, ch) / 2.0 - std::min(cw, ch) / 2.0;
    }
    case ShapeKind::Triangle: {
      if (resolution < 3) {
        return shape.a / (2.0 * kSqrt3);
      }
      const double side = shape.a / triangle_level(resolution);
      // kite radius is side / (2 sqrt 3); its centre sits half a radius from the edges
      return side / (4.0 * kSqrt3);
    }
  }
  return 0.0;
}

int min_resolution_for(const Shape& shape, double tolerance) {
  for (int r = 1; r < 100000; ++r) {
    if (decomposition_overshoot(shape, r) <= tolerance) {
      return r;
    }
  }
  throw std::invalid_argument("min_resolution_for: tolerance too small");
}

}  // namespace exprog

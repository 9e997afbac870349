#include <algorithm>
#include <cmath>

#include "exprog/tamp.hpp"

namespace exprog {
namespace {

struct Tree {
  std::vector<Vec2> points;
  std::vector<std::size_t> parent;

  std::size_t nearest(Vec2 q) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double dx = points[i].x - q.x;
      const double dy = points[i].y - q.y;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  std::size_t add(Vec2 p, std::size_t from) {
    points.push_back(p);
    parent.push_back(from);
    return points.size() - 1;
  }

  // Root-to-node polyline.
  std::vector<Vec2> branch(std::size_t i) const {
    std::vector<Vec2> out{points[i]};
    while (i != 0) {
      i = parent[i];
      out.push_back(points[i]);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

enum class Extend { Trapped, Advanced, Reached };

Extend extend(Tree& tree, Vec2 q, const FreeFn& free, const MotionParams& p, std::size_t& added) {
  const std::size_t near = tree.nearest(q);
  const Vec2 from = tree.points[near];
  const double d = distance(from, q);
  const bool reach = d <= p.step;
  const Vec2 to = reach ? q : from + (q - from) * (p.step / d);
  if (!segment_free(from, to, free, p.resolution)) {
    return Extend::Trapped;
  }
  added = tree.add(to, near);
  return reach ? Extend::Reached : Extend::Advanced;
}

void shortcut(std::vector<Vec2>& path, const FreeFn& free, const MotionParams& p, std::mt19937_64& rng) {
  for (int round = 0; round < p.shortcut_rounds && path.size() > 2; ++round) {
    std::uniform_int_distribution<std::size_t> pick(0, path.size() - 1);
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i > j) std::swap(i, j);
    if (j - i < 2) continue;
    if (segment_free(path[i], path[j], free, p.resolution)) {
      path.erase(path.begin() + static_cast<std::ptrdiff_t>(i) + 1, path.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }
}

}  // namespace

bool segment_free(Vec2 a, Vec2 b, const FreeFn& free, double resolution) {
  const double d = distance(a, b);
  const int n = std::max(1, static_cast<int>(std::ceil(d / resolution)));
  for (int i = 0; i <= n; ++i) {
    if (!free(lerp(a, b, static_cast<double>(i) / n))) {
      return false;
    }
  }
  return true;
}

double path_length(std::span<const Vec2> path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += distance(path[i - 1], path[i]);
  }
  return total;
}

std::optional<std::vector<Vec2>> rrt_connect(Vec2 start, Vec2 goal, const FreeFn& free, const MotionParams& params,
                                             std::mt19937_64& rng) {
  if (!free(start) || !free(goal)) {
    return std::nullopt;
  }
  if (segment_free(start, goal, free, params.resolution)) {
    return std::vector<Vec2>{start, goal};
  }
  Tree a;
  Tree b;
  a.add(start, 0);
  b.add(goal, 0);
  bool a_is_start = true;
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    const Vec2 q{coord(rng), coord(rng)};
    std::size_t added = 0;
    if (extend(a, q, free, params, added) != Extend::Trapped) {
      const Vec2 target = a.points[added];
      std::size_t joined = 0;
      Extend r = Extend::Advanced;
      while (r == Extend::Advanced) {
        r = extend(b, target, free, params, joined);
      }
      if (r == Extend::Reached) {
        auto from_a = a.branch(added);
        auto from_b = b.branch(joined);
        std::reverse(from_b.begin(), from_b.end());
        from_a.insert(from_a.end(), from_b.begin() + 1, from_b.end());
        if (!a_is_start) std::reverse(from_a.begin(), from_a.end());
        shortcut(from_a, free, params, rng);
        return from_a;
      }
    }
    std::swap(a, b);
    a_is_start = !a_is_start;
  }
  return std::nullopt;
}

}  // namespace exprog

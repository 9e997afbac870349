#include <array>

#include "exprog/dsl.hpp"

namespace exprog {

SymbolicState random_symbolic_state(std::mt19937_64& rng, const World& world) {
  static constexpr std::array<double, 4> radii{0.04, 0.05, 0.06, 0.07};
  static constexpr std::array<double, 4> sides{0.06, 0.08, 0.1, 0.12};
  static constexpr std::array<double, 4> tri{0.08, 0.1, 0.12, 0.14};
  std::uniform_int_distribution<int> count(3, 6);
  std::uniform_int_distribution<int> pick4(0, 3);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> color(0, kColorCount - 1);
  std::uniform_real_distribution<double> coord(0.05, 0.95);
  std::bernoulli_distribution square(0.4);

  WorldState w;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Shape shape;
    switch (kind(rng)) {
      case 0: shape = Shape::circle(radii[pick4(rng)]); break;
      case 1: {
        const double a = sides[pick4(rng)];
        shape = square(rng) ? Shape::box(a, a) : Shape::box(a, sides[pick4(rng)]);
        break;
      }
      default: shape = Shape::triangle(tri[pick4(rng)]); break;
    }
    const auto c = static_cast<Color>(color(rng));
    const double x = coord(rng);
    const double y = coord(rng);
    w.objects.push_back(world.make_object(static_cast<ObjectId>(i), shape, c, {x, y, 0.0}));
  }
  return world.perceive(w);
}

StateSampler generic_sampler(const World& world) {
  return [world](std::mt19937_64& rng) { return random_symbolic_state(rng, world); };
}

bool extensional_equiv(const Program& a, const Program& b, const StateSampler& sampler, int n,
                       std::uint64_t seed) {
  if (a == b) {
    return true;
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    const auto s = sampler(rng);
    const auto ra = eval(a, s);
    const auto rb = eval(b, s);
    if (ra.ok() != rb.ok() || (ra.ok() && ra.task != rb.task)) {
      return false;
    }
  }
  return true;
}

}  // namespace exprog

#include <algorithm>
#include <map>
#include <set>

#include "exprog/terc.hpp"

namespace exprog {
namespace {

constexpr double kSpacing = 0.03;

Shape random_shape(std::optional<ShapeClass> cls, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  ShapeClass c;
  if (cls) {
    c = *cls;
  } else {
    const int k = std::uniform_int_distribution<int>(0, 2)(rng);
    c = k == 0 ? ShapeClass::Circle : k == 1 ? ShapeClass::Box : ShapeClass::Triangle;
  }
  if (c == ShapeClass::Box) {
    c = unit(rng) < 0.4 ? ShapeClass::Square : ShapeClass::Rectangle;
  }
  switch (c) {
    case ShapeClass::Circle: return Shape::circle(in(0.035, 0.065));
    case ShapeClass::Square: {
      const double a = in(0.05, 0.11);
      return Shape::box(a, a);
    }
    case ShapeClass::Rectangle: {
      const double a = in(0.07, 0.12);
      const double b = a * in(0.45, 0.75);
      return unit(rng) < 0.5 ? Shape::box(a, b) : Shape::box(b, a);
    }
    default: return Shape::triangle(in(0.07, 0.13));
  }
}

Color random_color(const std::vector<Color>& palette, std::mt19937_64& rng) {
  return palette[std::uniform_int_distribution<std::size_t>(0, palette.size() - 1)(rng)];
}

ObjectAttributes attributes_of(const ObjectState& o) {
  return {o.color, o.shape.kind, o.shape.is_square(), o.shape.area(), o.shape.perimeter(), o.shape.max_dimension()};
}

// Superlatives must pick one object and frequency winners one group.
bool unambiguous(const Node& n, const SymbolicState& s) {
  for (const auto& k : n.kids) {
    if (!unambiguous(k, s)) return false;
  }
  switch (n.op) {
    case Op::Largest:
    case Op::Smallest:
    case Op::Rank:
      return select(n.kids[0], s).empty() || select(n, s).size() == 1;
    case Op::MostCommon:
    case Op::LeastCommon: {
      std::map<int, int> counts;
      for (const auto& a : s.attributes) {
        ++counts[static_cast<Attribute>(n.tag) == Attribute::Shape ? static_cast<int>(a.kind)
                                                                   : static_cast<int>(a.color)];
      }
      if (counts.size() < 2) return false;
      int target = counts.begin()->second;
      for (const auto& [key, c] : counts) {
        target = n.op == Op::MostCommon ? std::max(target, c) : std::min(target, c);
      }
      return std::count_if(counts.begin(), counts.end(), [&](const auto& kv) { return kv.second == target; }) == 1;
    }
    default: return true;
  }
}

}  // namespace

std::vector<ObjectState> sample_objects(const TaskDef& task, std::mt19937_64& rng) {
  const auto& spec = task.sampler;
  std::vector<Color> palette;
  for (int c = 0; c < kColorCount; ++c) palette.push_back(static_cast<Color>(c));
  if (spec.palette_size > 0 && spec.palette_size < kColorCount) {
    std::shuffle(palette.begin(), palette.end(), rng);
    palette.resize(static_cast<std::size_t>(spec.palette_size));
  }
  std::vector<ObjectSpec> chosen = spec.required;
  std::bernoulli_distribution include(spec.optional_p);
  for (const auto& o : spec.optional) {
    if (include(rng) && static_cast<int>(chosen.size()) < spec.max_objects) chosen.push_back(o);
  }
  const int n = std::max(static_cast<int>(chosen.size()),
                         std::uniform_int_distribution<int>(spec.min_objects, spec.max_objects)(rng));

  std::vector<ObjectState> out;
  for (const auto& o : chosen) {
    ObjectState s;
    s.shape = random_shape(o.shape, rng);
    s.color = o.color ? *o.color : random_color(palette, rng);
    out.push_back(s);
  }
  while (static_cast<int>(out.size()) < n) {
    ObjectState s;
    bool ok = false;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
      s.shape = random_shape(std::nullopt, rng);
      s.color = random_color(palette, rng);
      ok = !spec.exclude || !test(*spec.exclude, attributes_of(s));
    }
    if (!ok) throw SamplerExhausted("no admissible distractor for task " + std::to_string(task.id));
    out.push_back(s);
  }
  std::shuffle(out.begin(), out.end(), rng);
  for (ObjectId i = 0; i < out.size(); ++i) out[i].id = i;
  return out;
}

WorldState sample_poses(const TaskDef& task, std::vector<ObjectState> objects, std::mt19937_64& rng,
                        const World& world) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 400; ++attempt) {
    WorldState w;
    w.objects = objects;
    std::vector<Circle> placed;
    bool ok = true;
    for (auto& o : w.objects) {
      const double margin = bounding_radius(world.local_cover(o.shape)) + 0.02;
      bool found = false;
      for (int k = 0; k < 200 && !found; ++k) {
        o.pose = {margin + (1.0 - 2.0 * margin) * unit(rng), margin + (1.0 - 2.0 * margin) * unit(rng), 0.0};
        const auto cover = world.object_circles(o);
        if (!collide_inflated(cover, placed, kSpacing)) {
          placed.insert(placed.end(), cover.begin(), cover.end());
          found = true;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    bool agent_ok = false;
    for (int k = 0; k < 200 && !agent_ok; ++k) {
      w.agent.position = {0.05 + 0.9 * unit(rng), 0.05 + 0.9 * unit(rng)};
      const Circle agent{w.agent.position, world.config().agent_radius};
      agent_ok = !collide_inflated(std::span<const Circle>(&agent, 1), placed, kSpacing / 2);
    }
    if (agent_ok && environment_ok(task, w, world)) {
      return w;
    }
  }
  throw SamplerExhausted("no valid layout for task " + std::to_string(task.id));
}

bool environment_ok(const TaskDef& task, const WorldState& w, const World& world) {
  if (!world.valid(w)) return false;
  const auto s = world.perceive(w);
  const auto r = eval(task.program, s);
  if (!r.ok() || !unambiguous(task.program.root(), s)) return false;
  std::set<ObjectId> seen;
  for (const auto& conj : r.task) {
    std::map<ObjectId, RegionMask> need;
    for (const auto& a : conj) need[a.object] |= bit(a.region);
    for (const auto& [o, m] : need) {
      if (!seen.insert(o).second) continue;
      if ((s.at[o] & m) == m) return false;
    }
  }
  return true;
}

WorldState sample_environment(const TaskDef& task, std::uint64_t seed, const World& world) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 50; ++attempt) {
    auto objects = sample_objects(task, rng);
    try {
      return sample_poses(task, std::move(objects), rng, world);
    } catch (const SamplerExhausted&) {
    }
  }
  throw SamplerExhausted("sampler exhausted for task " + std::to_string(task.id));
}

StateSampler task_state_sampler(const TaskDef& task, const World& world) {
  return [&task, world](std::mt19937_64& rng) {
    if (rng() & 1) {
      try {
        return world.perceive(sample_environment(task, rng(), world));
      } catch (const SamplerExhausted&) {
      }
    }
    return random_symbolic_state(rng, world);
  };
}

}  // namespace exprog

#include <algorithm>
#include <map>

#include "exprog/dsl.hpp"

namespace exprog {

Conjunction make_conjunction(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

bool holds(const Conjunction& g, const SymbolicState& s) {
  return std::all_of(g.begin(), g.end(), [&](const Atom& a) { return s.holds(a); });
}

std::string to_string(const Conjunction& g, const SymbolicState* names) {
  std::string out = "{";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ", ";
    out += "At(";
    if (names && g[i].object < names->attributes.size()) {
      const auto& a = names->attributes[g[i].object];
      out += std::string(to_string(a.color)) + "_" + std::string(to_string(a.kind)) + "_";
    }
    out += std::to_string(g[i].object) + ", " + std::string(to_string(g[i].region)) + ")";
  }
  return out + "}";
}

std::string to_string(const GroundedTask& g) {
  std::string out = "[";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ", ";
    out += to_string(g[i]);
  }
  return out + "]";
}

std::string_view to_string(EvalError e) {
  switch (e) {
    case EvalError::None: return "ok";
    case EvalError::EmptyTask: return "EmptyTask";
    case EvalError::IllegalMiddleComposition: return "IllegalMiddleComposition";
    case EvalError::UnsatisfiableGoal: return "UnsatisfiableGoal";
  }
  return "?";
}

bool test(const Node& p, const ObjectAttributes& a) {
  switch (p.op) {
    case Op::Color: return a.color == static_cast<Color>(p.tag);
    case Op::Shape: return matches(static_cast<ShapeClass>(p.tag), a);
    case Op::And: return test(p.kids[0], a) && test(p.kids[1], a);
    case Op::Or: return test(p.kids[0], a) || test(p.kids[1], a);
    case Op::Not: return !test(p.kids[0], a);
    default: return false;
  }
}

namespace {

std::vector<ObjectId> extreme(const std::vector<ObjectId>& ids, const SymbolicState& s, Measure m, bool largest) {
  if (ids.empty()) {
    return {};
  }
  double best = measure(m, s.attributes[ids[0]]);
  for (auto id : ids) {
    const double v = measure(m, s.attributes[id]);
    best = largest ? std::max(best, v) : std::min(best, v);
  }
  std::vector<ObjectId> out;
  std::copy_if(ids.begin(), ids.end(), std::back_inserter(out),
               [&](ObjectId id) { return measure(m, s.attributes[id]) == best; });
  return out;
}

int attribute_key(Attribute a, const ObjectAttributes& o) {
  return a == Attribute::Shape ? static_cast<int>(o.kind) : static_cast<int>(o.color);
}

std::vector<ObjectId> by_frequency(const SymbolicState& s, Attribute attr, bool most) {
  std::map<int, int> counts;
  for (const auto& o : s.attributes) {
    ++counts[attribute_key(attr, o)];
  }
  if (counts.empty()) {
    return {};
  }
  int target = counts.begin()->second;
  for (const auto& [key, n] : counts) {
    target = most ? std::max(target, n) : std::min(target, n);
  }
  std::vector<ObjectId> out;
  for (ObjectId i = 0; i < s.attributes.size(); ++i) {
    if (counts[attribute_key(attr, s.attributes[i])] == target) {
      out.push_back(i);
    }
  }
  return out;
}

// Appends the atoms for `ids` x `regions` to `out`.
void assign(Conjunction& out, const std::vector<ObjectId>& ids, RegionMask regions) {
  for (auto id : ids) {
    for (auto r : regions_of(regions)) {
      out.push_back({id, r});
    }
  }
}

struct Evaluator {
  const SymbolicState& s;
  EvalError error = EvalError::None;

  void task(const Node& n, GroundedTask& out) {
    switch (n.op) {
      case Op::Achieve: {
        Conjunction g;
        for (const auto& clause : n.kids) {
          assign(g, select(clause.kids[0], s), clause.kids[1].tag);
        }
        push(out, make_conjunction(std::move(g)));
        break;
      }
      case Op::Seq:
        for (const auto& k : n.kids) task(k, out);
        break;
      case Op::If:
        task(condition(n.kids[0]) ? n.kids[1] : n.kids[2], out);
        break;
      case Op::Each: {
        auto ids = select(n.kids[0], s);
        const auto m = static_cast<Measure>(n.tag);
        std::stable_sort(ids.begin(), ids.end(), [&](ObjectId a, ObjectId b) {
          const double va = measure(m, s.attributes[a]);
          const double vb = measure(m, s.attributes[b]);
          return n.number ? va > vb : va < vb;
        });
        for (auto id : ids) {
          Conjunction g;
          assign(g, {id}, n.kids[1].tag);
          push(out, make_conjunction(std::move(g)));
        }
        break;
      }
      default: break;
    }
  }

  bool condition(const Node& n) {
    const auto ids = select(n.kids[0], s);
    return n.op == Op::Exists ? !ids.empty() : static_cast<int>(ids.size()) == n.number;
  }

  void push(GroundedTask& out, Conjunction g) {
    if (g.empty()) {
      return;
    }
    if (const auto e = validate(g); e != EvalError::None && error == EvalError::None) {
      error = e;
    }
    out.push_back(std::move(g));
  }
};

}  // namespace

std::vector<ObjectId> select(const Node& n, const SymbolicState& s) {
  std::vector<ObjectId> out;
  switch (n.op) {
    case Op::All:
      for (ObjectId i = 0; i < s.attributes.size(); ++i) out.push_back(i);
      return out;
    case Op::Filter:
      for (ObjectId i = 0; i < s.attributes.size(); ++i) {
        if (test(n.kids[0], s.attributes[i])) out.push_back(i);
      }
      return out;
    case Op::Largest:
    case Op::Smallest:
      return extreme(select(n.kids[0], s), s, static_cast<Measure>(n.tag), n.op == Op::Largest);
    case Op::Rank: {
      const auto ids = select(n.kids[0], s);
      const auto m = static_cast<Measure>(n.tag);
      std::vector<double> values;
      for (auto id : ids) values.push_back(measure(m, s.attributes[id]));
      std::sort(values.begin(), values.end(), std::greater<>());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      if (n.number < 1 || static_cast<std::size_t>(n.number) > values.size()) {
        return {};
      }
      const double v = values[n.number - 1];
      std::copy_if(ids.begin(), ids.end(), std::back_inserter(out),
                   [&](ObjectId id) { return measure(m, s.attributes[id]) == v; });
      return out;
    }
    case Op::MostCommon:
    case Op::LeastCommon:
      return by_frequency(s, static_cast<Attribute>(n.tag), n.op == Op::MostCommon);
    case Op::Minus: {
      const auto a = select(n.kids[0], s);
      const auto b = select(n.kids[1], s);
      std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
      return out;
    }
    default: return out;
  }
}

EvalError validate(const Conjunction& g) {
  std::map<ObjectId, RegionMask> per_object;
  for (const auto& a : g) {
    per_object[a.object] |= bit(a.region);
  }
  EvalError result = EvalError::None;
  for (const auto& [id, m] : per_object) {
    if (has(m, Region::Middle) && m != bit(Region::Middle)) {
      return EvalError::IllegalMiddleComposition;
    }
    if (!region_set_satisfiable(m)) {
      result = EvalError::UnsatisfiableGoal;
    }
  }
  return result;
}

EvalResult eval(const Program& e, const SymbolicState& s) {
  Evaluator ev{s};
  EvalResult r;
  ev.task(e.root(), r.task);
  r.error = ev.error;
  if (r.ok() && r.task.empty()) {
    r.error = EvalError::EmptyTask;
  }
  if (!r.ok()) {
    r.task.clear();
  }
  return r;
}

GroundedTask flatten(std::span<const GroundedTask> parts) {
  GroundedTask out;
  for (const auto& p : parts) {
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

bool satisfies(const GroundedTask& g, std::span<const SymbolicState> states) {
  std::size_t stage = 0;
  for (const auto& s : states) {
    while (stage < g.size() && holds(g[stage], s)) {
      ++stage;
    }
    if (stage == g.size()) {
      return true;
    }
  }
  return stage == g.size();
}

bool satisfies(const Program& e, const Trajectory& tau, const World& world) {
  const auto r = eval(e, world.perceive(tau.initial()));
  if (!r.ok()) {
    return false;
  }
  std::vector<SymbolicState> states;
  states.reserve(tau.state_count());
  for (std::size_t t = 0; t < tau.state_count(); ++t) {
    states.push_back(world.perceive(tau.state(t)));
  }
  return satisfies(r.task, states);
}

}  // namespace exprog

#include <algorithm>
#include <set>

#include "exprog/tamp.hpp"

namespace exprog {

std::string to_string(const GroundedOp& op) {
  if (op.kind == OpKind::Pick) {
    return "Pick(" + std::to_string(op.object) + ")";
  }
  return "Place(" + std::to_string(op.object) + ", " + (op.regions ? mask_to_string(op.regions) : "*") + ")";
}

std::string to_string(const PlanSkeleton& plan) {
  std::string out;
  for (const auto& op : plan) {
    if (!out.empty()) out += "; ";
    out += to_string(op);
  }
  return "[" + out + "]";
}

std::optional<GroundedOp> parse_op(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    return std::nullopt;
  }
  const auto name = text.substr(0, open);
  const auto body = text.substr(open + 1, text.size() - open - 2);
  const auto comma = body.find(',');
  const auto id_text = body.substr(0, comma);
  ObjectId id = 0;
  try {
    id = static_cast<ObjectId>(std::stoul(std::string(id_text)));
  } catch (...) {
    return std::nullopt;
  }
  if (name == "Pick" && comma == std::string_view::npos) {
    return GroundedOp::pick(id);
  }
  if (name != "Place" || comma == std::string_view::npos) {
    return std::nullopt;
  }
  RegionMask m = 0;
  std::string rest(body.substr(comma + 1));
  std::size_t pos = 0;
  while (pos < rest.size()) {
    while (pos < rest.size() && rest[pos] == ' ') ++pos;
    auto end = rest.find(' ', pos);
    if (end == std::string::npos) end = rest.size();
    const auto word = rest.substr(pos, end - pos);
    if (word == "*") {
      // any placement
    } else if (const auto r = parse_region(word)) {
      m |= bit(*r);
    } else if (!word.empty()) {
      return std::nullopt;
    }
    pos = end;
  }
  return GroundedOp::place(id, m);
}

bool SymState::holds(const Conjunction& g) const {
  return std::all_of(g.begin(), g.end(), [&](const Atom& a) {
    return a.object < at.size() && has(at[a.object], a.region);
  });
}

std::optional<SymState> apply(const GroundedOp& op, const SymState& s) {
  if (op.object >= s.at.size()) {
    return std::nullopt;
  }
  SymState next = s;
  if (op.kind == OpKind::Pick) {
    if (s.holding) return std::nullopt;
    next.holding = op.object;
    next.at[op.object] = 0;
  } else {
    if (s.holding != op.object) return std::nullopt;
    next.holding.reset();
    next.at[op.object] = op.regions;
  }
  return next;
}

std::optional<SymState> execute(const PlanSkeleton& plan, const SymState& s) {
  std::optional<SymState> cur = s;
  for (const auto& op : plan) {
    cur = apply(op, *cur);
    if (!cur) break;
  }
  return cur;
}

bool achieves(const PlanSkeleton& plan, const SymState& s, const GroundedTask& g) {
  std::size_t stage = 0;
  auto advance = [&](const SymState& x) {
    while (stage < g.size() && x.holds(g[stage])) ++stage;
  };
  SymState cur = s;
  advance(cur);
  for (const auto& op : plan) {
    auto next = apply(op, cur);
    if (!next) return false;
    cur = std::move(*next);
    advance(cur);
  }
  return stage == g.size();
}

std::vector<GroundedOp> grounding_universe(std::size_t object_count, const GroundedTask& g) {
  std::set<GroundedOp> places;
  for (const auto& conj : g) {
    std::vector<RegionMask> masks(object_count, 0);
    for (const auto& a : conj) {
      if (a.object < object_count) masks[a.object] |= bit(a.region);
    }
    for (ObjectId o = 0; o < object_count; ++o) {
      if (masks[o]) places.insert(GroundedOp::place(o, masks[o]));
    }
  }
  std::vector<GroundedOp> out;
  for (ObjectId o = 0; o < object_count; ++o) {
    out.push_back(GroundedOp::pick(o));
  }
  for (ObjectId o = 0; o < object_count; ++o) {
    for (const auto& p : places) {
      if (p.object == o) out.push_back(p);
    }
    out.push_back(GroundedOp::place(o, 0));
  }
  return out;
}

namespace {

std::size_t xor_size(const Conjunction& a, const Conjunction& b) {
  std::vector<Atom> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  return diff.size();
}

}  // namespace

double hamming_heuristic(const Conjunction& s_atoms, const GroundedTask& g, std::size_t stage) {
  if (g.empty()) {
    return 0.0;
  }
  std::set<Atom> universe;
  for (const auto& conj : g) universe.insert(conj.begin(), conj.end());
  Conjunction relevant;
  std::copy_if(s_atoms.begin(), s_atoms.end(), std::back_inserter(relevant),
               [&](const Atom& a) { return universe.count(a) > 0; });
  double h = static_cast<double>(xor_size(relevant, g[std::min(stage, g.size() - 1)]));
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    h += static_cast<double>(xor_size(g[i], g[i + 1]));
  }
  return h - static_cast<double>(stage);
}

double hamming_heuristic(const SymState& s, const GroundedTask& g, std::size_t stage) {
  Conjunction atoms;
  for (ObjectId o = 0; o < s.at.size(); ++o) {
    for (auto r : regions_of(s.at[o])) atoms.push_back({o, r});
  }
  return hamming_heuristic(atoms, g, stage);
}

}  // namespace exprog

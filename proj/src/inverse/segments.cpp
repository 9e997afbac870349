#include <algorithm>
#include <set>

#include "exprog/inverse.hpp"

namespace exprog {
namespace {

bool contains(FactSet state, FactSet required) { return (state & required) == required; }

class SuffixTable {
 public:
  SuffixTable(const std::vector<std::vector<Segment>>& segments) : segments_(segments), memo_(segments.size()) {}

  const std::vector<MaximalPlan>& at(std::size_t i) {
    if (memo_[i]) return *memo_[i];
    std::vector<MaximalPlan> out;
    if (segments_[i].empty()) {
      out.push_back({{}, {i}});
    } else {
      for (const auto& seg : segments_[i]) {
        for (const auto& tail : at(seg.end)) {
          MaximalPlan p;
          p.ops.push_back(seg.op);
          p.ops.insert(p.ops.end(), tail.ops.begin(), tail.ops.end());
          p.bounds.push_back(i);
          p.bounds.insert(p.bounds.end(), tail.bounds.begin(), tail.bounds.end());
          out.push_back(std::move(p));
        }
      }
    }
    memo_[i] = std::move(out);
    return *memo_[i];
  }

 private:
  const std::vector<std::vector<Segment>>& segments_;
  std::vector<std::optional<std::vector<MaximalPlan>>> memo_;
};

}  // namespace

std::vector<std::vector<Segment>> discover_segments(std::span<const FactSet> states,
                                                    std::span<const OperatorFacts> ops) {
  std::vector<std::vector<Segment>> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t o = 0; o < ops.size(); ++o) {
      if (!contains(states[i], ops[o].pre)) continue;
      for (std::size_t k = i + 1; k < states.size(); ++k) {
        if (contains(states[k], ops[o].eff)) {
          out[i].push_back({i, k, o});
          break;
        }
        if (!contains(states[k], ops[o].mnt)) break;
      }
    }
  }
  return out;
}

std::vector<MaximalPlan> maximal_plans(std::span<const FactSet> states, std::span<const OperatorFacts> ops) {
  if (states.empty()) {
    return {};
  }
  const auto segments = discover_segments(states, ops);
  SuffixTable table(segments);
  auto out = table.at(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PlanSkeleton> maximal_skeletons(const SymbolicTrajectory& st, std::span<const GroundedOp> universe) {
  std::vector<FactSet> states;
  for (const auto& s : st.states) states.push_back(facts_of(s));
  std::vector<OperatorFacts> ops;
  for (const auto& op : universe) ops.push_back(operator_facts(op));
  std::set<PlanSkeleton> unique;
  for (const auto& p : maximal_plans(states, ops)) {
    PlanSkeleton sk;
    for (auto i : p.ops) sk.push_back(universe[i]);
    unique.insert(std::move(sk));
  }
  return {unique.begin(), unique.end()};
}

bool plan_satisfies(const PlanSkeleton& skeleton, const Trajectory& tau, const World& world) {
  const auto st = abstract(tau, world);
  std::set<GroundedOp> universe(skeleton.begin(), skeleton.end());
  for (ObjectId o = 0; o < tau.initial().objects.size(); ++o) {
    universe.insert(GroundedOp::pick(o));
    universe.insert(GroundedOp::place(o, 0));
  }
  const std::vector<GroundedOp> ops(universe.begin(), universe.end());
  const auto plans = maximal_skeletons(st, ops);
  return std::find(plans.begin(), plans.end(), skeleton) != plans.end();
}

}  // namespace exprog

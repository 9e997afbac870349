#include <stdexcept>

#include "exprog/inverse.hpp"

namespace exprog {

SymbolicTrajectory abstract(const Trajectory& tau, const World& world) {
  SymbolicTrajectory st;
  for (std::size_t t = 0; t < tau.state_count(); ++t) {
    auto s = world.perceive(tau.state(t));
    if (!st.states.empty() && st.states.back().same_facts(s)) {
      continue;
    }
    st.states.push_back(std::move(s));
    st.frame_index.push_back(t);
  }
  return st;
}

FactSet fact_at(ObjectId o, Region r) {
  return FactSet{1} << (o * kRegionCount + static_cast<int>(r));
}

FactSet fact_hand_empty() { return FactSet{1} << (kMaxFactObjects * kRegionCount); }

FactSet fact_holding(ObjectId o) { return FactSet{1} << (kMaxFactObjects * kRegionCount + 1 + o); }

FactSet facts_of(const SymbolicState& s) {
  if (s.at.size() > kMaxFactObjects) {
    throw std::invalid_argument("at most 8 objects are supported by the plan extractor");
  }
  FactSet f = 0;
  for (ObjectId o = 0; o < s.at.size(); ++o) {
    for (auto r : regions_of(s.at[o])) f |= fact_at(o, r);
  }
  f |= s.holding ? fact_holding(*s.holding) : fact_hand_empty();
  return f;
}

OperatorFacts operator_facts(const GroundedOp& op) {
  if (op.kind == OpKind::Pick) {
    return {fact_hand_empty(), fact_holding(op.object), fact_hand_empty()};
  }
  FactSet eff = fact_hand_empty();
  for (auto r : regions_of(op.regions)) eff |= fact_at(op.object, r);
  return {fact_holding(op.object), eff, fact_holding(op.object)};
}

}  // namespace exprog

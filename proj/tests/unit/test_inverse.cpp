#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "exprog/inverse.hpp"
#include "exprog/terc.hpp"
#include "helpers.hpp"

using namespace exprog;
using testing::object;
using testing::scene;

namespace {

bool has(FactSet s, FactSet f) { return (s & f) == f; }

// Segment (i, k, o): pre at i, eff first reached at k, mnt on every state strictly between.
std::set<std::tuple<std::size_t, std::size_t, std::size_t>> oracle_segments(const std::vector<FactSet>& s,
                                                                            const std::vector<OperatorFacts>& ops) {
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t k = i + 1; k < s.size(); ++k) {
      for (std::size_t o = 0; o < ops.size(); ++o) {
        if (!has(s[i], ops[o].pre) || !has(s[k], ops[o].eff)) continue;
        bool ok = true;
        for (std::size_t t = i + 1; t < k; ++t) ok = ok && has(s[t], ops[o].mnt) && !has(s[t], ops[o].eff);
        if (ok) out.insert({i, k, o});
      }
    }
  }
  return out;
}

std::set<MaximalPlan> oracle_maximal(const std::vector<FactSet>& s, const std::vector<OperatorFacts>& ops) {
  const auto segs = oracle_segments(s, ops);
  std::set<MaximalPlan> out;
  MaximalPlan cur;
  std::function<void(std::size_t)> go = [&](std::size_t v) {
    cur.bounds.push_back(v);
    bool extended = false;
    for (const auto& [i, k, o] : segs) {
      if (i != v) continue;
      extended = true;
      cur.ops.push_back(o);
      go(k);
      cur.ops.pop_back();
    }
    if (!extended) out.insert(cur);
    cur.bounds.pop_back();
  };
  go(0);
  return out;
}

Trajectory stationary(const WorldState& w0, std::size_t n) {
  std::vector<Action> hold(n, Action{w0.agent.position, false});
  return World{}.rollout(w0, hold);
}

const DemoSet& task1_demos() {
  static const DemoSet set = [] {
    DemoConfig cfg;
    cfg.noise_free = true;
    return generate_demos(terc_task(1), 2, 41, cfg);
  }();
  return set;
}

class FixedProposer : public Proposer {
 public:
  explicit FixedProposer(std::vector<Program> p) : programs_(std::move(p)) {}
  std::vector<Program> propose(const ProposalContext&) override {
    ++calls;
    return programs_;
  }
  int calls = 0;

 private:
  std::vector<Program> programs_;
};

class FailingProposer : public Proposer {
 public:
  std::vector<Program> propose(const ProposalContext&) override {
    throw ProposerFailure("out of programs", {terc_task(1).program});
  }
};

}  // namespace

TEST_CASE("abstraction collapses repeated facts") {
  const auto w0 = scene({object(0, Shape::circle(0.05), Color::Red, 0.3, 0.3)}, {0.1, 0.1});
  const auto st = abstract(stationary(w0, 10), World{});
  CHECK(st.size() == 1);
  CHECK(st.frame_index == std::vector<std::size_t>{0});
}

TEST_CASE("fact encoding") {
  CHECK(fact_at(0, Region::Left) != fact_at(1, Region::Left));
  CHECK((fact_hand_empty() & fact_holding(0)) == 0);
  const auto s = testing::symbolic({{Color::Red, ShapeKind::Circle, 0.01, bit(Region::Left) | bit(Region::Top)}});
  CHECK(facts_of(s) == (fact_at(0, Region::Left) | fact_at(0, Region::Top) | fact_hand_empty()));
}

TEST_CASE("segments on a hand-built pick and place") {
  const FactSet empty = fact_hand_empty(), hold = fact_holding(0);
  const FactSet left = fact_at(0, Region::Left), right = fact_at(0, Region::Right);
  const std::vector<FactSet> states{left | empty, hold, hold, right | empty};
  const std::vector<OperatorFacts> ops{operator_facts(GroundedOp::pick(0)),
                                       operator_facts(GroundedOp::place(0, bit(Region::Right))),
                                       operator_facts(GroundedOp::place(0, bit(Region::Left)))};
  const auto segs = discover_segments(states, ops);
  CHECK(segs[0] == std::vector<Segment>{{0, 1, 0}});
  CHECK(segs[1] == std::vector<Segment>{{1, 3, 1}});
  CHECK(segs[2] == std::vector<Segment>{{2, 3, 1}});
  const auto plans = maximal_plans(states, ops);
  REQUIRE(plans.size() == 1);
  CHECK(plans[0].ops == std::vector<std::size_t>{0, 1});
  CHECK(plans[0].bounds == std::vector<std::size_t>{0, 1, 3});
}

TEST_CASE("maximal plans match brute force") {
  std::mt19937_64 rng(5);
  const std::vector<FactSet> alphabet{1, 2, 4, 8};
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> len(1, 7), bits(0, 15), nops(1, 4);
    std::vector<FactSet> states(static_cast<std::size_t>(len(rng)));
    for (auto& s : states) s = static_cast<FactSet>(bits(rng));
    std::vector<OperatorFacts> ops(static_cast<std::size_t>(nops(rng)));
    for (auto& o : ops) o = {static_cast<FactSet>(bits(rng) & 3), static_cast<FactSet>(bits(rng)), static_cast<FactSet>(bits(rng) & 5)};
    const auto got = maximal_plans(states, ops);
    const std::set<MaximalPlan> as_set(got.begin(), got.end());
    CHECK(as_set.size() == got.size());
    CHECK(as_set == oracle_maximal(states, ops));
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> segs;
    for (const auto& row : discover_segments(states, ops)) {
      for (const auto& s : row) segs.insert({s.start, s.end, s.op});
    }
    CHECK(segs == oracle_segments(states, ops));
  }
}

TEST_CASE("plan_satisfies") {
  const World world;
  const auto w0 = scene({object(0, Shape::circle(0.05), Color::Red, 0.3, 0.3)}, {0.1, 0.1});
  std::mt19937_64 rng(3);
  const PlanSkeleton plan{GroundedOp::pick(0), GroundedOp::place(0, bit(Region::Right))};
  const auto r = refine(plan, world, w0, RefineBudget{}, CostModel{}, rng);
  REQUIRE(r);
  CHECK(plan_satisfies(plan, r->trajectory, world));
  CHECK_FALSE(plan_satisfies({GroundedOp::pick(0), GroundedOp::place(0, bit(Region::Left))}, r->trajectory, world));
  CHECK(plan_satisfies({}, stationary(w0, 5), world));
  CHECK_FALSE(plan_satisfies({}, r->trajectory, world));
}

TEST_CASE("boltzmann") {
  const std::vector<double> c{0, 80};
  const auto p = boltzmann(c, 0.05);
  CHECK(p[0] == doctest::Approx(0.9820).epsilon(1e-4));
  CHECK(p[1] == doctest::Approx(0.0180).epsilon(1e-3));
  const std::vector<double> big{1e6, 1e6 + 80, std::numeric_limits<double>::infinity()};
  const auto q = boltzmann(big, 0.05);
  CHECK(q[0] == doctest::Approx(p[0]));
  CHECK(q[2] == 0);
  const std::vector<double> xs{std::log(2.0), std::log(3.0)};
  CHECK(log_sum_exp(xs) == doctest::Approx(std::log(5.0)));
}

TEST_CASE("demo likelihood") {
  const World world;
  const auto& set = task1_demos();
  InverseParams params;
  const double gt = demo_log_likelihood(terc_task(1).program, set.demos[0], world, params);
  CHECK(std::isfinite(gt));
  CHECK(gt <= 1e-12);
  const double wrong =
      demo_log_likelihood(Program::parse("(achieve (for (filter (color red)) (at Left)))"), set.demos[0], world, params);
  CHECK(wrong < gt);
  SolveCache cache;
  const double a = demo_log_likelihood(terc_task(1).program, set.demos[0], world, params, &cache);
  const double b = demo_log_likelihood(terc_task(1).program, set.demos[0], world, params, &cache);
  CHECK(a == b);
  CHECK(cache.size() >= 1);
}

TEST_CASE("posterior") {
  const World world;
  const auto& set = task1_demos();
  InverseParams params;
  const Program gt = terc_task(1).program;
  const Program other = Program::parse("(achieve (for (filter (color red)) (at Left)))");
  SUBCASE("single hypothesis") {
    const std::vector<Program> one{gt};
    const auto post = posterior(one, set.demos, world, params);
    REQUIRE(post.hypotheses.size() == 1);
    CHECK(post.hypotheses[0].weight == doctest::Approx(1.0));
    CHECK(post.hypotheses[0].log_prior == -gt.size());
  }
  SUBCASE("duplicates and permutation") {
    const std::vector<Program> progs{gt, other};
    const auto a = posterior(progs, set.demos, world, params);
    const std::vector<Trajectory> swapped{set.demos[1], set.demos[0]};
    const auto b = posterior(progs, swapped, world, params);
    REQUIRE(a.hypotheses.size() == b.hypotheses.size());
    for (std::size_t i = 0; i < a.hypotheses.size(); ++i) {
      CHECK(a.hypotheses[i].program == b.hypotheses[i].program);
      CHECK(a.hypotheses[i].weight == doctest::Approx(b.hypotheses[i].weight));
    }
    CHECK(a.map()->program == gt);
    double total = 0;
    for (const auto& h : a.hypotheses) total += h.weight;
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("rir loop") {
  const World world;
  const auto& set = task1_demos();
  InverseParams params;
  SUBCASE("fixed proposer") {
    FixedProposer proposer({Program::parse("(achieve (for (filter (color red)) (at Left)))"), terc_task(1).program});
    const auto res = rir_loop(set.demos, proposer, 2, 10, world, params);
    CHECK(proposer.calls == 2);
    CHECK(res.history.size() == 2);
    REQUIRE(res.posterior.map());
    CHECK(res.posterior.map()->program == terc_task(1).program);
    CHECK_FALSE(res.error);
  }
  SUBCASE("failure keeps partial programs") {
    FailingProposer proposer;
    const auto res = rir_loop(set.demos, proposer, 3, 10, world, params);
    CHECK(res.error);
    REQUIRE(res.posterior.map());
    CHECK(res.posterior.map()->program == terc_task(1).program);
  }
}

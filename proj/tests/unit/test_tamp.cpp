#include <doctest.h>

#include <cmath>
#include <functional>
#include <queue>
#include <random>
#include <set>

#include "exprog/tamp.hpp"
#include "exprog/terc.hpp"
#include "helpers.hpp"

using namespace exprog;
using testing::object;
using testing::scene;

namespace {

constexpr RegionMask L = bit(Region::Left), R = bit(Region::Right), T = bit(Region::Top), B = bit(Region::Bottom);

struct OracleState {
  std::vector<RegionMask> at;
  int holding = -1;
};

bool oracle_holds(const Conjunction& g, const OracleState& s) {
  for (const auto& a : g) {
    if (!(s.at[a.object] & bit(a.region))) return false;
  }
  return true;
}

// Depth-first enumeration of every operator sequence up to `depth` that
// finishes the staged goal on its last step, never earlier, and never picks
// an object straight after placing it.
std::set<PlanSkeleton> oracle_plans(const SymbolicState& s0, const GroundedTask& g, std::size_t depth) {
  const auto ops = grounding_universe(s0.at.size(), g);
  std::set<PlanSkeleton> out;
  PlanSkeleton plan;
  std::function<void(OracleState, std::size_t)> go = [&](OracleState s, std::size_t stage) {
    while (stage < g.size() && oracle_holds(g[stage], s)) ++stage;
    if (stage == g.size()) {
      out.insert(plan);
      return;
    }
    if (plan.size() == depth) return;
    for (const auto& op : ops) {
      if (!plan.empty() && plan.back().kind == OpKind::Place && op.kind == OpKind::Pick &&
          plan.back().object == op.object) {
        continue;
      }
      OracleState n = s;
      if (op.kind == OpKind::Pick) {
        if (s.holding >= 0) continue;
        n.holding = static_cast<int>(op.object);
        n.at[op.object] = 0;
      } else {
        if (s.holding != static_cast<int>(op.object)) continue;
        n.holding = -1;
        n.at[op.object] = op.regions;
      }
      plan.push_back(op);
      go(n, stage);
      plan.pop_back();
    }
  };
  go({s0.at, -1}, 0);
  return out;
}

// Shortest 16-connected grid path length between two free cells.
double grid_shortest(Vec2 a, Vec2 b, const FreeFn& free, int n) {
  const double h = 1.0 / n;
  auto cell = [&](Vec2 p) { return std::pair<int, int>{static_cast<int>(p.x / h), static_cast<int>(p.y / h)}; };
  std::vector<double> dist(static_cast<std::size_t>(n) * n, 1e18);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const auto [ax, ay] = cell(a);
  const auto [bx, by] = cell(b);
  dist[ay * n + ax] = 0;
  pq.push({0, ay * n + ax});
  const int moves[16][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1},
                            {2, 1}, {2, -1}, {-2, 1}, {-2, -1}, {1, 2}, {1, -2}, {-1, 2}, {-1, -2}};
  while (!pq.empty()) {
    const auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[i]) continue;
    const int x = i % n, y = i / n;
    if (x == bx && y == by) return d;
    for (const auto& m : moves) {
      const int nx = x + m[0], ny = y + m[1];
      if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
      const Vec2 p{(nx + 0.5) * h, (ny + 0.5) * h};
      if (!free(p)) continue;
      const double nd = d + std::hypot(m[0], m[1]) * h;
      if (nd < dist[ny * n + nx]) {
        dist[ny * n + nx] = nd;
        pq.push({nd, ny * n + nx});
      }
    }
  }
  return 1e18;
}

}  // namespace

TEST_CASE("staged hamming heuristic") {
  const Atom a{0, Region::Left}, b{1, Region::Top};
  CHECK(hamming_heuristic(Conjunction{a}, GroundedTask{{a}}, 0) == 0);
  CHECK(hamming_heuristic(Conjunction{}, GroundedTask{{a, b}}, 0) == 2);
  CHECK(hamming_heuristic(Conjunction{}, GroundedTask{{a}, {b}}, 0) == 3);
  CHECK(hamming_heuristic(Conjunction{a}, GroundedTask{{a}, {b}}, 1) == 3);
}

TEST_CASE("symbolic search examples") {
  const auto s = testing::symbolic({{Color::Red, ShapeKind::Circle, 0.01, R | B}});
  SUBCASE("goal already true") {
    const auto plans = symbolic_search(s, {{{0, Region::Right}}}, 3);
    REQUIRE_FALSE(plans.empty());
    CHECK(plans[0].empty());
  }
  SUBCASE("one move") {
    const auto plans = symbolic_search(s, {{{0, Region::Left}}}, 3);
    REQUIRE_FALSE(plans.empty());
    CHECK(plans[0] == PlanSkeleton{GroundedOp::pick(0), GroundedOp::place(0, L)});
    const auto oracle = oracle_plans(s, {{{0, Region::Left}}}, 2);
    CHECK(oracle == std::set<PlanSkeleton>{plans[0]});
  }
  SUBCASE("window ordering") {
    const auto two = testing::symbolic(
        {{Color::Red, ShapeKind::Circle, 0.01, R | B}, {Color::Blue, ShapeKind::Circle, 0.01, R | B}});
    SkeletonStream stream(two, {{{0, Region::Left}}});
    std::vector<PlanSkeleton> got;
    while (auto p = stream.next()) got.push_back(*p);
    for (std::size_t i = 0; i + 1 < got.size(); i += 8) {
      for (std::size_t j = i; j + 1 < std::min(got.size(), i + 8); ++j) CHECK(got[j].size() <= got[j + 1].size());
    }
    for (const auto& p : got) CHECK(achieves(p, SymState::from(two), {{{0, Region::Left}}}));
  }
}

TEST_CASE("skeleton stream matches brute force enumeration") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> objects(1, 3), side(0, 1), stages(1, 2), pick(0, 3);
  const RegionMask options[] = {L, R, T, B, L | T, R | B, L | B | bit(Region::Corner), bit(Region::Middle)};
  for (int trial = 0; trial < 40; ++trial) {
    const int n = objects(rng);
    std::vector<testing::Obj> objs;
    for (int i = 0; i < n; ++i) {
      objs.push_back({Color::Red, ShapeKind::Circle, 0.01,
                      static_cast<RegionMask>((side(rng) ? L : R) | (side(rng) ? T : B))});
    }
    const auto s0 = testing::symbolic(objs);
    GroundedTask g;
    for (int k = stages(rng); k > 0; --k) {
      Conjunction c;
      const ObjectId o = static_cast<ObjectId>(std::uniform_int_distribution<int>(0, n - 1)(rng));
      for (auto r : regions_of(options[std::uniform_int_distribution<int>(0, 7)(rng)])) c.push_back({o, r});
      g.push_back(make_conjunction(c));
    }
    SearchParams params;
    params.max_expansions = 10'000'000;
    params.extra_depth = 0;
    SkeletonStream stream(s0, g, params);
    std::set<PlanSkeleton> got;
    while (auto p = stream.next()) CHECK(got.insert(*p).second);
    CHECK(got == oracle_plans(s0, g, 2 * static_cast<std::size_t>(n)));
  }
}

TEST_CASE("lcb") {
  CHECK(lcb(7, 7, 5, 0.05) == 7);
  CHECK(lcb(10, 20, 2, 0.05) == doctest::Approx(-34.7214).epsilon(1e-5));
  CHECK(std::isinf(lcb(10, 20, 1, 0.05)));
  double prev = -1e18;
  for (int n : {2, 10, 100, 1000}) {
    const double v = lcb(10, 20, n, 0.05);
    CHECK(v > prev);
    CHECK(v <= 10);
    prev = v;
  }
  CHECK(10 - prev < 0.1);
}

TEST_CASE("bandit prefers the dominating arm") {
  int to_a = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> a_cost(100, 150), b_cost(200, 260);
    std::vector<ArmStats> arms(2);
    for (int i = 0; i < 2; ++i) {
      arms[0].record(a_cost(rng), 1);
      arms[1].record(b_cost(rng), 1);
    }
    for (int pull = 0; pull < 20; ++pull) {
      const auto i = select_arm(arms, 0.05);
      REQUIRE(i);
      arms[*i].record(*i == 0 ? a_cost(rng) : b_cost(rng), 1);
      to_a += *i == 0;
      ++total;
    }
  }
  CHECK(static_cast<double>(to_a) / total >= 0.6);
}

TEST_CASE("arm bookkeeping") {
  ArmStats s;
  s.record(std::nullopt, 1);
  CHECK(s.dead);
  ArmStats f;
  f.forced = true;
  f.record(std::nullopt, 3);
  f.record(std::nullopt, 3);
  CHECK_FALSE(f.dead);
  f.record(5.0, 3);
  CHECK(f.feasible());
  std::vector<ArmStats> arms{s, f};
  CHECK(select_arm(arms, 0.05) == std::size_t{1});
}

TEST_CASE("plan cost") {
  std::vector<Action> actions{{{0.3, 0.0}, false}, {{0.3, 0.4}, true}, {{0.3, 0.4}, false}};
  CHECK(plan_cost({0, 0}, actions, 2) == doctest::Approx(512 * 0.7 + 160));
  CHECK(plan_cost({0, 0}, {}, 0) == 0);
}

TEST_CASE("rrt connect") {
  std::mt19937_64 rng(4);
  MotionParams params;
  SUBCASE("empty world gives a straight segment") {
    const auto path = rrt_connect({0.1, 0.1}, {0.9, 0.6}, [](Vec2) { return true; }, params, rng);
    REQUIRE(path);
    CHECK(path->size() == 2);
  }
  SUBCASE("central obstacle") {
    const Circle obstacle{{0.5, 0.5}, 0.2};
    const FreeFn free = [&](Vec2 p) { return distance(p, obstacle.center) > obstacle.radius + 0.02; };
    const Vec2 a{0.1, 0.5}, b{0.9, 0.5};
    const auto path = rrt_connect(a, b, free, params, rng);
    REQUIRE(path);
    for (std::size_t i = 0; i + 1 < path->size(); ++i) {
      CHECK(segment_free((*path)[i], (*path)[i + 1], free, 0.001));
    }
    const double len = path_length(*path);
    CHECK(len < 1.5 * distance(a, b));
    CHECK(len >= 0.97 * grid_shortest(a, b, free, 400));
  }
  SUBCASE("enclosed start") {
    const FreeFn free = [](Vec2 p) {
      const double d = distance(p, {0.5, 0.5});
      return d < 0.1 || d > 0.15;
    };
    CHECK_FALSE(rrt_connect({0.5, 0.5}, {0.9, 0.9}, free, params, rng));
  }
}

TEST_CASE("refine") {
  const World world;
  const CostModel cost;
  RefineBudget budget;
  std::mt19937_64 rng(9);
  SUBCASE("empty skeleton") {
    const auto w0 = scene({object(0, Shape::circle(0.05), Color::Red, 0.3, 0.3)});
    const auto r = refine({}, world, w0, budget, cost, rng);
    REQUIRE(r);
    CHECK(r->cost == 0);
    CHECK(r->trajectory.length() == 0);
  }
  SUBCASE("pick and place in free space matches the straight line bound") {
    const auto w0 = scene({object(0, Shape::circle(0.05), Color::Red, 0.25, 0.5)}, {0.1, 0.1});
    const PlanSkeleton plan{GroundedOp::pick(0), GroundedOp::place(0, R)};
    const auto r = refine(plan, world, w0, budget, cost, rng);
    REQUIRE(r);
    const Vec2 grasp = r->trajectory.state(r->op_end[0]).agent.position;
    const Vec2 drop = r->trajectory.terminal.agent.position;
    const double straight = cost.scale * (distance(w0.agent.position, grasp) + distance(grasp, drop)) + 2 * cost.lambda;
    CHECK(r->cost >= straight - 1e-6);
    CHECK(r->cost <= 1.1 * straight);
    CHECK(plan_cost(w0.agent.position, r->actions, 2) == doctest::Approx(r->cost));
    CHECK(world.rollout(w0, r->actions) == r->trajectory);
    CHECK(world.perceive(r->trajectory.terminal).holds({0, Region::Right}));
  }
  SUBCASE("blocked target region") {
    // Right half packed with large boxes leaves no room for the circle.
    std::vector<ObjectState> objs{object(0, Shape::circle(0.05), Color::Red, 0.2, 0.5)};
    ObjectId id = 1;
    for (double x : {0.58, 0.74, 0.9}) {
      for (double y = 0.09; y < 1.0; y += 0.2) objs.push_back(object(id++, Shape::box(0.13, 0.13), Color::Blue, x, y));
    }
    const auto w0 = scene(objs, {0.1, 0.1});
    REQUIRE(world.valid(w0));
    budget.samples = 50;
    CHECK_FALSE(refine({GroundedOp::pick(0), GroundedOp::place(0, R)}, world, w0, budget, cost, rng));
  }
}

TEST_CASE("sample_in_regions respects the regions") {
  const World world;
  std::mt19937_64 rng(2);
  for (const auto m : satisfiable_region_sets()) {
    for (int i = 0; i < 20; ++i) {
      const auto p = sample_in_regions(m, world, 0.01, rng);
      REQUIRE(p);
      CHECK((world.regions_at(*p) & m) == m);
    }
  }
}

TEST_CASE("solve") {
  const World world;
  SUBCASE("single candidate equals refine") {
    const auto w0 = scene({object(0, Shape::circle(0.05), Color::Red, 0.3, 0.3)}, {0.1, 0.1});
    const GroundedTask g{{{0, Region::Right}}};
    auto profile = SolveProfile::forward();
    profile.max_candidates = 1;
    profile.solve_iterations = 1;
    profile.seed = 5;
    const auto res = solve(world, w0, g, profile);
    REQUIRE(res.ok());
    REQUIRE(res.arms.size() == 1);
    std::mt19937_64 rng(arm_seed(5, res.arms[0].skeleton));
    const auto r = refine(res.arms[0].skeleton, world, w0, profile.budget, profile.cost, rng);
    REQUIRE(r);
    CHECK(r->cost == res.best->cost);
  }
  SUBCASE("task 1 from a clear start") {
    const auto w0 = scene({object(0, Shape::circle(0.05), Color::Red, 0.3, 0.3),
                           object(1, Shape::box(0.08, 0.08), Color::Blue, 0.3, 0.7)},
                          {0.1, 0.1});
    const auto g = eval(terc_task(1).program, world.perceive(w0));
    REQUIRE(g.ok());
    auto profile = SolveProfile::forward();
    const auto res = solve(world, w0, g.task, profile);
    REQUIRE(res.ok());
    CHECK(res.best->skeleton.size() == 2);
    CHECK(satisfies(terc_task(1).program, res.best->trajectory, world));
    const auto again = solve(world, w0, g.task, profile);
    CHECK(again.best->cost == res.best->cost);
    CHECK(again.iterations == res.iterations);
  }
}

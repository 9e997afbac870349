#include <doctest.h>

#include <set>

#include "exprog/terc.hpp"
#include "helpers.hpp"

using namespace exprog;

TEST_CASE("task corpus") {
  const World world;
  REQUIRE(terc_tasks().size() == 35);
  CHECK_FALSE(valid_task_id(0));
  CHECK_FALSE(valid_task_id(36));
  CHECK_THROWS(terc_task(36));
  std::set<std::string> programs;
  for (const auto& t : terc_tasks()) {
    CAPTURE(t.id);
    CHECK(programs.insert(t.program.to_sexpr()).second == (t.id != 25));
    CHECK(Program::parse(t.program.to_sexpr()) == t.program);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto w = sample_environment(t, seed, world);
      CHECK(world.valid(w));
      CHECK(environment_ok(t, w, world));
      CHECK(eval(t.program, world.perceive(w)).ok());
      CHECK(w.objects.size() >= 3);
      CHECK(w.objects.size() <= 6);
    }
  }
}

TEST_CASE("sampler details") {
  const World world;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto w = sample_environment(terc_task(1), seed, world);
    const bool has_red_circle = std::any_of(w.objects.begin(), w.objects.end(), [](const ObjectState& o) {
      return o.color == Color::Red && o.shape.kind == ShapeKind::Circle;
    });
    CHECK(has_red_circle);
  }
  bool with = false, without = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto w = sample_environment(terc_task(33), seed, world);
    const bool any = std::any_of(w.objects.begin(), w.objects.end(),
                                 [](const ObjectState& o) { return o.shape.kind == ShapeKind::Triangle; });
    (any ? with : without) = true;
  }
  CHECK(with);
  CHECK(without);
  CHECK(sample_environment(terc_task(7), 5, world) == sample_environment(terc_task(7), 5, world));
  CHECK_FALSE(sample_environment(terc_task(7), 5, world) == sample_environment(terc_task(7), 6, world));
}

TEST_CASE("action post-processing") {
  std::vector<Action> a{{{0.1, 0.1}, false}, {{0.2, 0.2}, false}, {{0.3, 0.3}, true},
                        {{0.4, 0.4}, true},  {{0.5, 0.5}, false}, {{0.6, 0.6}, false}};
  std::mt19937_64 rng(1);
  const auto j = jitter_actions(a, 0.003, rng);
  REQUIRE(j.size() == a.size());
  CHECK(j[1] == a[1]);
  CHECK(j[2] == a[2]);
  CHECK(j[3] == a[3]);
  CHECK(j[4] == a[4]);
  CHECK(j[5] == a[5]);
  CHECK_FALSE(j[0] == a[0]);
  CHECK(std::abs(j[0].waypoint.x - a[0].waypoint.x) <= 0.003);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(j[i].grip == a[i].grip);
  const auto p = pad_actions(a, {0, 0}, 10);
  CHECK(p.size() == 10);
  CHECK(p.back() == a.back());
  CHECK(pad_actions({}, {0.2, 0.3}, 3) == std::vector<Action>(3, Action{{0.2, 0.3}, false}));
}

TEST_CASE("demonstrations for every task") {
  const World world;
  for (const auto& t : terc_tasks()) {
    CAPTURE(t.id);
    const auto set = generate_demos(t, 1, 1000 + t.id);
    REQUIRE(set.demos.size() == 1);
    const auto& d = set.demos[0];
    CHECK(d.length() >= 80);
    CHECK(d.length() <= 120);
    CHECK(d.initial() == set.environments[0]);
    CHECK(satisfies(t.program, d, world));
  }
}

TEST_CASE("demonstrations are reproducible") {
  const auto a = generate_demos(terc_task(5), 2, 9);
  const auto b = generate_demos(terc_task(5), 2, 9);
  CHECK(a.demos == b.demos);
  CHECK(a.environments == b.environments);
  const auto c = generate_demos(terc_task(5), 2, 10);
  CHECK_FALSE(a.demos == c.demos);
}

TEST_CASE("noise-free demo cost is the planner's cost") {
  const World world;
  const auto& task = terc_task(2);
  const auto w0 = sample_environment(task, 4, world);
  DemoConfig cfg;
  cfg.noise_free = true;
  const auto tau = generate_demo(task, w0, cfg, 77, world);
  auto profile = cfg.profile;
  profile.seed = mix_seed(77, 0);
  const auto res = solve(world, w0, eval(task.program, world.perceive(w0)).task, profile);
  REQUIRE(res.ok());
  std::vector<Action> actions;
  for (const auto& f : tau.frames) actions.push_back(f.action);
  CHECK(plan_cost(w0.agent.position, actions, res.best->skeleton.size()) == doctest::Approx(res.best->cost));
}

TEST_CASE("evaluation protocol") {
  const World world;
  const auto& task = terc_task(6);
  EvalConfig cfg;
  cfg.envs = 2;
  cfg.poses = 2;
  cfg.seed = 3;
  CHECK(evaluation_environment(task, 1, 1, 3, world) == evaluation_environment(task, 1, 1, 3, world));
  const auto a = evaluation_environment(task, 1, 0, 3, world), b = evaluation_environment(task, 1, 1, 3, world);
  std::vector<std::pair<Color, ShapeKind>> ka, kb;
  for (const auto& o : a.objects) ka.push_back({o.color, o.shape.kind});
  for (const auto& o : b.objects) kb.push_back({o.color, o.shape.kind});
  CHECK(ka == kb);

  const std::vector<Program> truth{task.program};
  const auto r = evaluate(truth, task, cfg, world);
  CHECK(r.top1);
  CHECK(r.trials == 4);
  CHECK(r.successes == 4);
  CHECK(r.success_se() == 0);

  const auto wrong = Program::parse("(achieve (for (filter (shape box)) (at Right)))");
  const std::vector<Program> second{wrong, task.program};
  const auto s = evaluate(second, task, cfg, world);
  CHECK_FALSE(s.top1);
  CHECK(s.top5);
  CHECK(s.successes == 0);

  const auto none = evaluate({}, task, cfg, world);
  CHECK_FALSE(none.top10);
  CHECK(none.trials == 4);
  CHECK(none.successes == 0);

  EvalReport half;
  half.trials = 4;
  half.successes = 2;
  CHECK(half.success_se() == doctest::Approx(0.25));
}

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>

#include "exprog/proposer.hpp"
#include "exprog/terc.hpp"
#include "helpers.hpp"

using namespace exprog;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = EXPROG_FIXTURES;

// Every grammar program built from strings, canonical operand order spelled out by hand.
std::set<std::string> brute_force_grammar(int max_size) {
  const std::vector<std::string> atoms{"(color red)",    "(color green)",  "(color blue)",       "(color yellow)",
                                       "(color orange)", "(color purple)", "(color pink)",       "(shape circle)",
                                       "(shape box)",    "(shape square)", "(shape rectangle)", "(shape triangle)"};
  std::vector<std::string> preds = atoms;
  for (const auto& a : atoms) preds.push_back("(not " + a + ")");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      preds.push_back("(and " + atoms[i] + " " + atoms[j] + ")");
      preds.push_back("(or " + atoms[i] + " " + atoms[j] + ")");
    }
  }
  std::vector<std::string> bases{"(all)"};
  for (const auto& p : preds) bases.push_back("(filter " + p + ")");
  std::vector<std::string> sels = bases;
  for (const char* m : {"area", "perimeter", "extent"}) {
    for (const auto& b : bases) {
      sels.push_back(std::string("(largest ") + m + " " + b + ")");
      sels.push_back(std::string("(smallest ") + m + " " + b + ")");
    }
  }
  for (const char* a : {"shape", "color"}) {
    sels.push_back(std::string("(most-common ") + a + ")");
    sels.push_back(std::string("(least-common ") + a + ")");
  }
  // A region set is kept when some point of a fine grid lies in all of its
  // regions; Middle never combines with anything.
  const World world;
  const char* names[] = {"Left", "Right", "Top", "Bottom", "Corner", "Middle"};
  std::vector<std::string> regions;
  for (int m = 1; m < 64; ++m) {
    if ((m & 32) && m != 32) continue;
    bool reachable = false;
    for (int i = 0; i < 200 && !reachable; ++i) {
      for (int j = 0; j < 200 && !reachable; ++j) {
        reachable = (world.regions_at({(i + 0.5) / 200, (j + 0.5) / 200}) & m) == m;
      }
    }
    if (!reachable) continue;
    std::string r = "(at";
    for (int b = 0; b < 6; ++b) {
      if (m & (1 << b)) r += std::string(" ") + names[b];
    }
    regions.push_back(r + ")");
  }
  CHECK(regions.size() == 18);
  std::set<std::string> out;
  for (const auto& s : sels) {
    for (const auto& r : regions) {
      const auto p = Program::parse("(achieve (for " + s + " " + r + "))");
      if (p.size() <= max_size) out.insert(p.to_sexpr());
    }
  }
  return out;
}

ProposalContext trivial_context(std::size_t requested) {
  ProposalContext ctx;
  ctx.requested = requested;
  ctx.initial_states.push_back(testing::symbolic({{Color::Red, ShapeKind::Circle, 0.01, bit(Region::Left)}}));
  return ctx;
}

struct CountingTransport : Transport {
  int* calls;
  explicit CountingTransport(int* c) : calls(c) {}
  std::string post(const std::string&, const std::string&) override {
    ++*calls;
    return "{}";
  }
};

}  // namespace

TEST_CASE("grammar levels are complete up to size 6") {
  std::set<std::string> got;
  for (int s = 0; s <= 6; ++s) {
    const auto level = grammar_level(s);
    CHECK(std::is_sorted(level.begin(), level.end()));
    for (const auto& p : level) {
      CHECK(p.size() == s);
      CHECK(got.insert(p.to_sexpr()).second);
    }
  }
  CHECK(got == brute_force_grammar(6));
  CHECK(grammar_level(3).size() == 30);
  CHECK(grammar_level(6).size() == 1968);
  CHECK(grammar_max_size() == 9);
}

TEST_CASE("region well-formedness") {
  CHECK(regions_well_formed(Program::parse("(achieve (for (all) (at Left Top Corner)))").root()));
  CHECK_FALSE(regions_well_formed(Program::parse("(achieve (for (all) (at Left Right)))").root()));
}

TEST_CASE("enumerative proposer") {
  ProposerConfig cfg;
  cfg.seed = 0;
  SUBCASE("deterministic, nondecreasing size, golden head") {
    EnumerativeProposer a(cfg), b(cfg);
    const auto pa = a.propose(trivial_context(40));
    const auto pb = b.propose(trivial_context(40));
    CHECK(pa == pb);
    REQUIRE(pa.size() == 40);
    for (std::size_t i = 0; i + 1 < pa.size(); ++i) CHECK(pa[i].size() <= pa[i + 1].size());
    CHECK(pa[0].to_sexpr() == "(achieve (for (most-common shape) (at Corner)))");
    cfg.seed = 1;
    EnumerativeProposer c(cfg);
    CHECK(c.propose(trivial_context(40)) != pa);
  }
  SUBCASE("skips tried and previous programs") {
    EnumerativeProposer a(cfg);
    auto ctx = trivial_context(5);
    const auto first = a.propose(ctx);
    ctx.tried = {first.begin(), first.begin() + 3};
    ctx.previous = {{first[3], 0.5}, {first[4], 0.5}};
    const auto second = a.propose(ctx);
    for (const auto& p : second) CHECK(std::find(first.begin(), first.end(), p) == first.end());
  }
  SUBCASE("exhaustion returns the partial pool") {
    cfg.max_size = 3;
    EnumerativeProposer a(cfg);
    try {
      a.propose(trivial_context(1000));
      FAIL("expected GrammarExhausted");
    } catch (const GrammarExhausted& e) {
      CHECK_FALSE(e.partial().empty());
      CHECK(e.partial().size() <= 30);
    }
  }
  SUBCASE("filters by the demonstrations") {
    DemoConfig dc;
    dc.noise_free = true;
    const auto set = generate_demos(terc_task(2), 2, 7, dc);
    ProposalContext ctx;
    ctx.requested = 20;
    for (const auto& d : set.demos) {
      ctx.initial_states.push_back(World{}.perceive(d.initial()));
      ctx.demos.push_back(abstract(d, World{}));
    }
    EnumerativeProposer a(cfg);
    for (const auto& p : a.propose(ctx)) {
      for (const auto& d : set.demos) CHECK(satisfies(p, d, World{}));
    }
  }
}

TEST_CASE("program extraction") {
  const auto r = extract_programs("a\n```\n(achieve (for (all) (at Left)))\n```\nb\n```x\n(achieve (for (all\n```\n");
  CHECK(r.programs.size() == 1);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].rfind("block 1:", 0) == 0);
  const auto unsat = extract_programs("```\n(achieve (for (all) (at Left Right)))\n```\n");
  CHECK(unsat.programs.empty());
  CHECK(unsat.diagnostics.size() == 1);
  CHECK(response_content("").empty());
  CHECK_THROWS_AS(response_content("not json"), ParseFailure);
}

TEST_CASE("remote proposer with replayed responses") {
  ProposerConfig cfg;
  cfg.mode = ProposerConfig::Mode::Remote;
  auto ctx = trivial_context(10);
  SUBCASE("three good blocks and one bad") {
    RemoteProposer p(cfg, replay_transport(kFixtures / "replay"));
    const auto programs = p.propose(ctx);
    CHECK(programs.size() == 3);
    REQUIRE(p.diagnostics().size() == 1);
    CHECK(p.diagnostics()[0].rfind("block 3:", 0) == 0);
    CHECK_THROWS_AS(p.propose(ctx), TransportError);
  }
  SUBCASE("empty response") {
    RemoteProposer p(cfg, replay_transport(kFixtures / "replay_empty"));
    CHECK_THROWS_AS(p.propose(ctx), ParseFailure);
  }
  SUBCASE("missing credential makes no call") {
    cfg.credential_env = "EXPROG_TEST_UNSET_VARIABLE";
    ::unsetenv(cfg.credential_env.c_str());
    int calls = 0;
    RemoteProposer p(cfg, std::make_unique<CountingTransport>(&calls));
    CHECK_THROWS_AS(p.propose(ctx), AuthMissing);
    CHECK(calls == 0);
    RemoteProposer q(cfg);
    CHECK_THROWS_AS(q.propose(ctx), AuthMissing);
  }
  SUBCASE("request and response logging") {
    const auto dir = fs::temp_directory_path() / "exprog_replay_log";
    fs::remove_all(dir);
    fs::create_directories(dir);
    cfg.replay_dir = dir;
    RemoteProposer p(cfg, replay_transport(kFixtures / "replay"));
    p.propose(ctx);
    CHECK(fs::exists(dir / "request_000.json"));
    CHECK(fs::exists(dir / "response_000.json"));
    const auto req = read_json_file(dir / "request_000.json");
    CHECK(req.at("model") == "gpt-4o");
    fs::remove_all(dir);
  }
}

TEST_CASE("prompt") {
  CHECK(prompt_frames(81, 10) == std::vector<std::size_t>{0, 10, 20, 30, 40, 50, 60, 70, 80});
  CHECK(prompt_frames(85, 10) == std::vector<std::size_t>{0, 10, 20, 30, 40, 50, 60, 70, 80, 84});
  CHECK(prompt_frames(1, 10) == std::vector<std::size_t>{0});
  DemoConfig dc;
  dc.noise_free = true;
  const auto set = generate_demos(terc_task(1), 1, 3, dc);
  ProposalContext ctx;
  ctx.trajectories = set.demos;
  ctx.initial_states.push_back(World{}.perceive(set.demos[0].initial()));
  ctx.demos.push_back(abstract(set.demos[0], World{}));
  ProposerConfig cfg;
  const auto prompt = build_prompt(ctx, cfg, World{});
  CHECK(prompt.images.size() == prompt_frames(set.demos[0].state_count(), 10).size());
  CHECK(prompt.text.find("Demonstration 1") != std::string::npos);
  const auto req = chat_request(prompt, "m", 10);
  CHECK(req.at("model") == "m");
}

TEST_CASE("inference loop with the enumerative proposer") {
  const World world;
  const auto& task = terc_task(2);
  DemoConfig dc;
  dc.noise_free = true;
  const auto set = generate_demos(task, 3, 102, dc, world);
  ProposerConfig pc;
  pc.seed = 1;
  SUBCASE("three demos recover the rule") {
    EnumerativeProposer proposer(pc, world);
    const auto res = rir_loop(set.demos, proposer, 3, 10, world, InverseParams{});
    REQUIRE(res.posterior.map());
    EvalConfig ec;
    CHECK(equivalent_to_truth(res.posterior.map()->program, task, ec, world));
  }
  SUBCASE("one demo concentrates on a few hypotheses") {
    EnumerativeProposer proposer(pc, world);
    const std::span<const Trajectory> one(set.demos.data(), 1);
    const auto res = rir_loop(one, proposer, 3, 10, world, InverseParams{});
    REQUIRE(res.posterior.hypotheses.size() >= 3);
    double top3 = 0;
    for (std::size_t i = 0; i < 3; ++i) top3 += res.posterior.hypotheses[i].weight;
    CHECK(top3 > 0.9);
  }
}

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "exprog/proposer.hpp"
#include "exprog/render.hpp"
#include "exprog/terc.hpp"
#include "exprog/world_io.hpp"

namespace fs = std::filesystem;
using namespace exprog;

namespace {

enum Exit { kOk = 0, kUsage = 2, kPlanner = 3, kProposer = 4 };

struct Failure {
  int code;
  std::string kind;
  std::string message;
};

[[noreturn]] void fail(int code, std::string kind, std::string message) {
  throw Failure{code, std::move(kind), std::move(message)};
}

std::string indexed(const char* stem, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%02zu.json", stem, i);
  return buf;
}

Json hypothesis_json(const Hypothesis& h) {
  return {{"program", h.program.to_sexpr()},
          {"size", h.program.size()},
          {"log_prior", h.log_prior},
          {"log_likelihoods", h.log_likelihoods},
          {"weight", h.weight}};
}

Json posterior_json(const Posterior& p) {
  Json hs = Json::array();
  for (const auto& h : p.hypotheses) hs.push_back(hypothesis_json(h));
  return {{"all_zero", p.all_zero}, {"hypotheses", hs}};
}

struct GenArgs {
  int task = 0;
  int demos = 3;
  std::uint64_t seed = 0;
  bool noise_free = false;
  fs::path out;
};

int cmd_gen(const GenArgs& a) {
  if (!valid_task_id(a.task)) fail(kUsage, "usage", "unknown task id " + std::to_string(a.task));
  if (a.demos < 1) fail(kUsage, "usage", "--demos must be positive");
  const World world;
  const auto& task = terc_task(a.task);
  DemoConfig config;
  config.noise_free = a.noise_free;
  DemoSet set;
  try {
    set = generate_demos(task, a.demos, a.seed, config, world);
  } catch (const DemoFailure& e) {
    fail(kPlanner, "DemoFailure", e.what());
  } catch (const SamplerExhausted& e) {
    fail(kPlanner, "SamplerExhausted", e.what());
  }
  Json files = Json::array();
  for (std::size_t i = 0; i < set.demos.size(); ++i) {
    write_json_file(a.out / indexed("environment", i), environment_to_json(set.environments[i], world.config()));
    write_json_file(a.out / indexed("demo", i), trajectory_to_json(set.demos[i], world.config()));
    files.push_back(indexed("demo", i));
    std::cout << "demo " << i << ": " << set.demos[i].length() << " frames\n";
  }
  write_json_file(a.out / "manifest.json",
                  {{"command", "gen"},
                   {"task", a.task},
                   {"program", task.program.to_sexpr()},
                   {"demos", a.demos},
                   {"seed", a.seed},
                   {"noise_free", a.noise_free},
                   {"jitter", config.jitter},
                   {"beta", config.beta},
                   {"files", files}});
  return kOk;
}

std::vector<Trajectory> load_demos(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(kUsage, "usage", "demo directory not found: " + dir.string());
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("demo_", 0) == 0 && e.path().extension() == ".json") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) fail(kUsage, "usage", "no demo_*.json files in " + dir.string());
  std::vector<Trajectory> demos;
  for (const auto& p : paths) {
    try {
      demos.push_back(trajectory_from_json(read_json_file(p)));
    } catch (const TraceError& e) {
      fail(kUsage, "TraceError", p.string() + ": " + e.what());
    } catch (const Json::exception& e) {
      fail(kUsage, "TraceError", p.string() + ": " + e.what());
    }
  }
  return demos;
}

struct InferArgs {
  fs::path demos;
  std::string proposer = "enum";
  int iters = 3;
  std::size_t pool = 10;
  std::uint64_t seed = 0;
  fs::path out;
  std::string endpoint;
  std::string model;
  std::string credential_env;
  std::optional<fs::path> replay;
  std::optional<fs::path> record;
};

int cmd_infer(const InferArgs& a) {
  const auto demos = load_demos(a.demos);
  const World world;
  ProposerConfig config;
  config.seed = a.seed;
  config.mode = a.proposer == "remote" ? ProposerConfig::Mode::Remote : ProposerConfig::Mode::Enumerative;
  if (!a.endpoint.empty()) config.endpoint = a.endpoint;
  if (!a.model.empty()) config.model = a.model;
  if (!a.credential_env.empty()) config.credential_env = a.credential_env;
  config.replay_dir = a.record;

  std::unique_ptr<Proposer> proposer;
  RemoteProposer* remote = nullptr;
  if (config.mode == ProposerConfig::Mode::Remote) {
    auto r = std::make_unique<RemoteProposer>(config, a.replay ? replay_transport(*a.replay) : nullptr, world);
    remote = r.get();
    proposer = std::move(r);
  } else {
    proposer = std::make_unique<EnumerativeProposer>(config, world);
  }

  InverseParams params;
  params.profile.seed = a.seed;
  SolveCache cache;
  const auto result = rir_loop(demos, *proposer, a.iters, a.pool, world, params, &cache);

  Json history = Json::array();
  for (const auto& p : result.history) history.push_back(posterior_json(p));
  Json post = posterior_json(result.posterior);
  if (result.error) post["error"] = *result.error;
  if (remote && !remote->diagnostics().empty()) post["diagnostics"] = remote->diagnostics();
  write_json_file(a.out / "posterior.json", post);
  write_json_file(a.out / "history.json", history);
  write_json_file(a.out / "manifest.json", {{"command", "infer"},
                                            {"demos", a.demos.string()},
                                            {"demo_count", demos.size()},
                                            {"proposer", a.proposer},
                                            {"iters", a.iters},
                                            {"pool", a.pool},
                                            {"seed", a.seed},
                                            {"beta", params.beta},
                                            {"alpha", params.alpha}});

  for (std::size_t i = 0; i < result.posterior.hypotheses.size(); ++i) {
    const auto& h = result.posterior.hypotheses[i];
    std::printf("%2zu  %.6f  %s\n", i + 1, h.weight, h.program.to_sexpr().c_str());
  }
  if (result.error) {
    if (result.posterior.hypotheses.empty()) fail(kProposer, "ProposerFailure", *result.error);
    std::cerr << Json{{"warning", "ProposerFailure"}, {"message", *result.error}}.dump() << '\n';
  }
  return kOk;
}

struct EvalArgs {
  fs::path posterior;
  int task = 0;
  int envs = 3;
  int poses = 5;
  std::uint64_t seed = 0;
  fs::path out;
};

int cmd_eval(const EvalArgs& a) {
  if (!valid_task_id(a.task)) fail(kUsage, "usage", "unknown task id " + std::to_string(a.task));
  if (!fs::is_regular_file(a.posterior)) fail(kUsage, "usage", "posterior file not found: " + a.posterior.string());
  std::vector<Program> ranked;
  try {
    const Json post = read_json_file(a.posterior);
    for (const auto& h : post.at("hypotheses")) {
      ranked.push_back(Program::parse(h.at("program").get<std::string>()));
    }
  } catch (const std::exception& e) {
    fail(kUsage, "usage", "bad posterior file: " + std::string(e.what()));
  }
  const World world;
  EvalConfig config;
  config.envs = a.envs;
  config.poses = a.poses;
  config.seed = a.seed;
  EvalReport r;
  try {
    r = evaluate(ranked, terc_task(a.task), config, world);
  } catch (const SamplerExhausted& e) {
    fail(kPlanner, "SamplerExhausted", e.what());
  }
  const Json report{{"task", r.task},        {"top1", r.top1},
                    {"top5", r.top5},        {"top10", r.top10},
                    {"successes", r.successes}, {"trials", r.trials},
                    {"success_rate", r.success_rate()}, {"success_se", r.success_se()},
                    {"map", ranked.empty() ? Json() : Json(ranked.front().to_sexpr())}};
  write_json_file(a.out / "report.json", report);
  write_json_file(a.out / "manifest.json", {{"command", "eval"},
                                            {"posterior", a.posterior.string()},
                                            {"task", a.task},
                                            {"envs", a.envs},
                                            {"poses", a.poses},
                                            {"seed", a.seed},
                                            {"equiv_samples", config.equiv_samples}});
  std::printf("task  top1  top5  top10  success\n");
  std::printf("%4d  %4d  %4d  %5d  %d/%d (%.3f +- %.3f)\n", r.task, r.top1, r.top5, r.top10, r.successes, r.trials,
              r.success_rate(), r.success_se());
  return kOk;
}

struct RenderArgs {
  fs::path trace;
  std::size_t stride = 1;
  fs::path out;
  bool summary = true;
};

int cmd_render(const RenderArgs& a) {
  if (!fs::is_regular_file(a.trace)) fail(kUsage, "usage", "trace file not found: " + a.trace.string());
  Trajectory tau;
  try {
    tau = trajectory_from_json(read_json_file(a.trace));
  } catch (const TraceError& e) {
    fail(kUsage, "TraceError", e.what());
  } catch (const Json::exception& e) {
    fail(kUsage, "TraceError", e.what());
  }
  try {
    const auto files = render_trace(tau, World{}, a.stride, a.out, a.summary);
    std::cout << files.frames.size() << " frames written to " << a.out.string() << '\n';
  } catch (const RenderError& e) {
    fail(kUsage, "RenderError", e.what());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infer task rules from pick-and-place demonstrations"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate demonstrations for a corpus task");
  g->add_option("--task", gen.task, "Task id (1-35)")->required();
  g->add_option("--demos", gen.demos, "Number of demonstrations");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_flag("--noise-free", gen.noise_free, "Cheapest plan, no jitter");
  g->add_option("--out", gen.out, "Output directory")->required();

  InferArgs inf;
  auto* i = app.add_subcommand("infer", "Infer a posterior over programs");
  i->add_option("--demos", inf.demos, "Directory of demo_*.json traces")->required();
  i->add_option("--proposer", inf.proposer, "enum or remote")->check(CLI::IsMember({"enum", "remote"}));
  i->add_option("--iters", inf.iters, "Proposal iterations")->check(CLI::PositiveNumber);
  i->add_option("--pool", inf.pool, "Hypotheses kept per iteration")->check(CLI::PositiveNumber);
  i->add_option("--seed", inf.seed, "Seed");
  i->add_option("--out", inf.out, "Output directory")->required();
  i->add_option("--endpoint", inf.endpoint, "Remote chat endpoint");
  i->add_option("--model", inf.model, "Remote model name");
  i->add_option("--credential-env", inf.credential_env, "Environment variable holding the API key");
  i->add_option("--replay", inf.replay, "Serve remote responses from this directory");
  i->add_option("--record", inf.record, "Log remote requests and responses here");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Score a posterior against a corpus task");
  e->add_option("--posterior", ev.posterior, "posterior.json")->required();
  e->add_option("--task", ev.task, "Task id (1-35)")->required();
  e->add_option("--envs", ev.envs, "Environments")->check(CLI::PositiveNumber);
  e->add_option("--poses", ev.poses, "Pose draws per environment")->check(CLI::PositiveNumber);
  e->add_option("--seed", ev.seed, "Seed");
  e->add_option("--out", ev.out, "Output directory")->required();

  RenderArgs rd;
  auto* r = app.add_subcommand("render", "Render a trace as SVG frames");
  r->add_option("--trace", rd.trace, "Trace JSON")->required();
  r->add_option("--stride", rd.stride, "Frame stride")->check(CLI::PositiveNumber);
  r->add_option("--out", rd.out, "Output directory")->required();
  bool no_summary = false;
  r->add_flag("--no-summary", no_summary, "Skip summary.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    std::cerr << Json{{"error", "usage"}, {"message", ex.what()}}.dump() << '\n';
    return kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*i) return cmd_infer(inf);
    if (*e) return cmd_eval(ev);
    rd.summary = !no_summary;
    return cmd_render(rd);
  } catch (const Failure& f) {
    std::cerr << Json{{"error", f.kind}, {"message", f.message}}.dump() << '\n';
    return f.code;
  } catch (const std::exception& ex) {
    std::cerr << Json{{"error", "internal"}, {"message", ex.what()}}.dump() << '\n';
    return 1;
  }
}

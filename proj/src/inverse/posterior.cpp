#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "exprog/inverse.hpp"

namespace exprog {
namespace {

bool ranked_before(const Hypothesis& a, const Hypothesis& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  const int sa = a.program.size();
  const int sb = b.program.size();
  if (sa != sb) return sa < sb;
  return a.program.to_sexpr() < b.program.to_sexpr();
}

void normalize(Posterior& post) {
  std::vector<double> joints;
  for (const auto& h : post.hypotheses) joints.push_back(h.log_joint());
  const double z = log_sum_exp(joints);
  post.all_zero = !std::isfinite(z);
  for (std::size_t i = 0; i < post.hypotheses.size(); ++i) {
    post.hypotheses[i].weight = post.all_zero ? 0.0 : std::exp(joints[i] - z);
  }
  std::stable_sort(post.hypotheses.begin(), post.hypotheses.end(), ranked_before);
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

double Hypothesis::log_joint() const {
  double total = log_prior;
  for (double l : log_likelihoods) total += l;
  return total;
}

void Posterior::truncate(std::size_t n) {
  if (hypotheses.size() > n) hypotheses.resize(n);
  normalize(*this);
}

Posterior posterior(std::span<const Program> programs, std::span<const Trajectory> demos, const World& world,
                    const InverseParams& params, SolveCache* cache) {
  Posterior post;
  std::set<Program> seen;
  for (const auto& p : programs) {
    if (!seen.insert(p).second) continue;
    Hypothesis h;
    h.program = p;
    h.log_prior = -params.alpha * p.size();
    h.log_likelihoods.assign(demos.size(), 0.0);
    post.hypotheses.push_back(std::move(h));
  }
  const std::size_t per = demos.size();
  parallel_for(post.hypotheses.size() * per, [&](std::size_t job) {
    auto& h = post.hypotheses[job / per];
    h.log_likelihoods[job % per] = demo_log_likelihood(h.program, demos[job % per], world, params, cache);
  });
  normalize(post);
  return post;
}

RirResult rir_loop(std::span<const Trajectory> demos, Proposer& proposer, int iterations, std::size_t pool_size,
                   const World& world, const InverseParams& params, SolveCache* cache) {
  RirResult result;
  ProposalContext ctx;
  ctx.requested = pool_size;
  ctx.trajectories = demos;
  for (const auto& tau : demos) {
    ctx.initial_states.push_back(world.perceive(tau.initial()));
    ctx.demos.push_back(abstract(tau, world));
  }
  for (int it = 0; it < iterations; ++it) {
    ctx.previous.clear();
    for (const auto& h : result.posterior.hypotheses) ctx.previous.emplace_back(h.program, h.weight);
    std::vector<Program> proposals;
    bool last = false;
    try {
      proposals = proposer.propose(ctx);
    } catch (const ProposerFailure& e) {
      result.error = e.what();
      proposals = e.partial();
      last = true;
      if (proposals.empty()) break;
    }
    ctx.tried.insert(ctx.tried.end(), proposals.begin(), proposals.end());
    std::vector<Program> candidates;
    for (const auto& h : result.posterior.hypotheses) candidates.push_back(h.program);
    candidates.insert(candidates.end(), proposals.begin(), proposals.end());
    auto post = posterior(candidates, demos, world, params, cache);
    post.truncate(pool_size);
    result.history.push_back(post);
    result.posterior = std::move(post);
    if (last) break;
  }
  return result;
}

}  // namespace exprog

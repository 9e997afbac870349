#include <algorithm>
#include <cmath>
#include <cstdio>

#include "exprog/inverse.hpp"

namespace exprog {

double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) {
    return m;
  }
  double total = 0.0;
  for (double x : xs) total += std::exp(x - m);
  return m + std::log(total);
}

std::vector<double> boltzmann(std::span<const double> costs, double beta) {
  std::vector<double> logits;
  for (double c : costs) {
    logits.push_back(std::isfinite(c) ? -beta * c : -std::numeric_limits<double>::infinity());
  }
  const double z = log_sum_exp(logits);
  std::vector<double> out;
  for (double l : logits) {
    out.push_back(std::isfinite(z) ? std::exp(l - z) : 0.0);
  }
  return out;
}

std::optional<std::vector<PlanScore>> SolveCache::find(const std::string& key) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void SolveCache::put(const std::string& key, std::vector<PlanScore> scores) {
  std::lock_guard lock(mutex_);
  entries_.emplace(key, std::move(scores));
}

std::size_t SolveCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::string digest(const WorldState& w) {
  std::string out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%a,", v);
    out += buf;
  };
  for (const auto& o : w.objects) {
    out += std::to_string(o.id) + ':' + std::to_string(static_cast<int>(o.shape.kind)) + ':' +
           std::to_string(static_cast<int>(o.color)) + ':';
    num(o.shape.a);
    num(o.shape.b);
    num(o.pose.x);
    num(o.pose.y);
    num(o.pose.theta);
    out += ';';
  }
  num(w.agent.position.x);
  num(w.agent.position.y);
  out += w.agent.grip ? '1' : '0';
  if (w.agent.held) {
    out += 'h' + std::to_string(w.agent.held->object);
    num(w.agent.held->offset.x);
    num(w.agent.held->offset.y);
  }
  return out;
}

std::string digest(const GroundedTask& g) { return to_string(g); }

std::vector<PlanScore> plan_selection_likelihood(const World& world, const GroundedTask& g,
                                                 std::span<const PlanSkeleton> observed, const WorldState& w0,
                                                 const InverseParams& params, SolveCache* cache) {
  std::string key;
  if (cache) {
    key = digest(w0) + '|' + digest(g) + '|';
    for (const auto& p : observed) key += to_string(p);
    if (auto hit = cache->find(key)) return *hit;
  }
  const auto result = solve(world, w0, g, params.profile, observed);
  std::vector<PlanScore> scores;
  std::vector<double> costs;
  for (const auto& arm : result.arms) {
    const double c = arm.stats.feasible() ? arm.stats.c_min : std::numeric_limits<double>::infinity();
    scores.push_back({arm.skeleton, c, 0.0, arm.stats.forced});
    costs.push_back(c);
  }
  const auto p = boltzmann(costs, params.beta);
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i].probability = p[i];
  if (cache) cache->put(key, scores);
  return scores;
}

double log_observed_mass(std::span<const PlanScore> scores, double beta) {
  std::vector<double> all;
  std::vector<double> seen;
  for (const auto& s : scores) {
    if (!std::isfinite(s.cost)) continue;
    all.push_back(-beta * s.cost);
    if (s.observed) seen.push_back(-beta * s.cost);
  }
  if (seen.empty()) {
    return -std::numeric_limits<double>::infinity();
  }
  return log_sum_exp(seen) - log_sum_exp(all);
}

double demo_log_likelihood(const Program& e, const Trajectory& tau, const World& world, const InverseParams& params,
                           SolveCache* cache) {
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  const auto& x0 = tau.initial();
  const auto s0 = world.perceive(x0);
  const auto r = eval(e, s0);
  if (!r.ok()) {
    return kNone;
  }
  const auto universe = grounding_universe(s0.at.size(), r.task);
  const auto st = abstract(tau, world);
  std::vector<PlanSkeleton> observed;
  for (auto& sk : maximal_skeletons(st, universe)) {
    if (achieves(sk, SymState::from(s0), r.task)) observed.push_back(std::move(sk));
  }
  if (observed.empty()) {
    return kNone;
  }
  const auto scores = plan_selection_likelihood(world, r.task, observed, x0, params, cache);
  return log_observed_mass(scores, params.beta);
}

}  // namespace exprog

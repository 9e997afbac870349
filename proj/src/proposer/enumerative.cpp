#include <algorithm>
#include <random>
#include <set>

#include "exprog/proposer.hpp"

namespace exprog {

EnumerativeProposer::EnumerativeProposer(ProposerConfig config, World world)
    : config_(config), world_(std::move(world)) {
  const int top = std::min(config_.max_size, grammar_max_size());
  std::mt19937_64 rng(config_.seed);
  for (int s = 0; s <= top; ++s) {
    auto level = grammar_level(s);
    std::shuffle(level.begin(), level.end(), rng);
    levels_.push_back(std::move(level));
  }
}

std::vector<Program> EnumerativeProposer::propose(const ProposalContext& ctx) {
  std::set<Program> skip(ctx.tried.begin(), ctx.tried.end());
  for (const auto& [p, w] : ctx.previous) skip.insert(p);

  const auto consistent = [&](const Program& p) {
    for (std::size_t i = 0; i < ctx.initial_states.size(); ++i) {
      const auto r = eval(p, ctx.initial_states[i]);
      if (!r.ok()) return false;
      if (i < ctx.demos.size() && !satisfies(r.task, ctx.demos[i].states)) return false;
    }
    return true;
  };

  std::vector<Program> out;
  for (const auto& level : levels_) {
    for (const auto& p : level) {
      if (out.size() >= ctx.requested) return out;
      if (!skip.count(p) && consistent(p)) out.push_back(p);
    }
  }
  if (out.size() >= ctx.requested) return out;
  throw GrammarExhausted("grammar exhausted at size " + std::to_string(config_.max_size) + " with " +
                             std::to_string(out.size()) + " of " + std::to_string(ctx.requested) + " programs",
                         std::move(out));
}

std::unique_ptr<Proposer> make_proposer(const ProposerConfig& config) {
  if (config.mode == ProposerConfig::Mode::Remote) return std::make_unique<RemoteProposer>(config);
  return std::make_unique<EnumerativeProposer>(config);
}

}  // namespace exprog

#include <algorithm>
#include <bit>

#include "exprog/tamp.hpp"

namespace exprog {
namespace {

std::vector<RegionMask> masks_of(const Conjunction& g, std::size_t n) {
  std::vector<RegionMask> m(n, 0);
  for (const auto& a : g) {
    if (a.object < n) m[a.object] |= bit(a.region);
  }
  return m;
}

std::size_t advance(const SymState& s, const GroundedTask& g, std::size_t stage) {
  while (stage < g.size() && s.holds(g[stage])) ++stage;
  return stage;
}

}  // namespace

SkeletonStream::SkeletonStream(const SymbolicState& s0, GroundedTask g, SearchParams params)
    : goal_(std::move(g)),
      params_(params),
      universe_(grounding_universe(s0.at.size(), goal_)),
      max_depth_(2 * s0.at.size() + params.extra_depth) {
  const std::size_t n = s0.at.size();
  goal_atoms_.assign(n, 0);
  for (const auto& conj : goal_) {
    stage_masks_.push_back(masks_of(conj, n));
    for (std::size_t o = 0; o < n; ++o) goal_atoms_[o] |= stage_masks_.back()[o];
  }
  for (std::size_t i = 0; i + 1 < stage_masks_.size(); ++i) {
    for (std::size_t o = 0; o < n; ++o) {
      chain_ += std::popcount(static_cast<unsigned>(stage_masks_[i][o] ^ stage_masks_[i + 1][o]));
    }
  }
  Rec root{SymState::from(s0), 0, 0, {}, 0};
  root.stage = advance(root.state, goal_, 0);
  push(std::move(root));
}

double SkeletonStream::heuristic(const SymState& s, std::size_t stage) const {
  if (stage >= stage_masks_.size()) return 0.0;
  double d = 0.0;
  for (std::size_t o = 0; o < s.at.size(); ++o) {
    d += std::popcount(static_cast<unsigned>((s.at[o] & goal_atoms_[o]) ^ stage_masks_[stage][o]));
  }
  return d + chain_ - static_cast<double>(stage);
}

void SkeletonStream::push(Rec rec) {
  const double f = static_cast<double>(rec.depth) + heuristic(rec.state, rec.stage);
  const std::uint64_t order = params_.fifo ? counter_ : ~counter_;
  ++counter_;
  nodes_.push_back(std::move(rec));
  open_.push({f, order, nodes_.size() - 1});
}

PlanSkeleton SkeletonStream::path(std::size_t index) const {
  PlanSkeleton out;
  while (index != 0) {
    out.push_back(nodes_[index].op);
    index = nodes_[index].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void SkeletonStream::fill() {
  std::vector<PlanSkeleton> found;
  while (!open_.empty() && found.size() < params_.window && expansions_ < params_.max_expansions) {
    const Entry e = open_.top();
    open_.pop();
    const std::size_t index = e.index;
    if (nodes_[index].stage == goal_.size()) {
      found.push_back(path(index));
      continue;
    }
    if (nodes_[index].depth >= max_depth_) {
      continue;
    }
    ++expansions_;
    for (const auto& op : universe_) {
      const Rec& cur = nodes_[index];
      if (op.kind == OpKind::Pick && index != 0 && cur.op.kind == OpKind::Place && cur.op.object == op.object) {
        continue;
      }
      auto next = apply(op, cur.state);
      if (!next) continue;
      const std::size_t stage = advance(*next, goal_, cur.stage);
      const std::size_t depth = cur.depth + 1;
      push(Rec{std::move(*next), stage, index, op, depth});
    }
  }
  if (expansions_ >= params_.max_expansions) {
    // Budget spent: drop whatever is left open.
    open_ = {};
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const PlanSkeleton& a, const PlanSkeleton& b) { return a.size() < b.size(); });
  buffer_ = std::move(found);
  served_ = 0;
}

std::optional<PlanSkeleton> SkeletonStream::next() {
  if (served_ >= buffer_.size()) {
    buffer_.clear();
    if (open_.empty()) return std::nullopt;
    fill();
    if (buffer_.empty()) return std::nullopt;
  }
  auto out = std::move(buffer_[served_++]);
  if (served_ >= buffer_.size()) buffer_.clear();
  return out;
}

std::vector<PlanSkeleton> symbolic_search(const SymbolicState& s0, const GroundedTask& g, std::size_t max_plans,
                                          SearchParams params) {
  SkeletonStream stream(s0, g, params);
  std::vector<PlanSkeleton> out;
  while (out.size() < max_plans) {
    auto p = stream.next();
    if (!p) break;
    out.push_back(std::move(*p));
  }
  return out;
}

}  // namespace exprog

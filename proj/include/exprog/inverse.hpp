#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "exprog/dsl.hpp"
#include "exprog/tamp.hpp"
#include "exprog/world.hpp"

namespace exprog {

struct SymbolicTrajectory {
  std::vector<SymbolicState> states;
  /// Frame index of the first state in each collapsed run.
  std::vector<std::size_t> frame_index;

  std::size_t size() const { return states.size(); }
};

SymbolicTrajectory abstract(const Trajectory& tau, const World& world);

/// Facts are bits: At(o, r) = 6o + r, HandEmpty = 48, Holding(o) = 49 + o.
using FactSet = std::uint64_t;
inline constexpr std::size_t kMaxFactObjects = 8;

FactSet fact_at(ObjectId o, Region r);
FactSet fact_hand_empty();
FactSet fact_holding(ObjectId o);
FactSet facts_of(const SymbolicState& s);

/// Pre, Eff and Mnt as fact sets; each must be contained in the state.
struct OperatorFacts {
  FactSet pre = 0;
  FactSet eff = 0;
  FactSet mnt = 0;
};

OperatorFacts operator_facts(const GroundedOp& op);

struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t op = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// out[i] lists the segments starting at i, in operator order.
std::vector<std::vector<Segment>> discover_segments(std::span<const FactSet> states,
                                                    std::span<const OperatorFacts> ops);

struct MaximalPlan {
  std::vector<std::size_t> ops;
  /// Vertex indices v_0 = 0, v_1, ..., v_m.
  std::vector<std::size_t> bounds;

  friend bool operator==(const MaximalPlan&, const MaximalPlan&) = default;
  friend auto operator<=>(const MaximalPlan&, const MaximalPlan&) = default;
};

/// Every segment chain from vertex 0 that ends where no segment starts.
std::vector<MaximalPlan> maximal_plans(std::span<const FactSet> states, std::span<const OperatorFacts> ops);

/// Maximal plans of a demonstration over a grounded operator universe.
std::vector<PlanSkeleton> maximal_skeletons(const SymbolicTrajectory& st, std::span<const GroundedOp> universe);

/// The skeleton is one of the maximal plans of the demo over its own
/// operators plus Pick(o) and Place(o, {}) for every object.
bool plan_satisfies(const PlanSkeleton& skeleton, const Trajectory& tau, const World& world);

/// exp(-beta c_i) / sum_j exp(-beta c_j); infinite costs get weight 0.
std::vector<double> boltzmann(std::span<const double> costs, double beta);
double log_sum_exp(std::span<const double> xs);

struct PlanScore {
  PlanSkeleton skeleton;
  double cost = 0.0;
  double probability = 0.0;
  bool observed = false;
};

struct InverseParams {
  double beta = 0.05;
  double alpha = 1.0;
  SolveProfile profile = SolveProfile::rationality();
};

/// Solve results keyed by (initial state, grounded task, observed plans).
class SolveCache {
 public:
  std::optional<std::vector<PlanScore>> find(const std::string& key) const;
  void put(const std::string& key, std::vector<PlanScore> scores);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<PlanScore>> entries_;
};

std::string digest(const WorldState& w);
std::string digest(const GroundedTask& g);

/// Boltzmann plan choice over the observed skeletons plus solver candidates.
/// Costs are sample-minimum refinement costs; infeasible observed plans keep
/// probability 0.
std::vector<PlanScore> plan_selection_likelihood(const World& world, const GroundedTask& g,
                                                 std::span<const PlanSkeleton> observed, const WorldState& w0,
                                                 const InverseParams& params, SolveCache* cache = nullptr);

/// Total softmax weight of observed skeletons (log); -inf if none refines.
double log_observed_mass(std::span<const PlanScore> scores, double beta);

/// Log of the demo likelihood under program `e`; -inf when e fails to ground
/// or no maximal plan of the demo reaches its goals.
double demo_log_likelihood(const Program& e, const Trajectory& tau, const World& world, const InverseParams& params,
                           SolveCache* cache = nullptr);
inline double demo_likelihood(const Program& e, const Trajectory& tau, const World& world,
                              const InverseParams& params, SolveCache* cache = nullptr) {
  return std::exp(demo_log_likelihood(e, tau, world, params, cache));
}

struct Hypothesis {
  Program program;
  double log_prior = 0.0;
  std::vector<double> log_likelihoods;
  double weight = 0.0;

  double log_joint() const;
};

struct Posterior {
  /// Sorted by weight, then size, then s-expression.
  std::vector<Hypothesis> hypotheses;
  /// Every hypothesis had zero likelihood; order falls back to the prior.
  bool all_zero = false;

  const Hypothesis* map() const { return hypotheses.empty() ? nullptr : &hypotheses.front(); }
  void truncate(std::size_t n);
};

Posterior posterior(std::span<const Program> programs, std::span<const Trajectory> demos, const World& world,
                    const InverseParams& params, SolveCache* cache = nullptr);

struct ProposalContext {
  std::vector<SymbolicState> initial_states;
  std::vector<SymbolicTrajectory> demos;
  /// Previous pool with weights.
  std::vector<std::pair<Program, double>> previous;
  /// Every program proposed in earlier iterations, including truncated ones.
  std::vector<Program> tried;
  std::size_t requested = 10;
  /// Raw demos, for proposers that render frames.
  std::span<const Trajectory> trajectories;
};

class ProposerFailure : public std::runtime_error {
 public:
  explicit ProposerFailure(const std::string& what, std::vector<Program> partial = {})
      : std::runtime_error(what), partial_(std::move(partial)) {}
  /// Programs produced before the failure; still scored by the loop.
  const std::vector<Program>& partial() const { return partial_; }

 private:
  std::vector<Program> partial_;
};

class Proposer {
 public:
  virtual ~Proposer() = default;
  /// Throws ProposerFailure (or a subclass) when no programs can be produced.
  virtual std::vector<Program> propose(const ProposalContext& ctx) = 0;
};

struct RirResult {
  Posterior posterior;
  std::vector<Posterior> history;
  std::optional<std::string> error;
};

RirResult rir_loop(std::span<const Trajectory> demos, Proposer& proposer, int iterations, std::size_t pool_size,
                   const World& world, const InverseParams& params, SolveCache* cache = nullptr);

}  // namespace exprog

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "exprog/dsl.hpp"
#include "exprog/world.hpp"

namespace exprog {

enum class OpKind : std::uint8_t { Pick, Place };

/// Grounded Pick(o) or Place(o, R). A Place with an empty region set puts the
/// object down anywhere.
struct GroundedOp {
  OpKind kind = OpKind::Pick;
  ObjectId object = 0;
  RegionMask regions = 0;

  static GroundedOp pick(ObjectId o) { return {OpKind::Pick, o, 0}; }
  static GroundedOp place(ObjectId o, RegionMask r) { return {OpKind::Place, o, r}; }

  friend auto operator<=>(const GroundedOp&, const GroundedOp&) = default;
  friend bool operator==(const GroundedOp&, const GroundedOp&) = default;
};

using PlanSkeleton = std::vector<GroundedOp>;

std::string to_string(const GroundedOp& op);
std::string to_string(const PlanSkeleton& plan);
std::optional<GroundedOp> parse_op(std::string_view text);

/// Dynamic facts used by the symbolic planner. `at[o]` lists the atoms known
/// to hold; a picked object has none until it is placed.
struct SymState {
  std::vector<RegionMask> at;
  std::optional<ObjectId> holding;

  static SymState from(const SymbolicState& s) { return {s.at, s.holding}; }
  bool holds(const Conjunction& g) const;
  friend bool operator==(const SymState&, const SymState&) = default;
};

/// Applies an operator if its precondition holds.
std::optional<SymState> apply(const GroundedOp& op, const SymState& s);
/// Symbolic execution of a whole skeleton; nullopt if some precondition fails.
std::optional<SymState> execute(const PlanSkeleton& plan, const SymState& s);
/// True if executing `plan` from `s` visits the subgoals of `g` in order.
bool achieves(const PlanSkeleton& plan, const SymState& s, const GroundedTask& g);

/// Pick(o) for every object, Place(o, R) for every region set o receives in
/// some subgoal, and Place(o, {}) for every object.
std::vector<GroundedOp> grounding_universe(std::size_t object_count, const GroundedTask& g);

/// |s xor g_stage| + sum_i |g_i xor g_{i+1}| - stage over goal-mentioned atoms.
double hamming_heuristic(const Conjunction& s_atoms, const GroundedTask& g, std::size_t stage);
double hamming_heuristic(const SymState& s, const GroundedTask& g, std::size_t stage);

struct SearchParams {
  std::size_t max_expansions = 50000;
  std::size_t window = 8;
  /// Plans longer than 2n + extra_depth are not generated.
  std::size_t extra_depth = 4;
  /// Equal-f ties: true = first inserted first.
  bool fifo = true;
};

/// A* over skeletons yielding goal-reaching plans lazily. Within each window
/// of collected plans, shorter plans come first.
class SkeletonStream {
 public:
  SkeletonStream(const SymbolicState& s0, GroundedTask g, SearchParams params = {});

  std::optional<PlanSkeleton> next();
  bool exhausted() const { return buffer_.empty() && open_.empty(); }
  std::size_t expansions() const { return expansions_; }

 private:
  struct Rec {
    SymState state;
    std::size_t stage;
    std::size_t parent;
    GroundedOp op;
    std::size_t depth;
  };
  struct Entry {
    double f;
    std::uint64_t order;
    std::size_t index;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.f != b.f ? a.f > b.f : a.order > b.order;
    }
  };

  void fill();
  PlanSkeleton path(std::size_t index) const;
  void push(Rec rec);
  double heuristic(const SymState& s, std::size_t stage) const;

  GroundedTask goal_;
  SearchParams params_;
  std::vector<GroundedOp> universe_;
  std::size_t max_depth_;
  std::vector<std::vector<RegionMask>> stage_masks_;
  std::vector<RegionMask> goal_atoms_;
  double chain_ = 0.0;
  std::vector<Rec> nodes_;
  std::priority_queue<Entry, std::vector<Entry>, Later> open_;
  std::uint64_t counter_ = 0;
  std::size_t expansions_ = 0;
  std::vector<PlanSkeleton> buffer_;
  std::size_t served_ = 0;
};

/// Collects up to `max_plans` skeletons.
std::vector<PlanSkeleton> symbolic_search(const SymbolicState& s0, const GroundedTask& g, std::size_t max_plans,
                                          SearchParams params = {});

struct MotionParams {
  double step = 0.05;
  int max_iterations = 2000;
  double resolution = 0.005;
  int shortcut_rounds = 60;
};

using FreeFn = std::function<bool(Vec2)>;

bool segment_free(Vec2 a, Vec2 b, const FreeFn& free, double resolution);

/// Bidirectional RRT over agent positions in the unit square. The returned
/// polyline starts at `start`, ends at `goal` and is shortcut-smoothed.
std::optional<std::vector<Vec2>> rrt_connect(Vec2 start, Vec2 goal, const FreeFn& free, const MotionParams& params,
                                             std::mt19937_64& rng);

double path_length(std::span<const Vec2> path);

struct CostModel {
  double scale = 512.0;
  double lambda = 80.0;
};

/// Scaled path length of the action waypoints (starting from `start`) plus
/// lambda per operator.
double plan_cost(Vec2 start, std::span<const Action> actions, std::size_t operators, const CostModel& model = {});

struct RefineBudget {
  int local_backtracks = 3;
  int global_restarts = 3;
  int samples = 200;
  double min_grasp_gap = 0.006;
  double max_grasp_gap = 0.02;
  /// Clearance kept by the planner between the moving body and obstacles or walls.
  double clearance = 0.004;
  MotionParams motion;
};

struct Refinement {
  PlanSkeleton skeleton;
  std::vector<Action> actions;
  Trajectory trajectory;
  /// Index into `actions` one past the last action of each operator.
  std::vector<std::size_t> op_end;
  double cost = 0.0;
};

/// Samples grasps, placements and paths for each operator in turn, with local
/// resampling and full restarts. The result is checked by executing it.
std::optional<Refinement> refine(const PlanSkeleton& skeleton, const World& world, const WorldState& w0,
                                 const RefineBudget& budget, const CostModel& cost, std::mt19937_64& rng);

/// Centroid sample inside the region intersection, kept `margin` away from its boundary.
std::optional<Vec2> sample_in_regions(RegionMask regions, const World& world, double margin, std::mt19937_64& rng);

/// c_min - (c_max - c_min) / (n - 1) * delta^(-1/n); -inf for n < 2.
double lcb(double c_min, double c_max, int n, double delta);

struct ArmStats {
  int n = 0;
  int failures = 0;
  double c_min = std::numeric_limits<double>::infinity();
  double c_max = -std::numeric_limits<double>::infinity();
  bool forced = false;
  bool dead = false;

  void record(std::optional<double> cost, int max_failures);
  double bound(double delta) const { return lcb(c_min, c_max, n, delta); }
  bool feasible() const { return n > 0; }
};

/// Live feasible arm with the lowest LCB (ties to the lower index).
std::optional<std::size_t> select_arm(std::span<const ArmStats> arms, double delta);

struct SolveProfile {
  int max_candidates = 10;
  int solve_iterations = 100;
  double delta = 0.05;
  int forced_failures = 3;
  bool keep_arm_refinements = false;
  std::uint64_t seed = 0;
  SearchParams search;
  RefineBudget budget;
  CostModel cost;

  static SolveProfile rationality() {
    SolveProfile p;
    p.max_candidates = 5;
    p.solve_iterations = 20;
    return p;
  }
  static SolveProfile forward() { return {}; }
};

struct ArmReport {
  PlanSkeleton skeleton;
  ArmStats stats;
  /// Cheapest refinement seen for this arm (kept only when requested).
  std::optional<Refinement> best;
};

struct SolveResult {
  std::optional<Refinement> best;
  std::vector<ArmReport> arms;
  int iterations = 0;

  bool ok() const { return best.has_value(); }
};

/// Bandit allocation of refinement effort over skeletons: `forced` skeletons
/// first, then stream candidates until enough are feasible, then LCB pulls.
SolveResult solve(const World& world, const WorldState& w0, const GroundedTask& g, const SolveProfile& profile,
                  std::span<const PlanSkeleton> forced = {});

std::uint64_t arm_seed(std::uint64_t master, const PlanSkeleton& skeleton);
/// Derives an independent stream seed from (a, b).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace exprog

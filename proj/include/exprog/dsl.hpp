#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exprog/world.hpp"

namespace exprog {

/// Conjunction of At atoms, sorted and duplicate free.
using Conjunction = std::vector<Atom>;
/// Ordered subgoals g_1 .. g_k.
using GroundedTask = std::vector<Conjunction>;

Conjunction make_conjunction(std::vector<Atom> atoms);
bool holds(const Conjunction& g, const SymbolicState& s);
std::string to_string(const Conjunction& g, const SymbolicState* names = nullptr);
std::string to_string(const GroundedTask& g);

enum class Op : std::uint8_t {
  // predicates
  Color, Shape, And, Or, Not,
  // selectors
  All, Filter, Largest, Smallest, Rank, MostCommon, LeastCommon, Minus,
  // goal pieces
  At, For,
  // tasks
  Achieve, Seq, If, Each,
  // conditions
  Exists, Count,
};

enum class Sort : std::uint8_t { Predicate, Selector, Regions, Clause, Task, Condition };
Sort sort_of(Op op);

enum class ShapeClass : std::uint8_t { Circle, Box, Square, Rectangle, Triangle };
enum class Measure : std::uint8_t { Area, Perimeter, Extent };
enum class Attribute : std::uint8_t { Shape, Color };

std::string_view to_string(ShapeClass c);
std::string_view to_string(Measure m);
std::string_view to_string(Attribute a);
bool matches(ShapeClass c, const ObjectAttributes& a);
double measure(Measure m, const ObjectAttributes& a);

/// One AST node. `tag` carries the color, shape class, measure, attribute or
/// region mask; `number` carries rank, count or sort direction (1 = desc).
struct Node {
  Op op = Op::All;
  std::uint8_t tag = 0;
  int number = 0;
  std::vector<Node> kids;

  friend std::strong_ordering operator<=>(const Node& a, const Node& b);
  friend bool operator==(const Node&, const Node&) = default;
};

namespace ast {
Node color(Color c);
Node shape(ShapeClass c);
Node and_(Node p, Node q);
Node or_(Node p, Node q);
Node not_(Node p);
Node all();
Node filter(Node p);
Node largest(Measure m, Node sel);
Node smallest(Measure m, Node sel);
Node rank(Measure m, int k, Node sel);
Node most_common(Attribute a);
Node least_common(Attribute a);
Node minus(Node a, Node b);
Node at(RegionMask regions);
Node for_(Node sel, RegionMask regions);
Node achieve(std::vector<Node> clauses);
Node seq(std::vector<Node> tasks);
Node if_(Node cond, Node then, Node otherwise);
Node each(Measure m, bool descending, Node sel, RegionMask regions);
Node exists(Node sel);
Node count(Node sel, int n);
}  // namespace ast

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explanation program: a validated task-sorted AST.
class Program {
 public:
  Program() = default;
  /// Throws ParseError if `root` is ill-sorted.
  explicit Program(Node root);

  static Program parse(std::string_view text);

  const Node& root() const { return root_; }
  std::string to_sexpr() const;
  int size() const;

  friend std::strong_ordering operator<=>(const Program& a, const Program& b) { return a.root_ <=> b.root_; }
  friend bool operator==(const Program&, const Program&) = default;

 private:
  Node root_{Op::Achieve, 0, 0, {}};
};

std::string to_sexpr(const Node& n);
int node_size(const Node& n);
/// Throws ParseError describing the first sort violation.
void check_sorts(const Node& n, Sort expected);
Node parse_node(std::string_view text);

enum class EvalError : std::uint8_t { None, EmptyTask, IllegalMiddleComposition, UnsatisfiableGoal };
std::string_view to_string(EvalError e);

struct EvalResult {
  GroundedTask task;
  EvalError error = EvalError::None;

  bool ok() const { return error == EvalError::None; }
};

EvalResult eval(const Program& e, const SymbolicState& s);

/// Selector evaluation, object ids ascending.
std::vector<ObjectId> select(const Node& sel, const SymbolicState& s);
bool test(const Node& pred, const ObjectAttributes& a);

/// Concatenation of subgoal sequences.
GroundedTask flatten(std::span<const GroundedTask> parts);

/// Checks one conjunction for Middle exclusivity and per-object satisfiability.
EvalError validate(const Conjunction& g);

/// Greedy earliest-match scan of subgoals over a sequence of symbolic states.
bool satisfies(const GroundedTask& g, std::span<const SymbolicState> states);
/// g = eval(e, perceive(x_0)) must be reached in order along `tau`.
/// Eval errors make the result false.
bool satisfies(const Program& e, const Trajectory& tau, const World& world);

using StateSampler = std::function<SymbolicState(std::mt19937_64&)>;

/// Random layout of 3..6 objects with uniform centroids, perceived symbolically.
SymbolicState random_symbolic_state(std::mt19937_64& rng, const World& world);
StateSampler generic_sampler(const World& world);

/// Agreement of eval on `n` sampled states (both erroring counts as agreement).
bool extensional_equiv(const Program& a, const Program& b, const StateSampler& sampler, int n,
                       std::uint64_t seed);

}  // namespace exprog

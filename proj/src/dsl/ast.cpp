#include <algorithm>
#include <bit>

#include "exprog/dsl.hpp"

namespace exprog {

Sort sort_of(Op op) {
  switch (op) {
    case Op::Color:
    case Op::Shape:
    case Op::And:
    case Op::Or:
    case Op::Not: return Sort::Predicate;
    case Op::All:
    case Op::Filter:
    case Op::Largest:
    case Op::Smallest:
    case Op::Rank:
    case Op::MostCommon:
    case Op::LeastCommon:
    case Op::Minus: return Sort::Selector;
    case Op::At: return Sort::Regions;
    case Op::For: return Sort::Clause;
    case Op::Achieve:
    case Op::Seq:
    case Op::If:
    case Op::Each: return Sort::Task;
    case Op::Exists:
    case Op::Count: return Sort::Condition;
  }
  return Sort::Task;
}

std::string_view to_string(ShapeClass c) {
  switch (c) {
    case ShapeClass::Circle: return "circle";
    case ShapeClass::Box: return "box";
    case ShapeClass::Square: return "square";
    case ShapeClass::Rectangle: return "rectangle";
    case ShapeClass::Triangle: return "triangle";
  }
  return "?";
}

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Area: return "area";
    case Measure::Perimeter: return "perimeter";
    case Measure::Extent: return "extent";
  }
  return "?";
}

std::string_view to_string(Attribute a) { return a == Attribute::Shape ? "shape" : "color"; }

bool matches(ShapeClass c, const ObjectAttributes& a) {
  switch (c) {
    case ShapeClass::Circle: return a.kind == ShapeKind::Circle;
    case ShapeClass::Box: return a.kind == ShapeKind::Box;
    case ShapeClass::Square: return a.kind == ShapeKind::Box && a.square;
    case ShapeClass::Rectangle: return a.kind == ShapeKind::Box && !a.square;
    case ShapeClass::Triangle: return a.kind == ShapeKind::Triangle;
  }
  return false;
}

double measure(Measure m, const ObjectAttributes& a) {
  switch (m) {
    case Measure::Area: return a.area;
    case Measure::Perimeter: return a.perimeter;
    case Measure::Extent: return a.extent;
  }
  return 0.0;
}

namespace ast {

namespace {
Node make(Op op, std::uint8_t tag, int number, std::vector<Node> kids) {
  return Node{op, tag, number, std::move(kids)};
}
}  // namespace

Node color(Color c) { return make(Op::Color, static_cast<std::uint8_t>(c), 0, {}); }
Node shape(ShapeClass c) { return make(Op::Shape, static_cast<std::uint8_t>(c), 0, {}); }
Node and_(Node p, Node q) { return make(Op::And, 0, 0, {std::move(p), std::move(q)}); }
Node or_(Node p, Node q) { return make(Op::Or, 0, 0, {std::move(p), std::move(q)}); }
Node not_(Node p) { return make(Op::Not, 0, 0, {std::move(p)}); }
Node all() { return make(Op::All, 0, 0, {}); }
Node filter(Node p) { return make(Op::Filter, 0, 0, {std::move(p)}); }
Node largest(Measure m, Node sel) {
  return make(Op::Largest, static_cast<std::uint8_t>(m), 0, {std::move(sel)});
}
Node smallest(Measure m, Node sel) {
  return make(Op::Smallest, static_cast<std::uint8_t>(m), 0, {std::move(sel)});
}
Node rank(Measure m, int k, Node sel) {
  return make(Op::Rank, static_cast<std::uint8_t>(m), k, {std::move(sel)});
}
Node most_common(Attribute a) { return make(Op::MostCommon, static_cast<std::uint8_t>(a), 0, {}); }
Node least_common(Attribute a) { return make(Op::LeastCommon, static_cast<std::uint8_t>(a), 0, {}); }
Node minus(Node a, Node b) { return make(Op::Minus, 0, 0, {std::move(a), std::move(b)}); }
Node at(RegionMask regions) { return make(Op::At, regions, 0, {}); }
Node for_(Node sel, RegionMask regions) { return make(Op::For, 0, 0, {std::move(sel), at(regions)}); }
Node achieve(std::vector<Node> clauses) { return make(Op::Achieve, 0, 0, std::move(clauses)); }
Node seq(std::vector<Node> tasks) { return make(Op::Seq, 0, 0, std::move(tasks)); }
Node if_(Node cond, Node then, Node otherwise) {
  return make(Op::If, 0, 0, {std::move(cond), std::move(then), std::move(otherwise)});
}
Node each(Measure m, bool descending, Node sel, RegionMask regions) {
  return make(Op::Each, static_cast<std::uint8_t>(m), descending ? 1 : 0, {std::move(sel), at(regions)});
}
Node exists(Node sel) { return make(Op::Exists, 0, 0, {std::move(sel)}); }
Node count(Node sel, int n) { return make(Op::Count, 0, n, {std::move(sel)}); }

}  // namespace ast

std::strong_ordering operator<=>(const Node& a, const Node& b) {
  if (auto c = a.op <=> b.op; c != 0) return c;
  if (auto c = a.tag <=> b.tag; c != 0) return c;
  if (auto c = a.number <=> b.number; c != 0) return c;
  return std::lexicographical_compare_three_way(a.kids.begin(), a.kids.end(), b.kids.begin(), b.kids.end());
}

int node_size(const Node& n) {
  if (n.op == Op::At) {
    return std::popcount(static_cast<unsigned>(n.tag)) - 1;
  }
  int total = 1;
  for (const auto& k : n.kids) {
    total += node_size(k);
  }
  return total;
}

namespace {

void expect(bool ok, const std::string& what) {
  if (!ok) {
    throw ParseError(what);
  }
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Color: return "color";
    case Op::Shape: return "shape";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Not: return "not";
    case Op::All: return "all";
    case Op::Filter: return "filter";
    case Op::Largest: return "largest";
    case Op::Smallest: return "smallest";
    case Op::Rank: return "rank";
    case Op::MostCommon: return "most-common";
    case Op::LeastCommon: return "least-common";
    case Op::Minus: return "minus";
    case Op::At: return "at";
    case Op::For: return "for";
    case Op::Achieve: return "achieve";
    case Op::Seq: return "seq";
    case Op::If: return "if";
    case Op::Each: return "each";
    case Op::Exists: return "exists";
    case Op::Count: return "count";
  }
  return "?";
}

void print(const Node& n, std::string& out) {
  out += '(';
  out += op_name(n.op);
  switch (n.op) {
    case Op::Color: out += ' '; out += to_string(static_cast<Color>(n.tag)); break;
    case Op::Shape: out += ' '; out += to_string(static_cast<ShapeClass>(n.tag)); break;
    case Op::Largest:
    case Op::Smallest: out += ' '; out += to_string(static_cast<Measure>(n.tag)); break;
    case Op::Rank:
      out += ' ';
      out += to_string(static_cast<Measure>(n.tag));
      out += ' ' + std::to_string(n.number);
      break;
    case Op::MostCommon:
    case Op::LeastCommon: out += ' '; out += to_string(static_cast<Attribute>(n.tag)); break;
    case Op::At:
      for (auto r : regions_of(n.tag)) {
        out += ' ';
        out += to_string(r);
      }
      break;
    case Op::Each:
      out += ' ';
      out += to_string(static_cast<Measure>(n.tag));
      out += n.number ? " desc" : " asc";
      break;
    default: break;
  }
  for (const auto& k : n.kids) {
    out += ' ';
    print(k, out);
  }
  if (n.op == Op::Count) {
    out += ' ' + std::to_string(n.number);
  }
  out += ')';
}

}  // namespace

std::string to_sexpr(const Node& n) {
  std::string out;
  print(n, out);
  return out;
}

void check_sorts(const Node& n, Sort expected) {
  const auto name = std::string(op_name(n.op));
  expect(sort_of(n.op) == expected, "'" + name + "' is not allowed here");
  const auto arity = [&](std::size_t k) {
    expect(n.kids.size() == k, "'" + name + "' takes " + std::to_string(k) + " argument(s)");
  };
  switch (n.op) {
    case Op::Color:
      arity(0);
      expect(n.tag < kColorCount, "bad color");
      break;
    case Op::Shape:
      arity(0);
      expect(n.tag <= static_cast<int>(ShapeClass::Triangle), "bad shape class");
      break;
    case Op::And:
    case Op::Or:
      arity(2);
      check_sorts(n.kids[0], Sort::Predicate);
      check_sorts(n.kids[1], Sort::Predicate);
      break;
    case Op::Not:
      arity(1);
      check_sorts(n.kids[0], Sort::Predicate);
      break;
    case Op::All:
      arity(0);
      break;
    case Op::Filter:
      arity(1);
      check_sorts(n.kids[0], Sort::Predicate);
      break;
    case Op::Largest:
    case Op::Smallest:
    case Op::Rank:
      arity(1);
      expect(n.tag <= static_cast<int>(Measure::Extent), "bad measure");
      expect(n.op != Op::Rank || n.number >= 1, "rank starts at 1");
      check_sorts(n.kids[0], Sort::Selector);
      break;
    case Op::MostCommon:
    case Op::LeastCommon:
      arity(0);
      expect(n.tag <= static_cast<int>(Attribute::Color), "bad attribute");
      break;
    case Op::Minus:
      arity(2);
      check_sorts(n.kids[0], Sort::Selector);
      check_sorts(n.kids[1], Sort::Selector);
      break;
    case Op::At:
      arity(0);
      expect(n.tag != 0 && n.tag < (1 << kRegionCount), "'at' needs at least one region");
      break;
    case Op::For:
    case Op::Each:
      arity(2);
      check_sorts(n.kids[0], Sort::Selector);
      check_sorts(n.kids[1], Sort::Regions);
      expect(n.op != Op::Each || n.tag <= static_cast<int>(Measure::Extent), "bad measure");
      break;
    case Op::Achieve:
      expect(!n.kids.empty(), "'achieve' needs a clause");
      for (const auto& k : n.kids) check_sorts(k, Sort::Clause);
      break;
    case Op::Seq:
      expect(!n.kids.empty(), "'seq' needs a task");
      for (const auto& k : n.kids) check_sorts(k, Sort::Task);
      break;
    case Op::If:
      arity(3);
      check_sorts(n.kids[0], Sort::Condition);
      check_sorts(n.kids[1], Sort::Task);
      check_sorts(n.kids[2], Sort::Task);
      break;
    case Op::Exists:
    case Op::Count:
      arity(1);
      expect(n.op != Op::Count || n.number >= 0, "count must be non-negative");
      check_sorts(n.kids[0], Sort::Selector);
      break;
  }
}

Program::Program(Node root) : root_(std::move(root)) { check_sorts(root_, Sort::Task); }

Program Program::parse(std::string_view text) { return Program(parse_node(text)); }

std::string Program::to_sexpr() const { return exprog::to_sexpr(root_); }

int Program::size() const { return node_size(root_); }

}  // namespace exprog

#include <algorithm>
#include <map>

#include "exprog/proposer.hpp"

namespace exprog {
namespace {

std::vector<Node> atoms() {
  std::vector<Node> out;
  for (int c = 0; c < kColorCount; ++c) out.push_back(ast::color(static_cast<Color>(c)));
  for (auto s : {ShapeClass::Circle, ShapeClass::Box, ShapeClass::Square, ShapeClass::Rectangle, ShapeClass::Triangle}) {
    out.push_back(ast::shape(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::map<int, std::vector<Program>>& levels() {
  static const auto table = [] {
    std::map<int, std::vector<Program>> out;
    const auto sels = grammar_selectors();
    for (const auto& sel : sels) {
      for (const auto m : satisfiable_region_sets()) {
        Program p(ast::achieve({ast::for_(sel, m)}));
        out[p.size()].push_back(std::move(p));
      }
    }
    for (auto& [size, programs] : out) std::sort(programs.begin(), programs.end());
    return out;
  }();
  return table;
}

}  // namespace

std::vector<Node> grammar_predicates() {
  const auto base = atoms();
  std::vector<Node> out = base;
  for (const auto& a : base) out.push_back(ast::not_(a));
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i + 1; j < base.size(); ++j) {
      out.push_back(ast::and_(base[i], base[j]));
      out.push_back(ast::or_(base[i], base[j]));
    }
  }
  return out;
}

std::vector<Node> grammar_selectors() {
  std::vector<Node> bases{ast::all()};
  for (auto& p : grammar_predicates()) bases.push_back(ast::filter(std::move(p)));
  std::vector<Node> out = bases;
  for (auto m : {Measure::Area, Measure::Perimeter, Measure::Extent}) {
    for (const auto& b : bases) {
      out.push_back(ast::largest(m, b));
      out.push_back(ast::smallest(m, b));
    }
  }
  for (auto a : {Attribute::Shape, Attribute::Color}) {
    out.push_back(ast::most_common(a));
    out.push_back(ast::least_common(a));
  }
  return out;
}

std::vector<Program> grammar_level(int size) {
  const auto& table = levels();
  const auto it = table.find(size);
  return it == table.end() ? std::vector<Program>{} : it->second;
}

int grammar_max_size() { return levels().rbegin()->first; }

bool regions_well_formed(const Node& n) {
  if (n.op == Op::At && !region_set_satisfiable(n.tag)) return false;
  return std::all_of(n.kids.begin(), n.kids.end(), regions_well_formed);
}

}  // namespace exprog

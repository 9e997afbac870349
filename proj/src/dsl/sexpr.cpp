#include <cctype>
#include <charconv>
#include <optional>

#include "exprog/dsl.hpp"

namespace exprog {
namespace {

struct Cell {
  std::string atom;
  std::vector<Cell> list;
  bool is_list = false;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Cell read() {
    skip();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of input");
    }
    if (text_[pos_] == ')') {
      throw ParseError("unexpected ')' at offset " + std::to_string(pos_));
    }
    if (text_[pos_] == '(') {
      ++pos_;
      Cell c;
      c.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) {
          throw ParseError("unbalanced '('");
        }
        if (text_[pos_] == ')') {
          ++pos_;
          return c;
        }
        c.list.push_back(read());
      }
    }
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
      ++pos_;
    }
    return Cell{std::string(text_.substr(start, pos_ - start)), {}, false};
  }

  void finish() {
    skip();
    if (pos_ != text_.size()) {
      throw ParseError("trailing input at offset " + std::to_string(pos_));
    }
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

const std::string& atom_of(const Cell& c, const char* what) {
  if (c.is_list) {
    throw ParseError(std::string("expected ") + what + ", got a list");
  }
  return c.atom;
}

int integer(const Cell& c) {
  const auto& s = atom_of(c, "an integer");
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError("expected an integer, got '" + s + "'");
  }
  return v;
}

template <class E>
E keyword(const Cell& c, std::initializer_list<E> options, const char* what) {
  const auto& s = atom_of(c, what);
  for (auto o : options) {
    if (to_string(o) == s) {
      return o;
    }
  }
  throw ParseError(std::string("unknown ") + what + " '" + s + "'");
}

Measure measure_of(const Cell& c) {
  return keyword(c, {Measure::Area, Measure::Perimeter, Measure::Extent}, "measure");
}

void arity(const Cell& c, std::size_t n) {
  if (c.list.size() != n + 1) {
    throw ParseError("'" + c.list[0].atom + "' takes " + std::to_string(n) + " argument(s)");
  }
}

RegionMask regions(const Cell& c) {
  RegionMask m = 0;
  for (std::size_t i = 1; i < c.list.size(); ++i) {
    const auto r = parse_region(atom_of(c.list[i], "a region"));
    if (!r) {
      throw ParseError("unknown region '" + c.list[i].atom + "'");
    }
    m |= bit(*r);
  }
  if (m == 0) {
    throw ParseError("'at' needs at least one region");
  }
  return m;
}

Node build(const Cell& c);

std::vector<Node> rest(const Cell& c, std::size_t from = 1) {
  std::vector<Node> out;
  for (std::size_t i = from; i < c.list.size(); ++i) {
    out.push_back(build(c.list[i]));
  }
  return out;
}

Node build(const Cell& c) {
  if (!c.is_list) {
    throw ParseError("expected a form, got '" + c.atom + "'");
  }
  if (c.list.empty()) {
    throw ParseError("empty form");
  }
  const auto& head = atom_of(c.list[0], "an operator");
  using namespace ast;
  if (head == "color") {
    arity(c, 1);
    const auto col = parse_color(atom_of(c.list[1], "a color"));
    if (!col) throw ParseError("unknown color '" + c.list[1].atom + "'");
    return color(*col);
  }
  if (head == "shape") {
    arity(c, 1);
    return shape(keyword(c.list[1],
                         {ShapeClass::Circle, ShapeClass::Box, ShapeClass::Square, ShapeClass::Rectangle,
                          ShapeClass::Triangle},
                         "shape class"));
  }
  if (head == "and" || head == "or") {
    arity(c, 2);
    return head == "and" ? and_(build(c.list[1]), build(c.list[2])) : or_(build(c.list[1]), build(c.list[2]));
  }
  if (head == "not") {
    arity(c, 1);
    return not_(build(c.list[1]));
  }
  if (head == "all") {
    arity(c, 0);
    return all();
  }
  if (head == "filter") {
    arity(c, 1);
    return filter(build(c.list[1]));
  }
  if (head == "largest" || head == "smallest") {
    arity(c, 2);
    const auto m = measure_of(c.list[1]);
    return head == "largest" ? largest(m, build(c.list[2])) : smallest(m, build(c.list[2]));
  }
  if (head == "rank") {
    arity(c, 3);
    return rank(measure_of(c.list[1]), integer(c.list[2]), build(c.list[3]));
  }
  if (head == "most-common" || head == "least-common") {
    arity(c, 1);
    const auto a = keyword(c.list[1], {Attribute::Shape, Attribute::Color}, "attribute");
    return head == "most-common" ? most_common(a) : least_common(a);
  }
  if (head == "minus") {
    arity(c, 2);
    return minus(build(c.list[1]), build(c.list[2]));
  }
  if (head == "at") {
    return at(regions(c));
  }
  if (head == "for") {
    arity(c, 2);
    auto sel = build(c.list[1]);
    const auto& r = c.list[2];
    if (!r.is_list || r.list.empty() || r.list[0].atom != "at") {
      throw ParseError("'for' expects an (at ...) form");
    }
    return for_(std::move(sel), regions(r));
  }
  if (head == "achieve") {
    return achieve(rest(c));
  }
  if (head == "seq") {
    return seq(rest(c));
  }
  if (head == "if") {
    arity(c, 3);
    return if_(build(c.list[1]), build(c.list[2]), build(c.list[3]));
  }
  if (head == "each") {
    arity(c, 4);
    const auto m = measure_of(c.list[1]);
    const auto& dir = atom_of(c.list[2], "asc or desc");
    if (dir != "asc" && dir != "desc") throw ParseError("expected asc or desc, got '" + dir + "'");
    auto sel = build(c.list[3]);
    const auto& r = c.list[4];
    if (!r.is_list || r.list.empty() || r.list[0].atom != "at") {
      throw ParseError("'each' expects an (at ...) form");
    }
    return each(m, dir == "desc", std::move(sel), regions(r));
  }
  if (head == "exists") {
    arity(c, 1);
    return exists(build(c.list[1]));
  }
  if (head == "count") {
    arity(c, 2);
    return count(build(c.list[1]), integer(c.list[2]));
  }
  throw ParseError("unknown operator '" + head + "'");
}

}  // namespace

Node parse_node(std::string_view text) {
  Reader r(text);
  const Cell c = r.read();
  r.finish();
  return build(c);
}

}  // namespace exprog

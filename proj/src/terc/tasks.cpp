#include <stdexcept>

#include "exprog/terc.hpp"

namespace exprog {
namespace {

ObjectSpec obj(std::optional<ShapeClass> shape, std::optional<Color> color = std::nullopt) {
  return {shape, color};
}
ObjectSpec colored(Color c) { return {std::nullopt, c}; }

Node pred(const char* text) { return parse_node(text); }

constexpr auto kCircle = ShapeClass::Circle;
constexpr auto kBox = ShapeClass::Box;
constexpr auto kSquare = ShapeClass::Square;
constexpr auto kRect = ShapeClass::Rectangle;
constexpr auto kTri = ShapeClass::Triangle;

TaskDef task(int id, const char* label, const char* program, SamplerSpec spec) {
  return TaskDef{id, label, Program::parse(program), std::move(spec)};
}

std::vector<TaskDef> build() {
  using C = Color;
  std::vector<TaskDef> t;
  t.push_back(task(1, "red circle -> top right corner",
                   "(achieve (for (filter (and (color red) (shape circle))) (at Right Top Corner)))",
                   {{obj(kCircle, C::Red)}, {}, 0.5, 3, 6, pred("(and (color red) (shape circle))")}));
  t.push_back(task(2, "circles -> middle", "(achieve (for (filter (shape circle)) (at Middle)))",
                   {{obj(kCircle)}, {obj(kCircle)}, 0.5, 3, 5, pred("(shape circle)")}));
  t.push_back(task(3, "green boxes -> bottom", "(achieve (for (filter (and (color green) (shape box))) (at Bottom)))",
                   {{obj(kBox, C::Green)}, {obj(kBox, C::Green)}, 0.5, 3, 5, pred("(and (color green) (shape box))")}));
  t.push_back(task(4, "triangles -> left", "(achieve (for (filter (shape triangle)) (at Left)))",
                   {{obj(kTri)}, {obj(kTri)}, 0.5, 3, 5, pred("(shape triangle)")}));
  t.push_back(task(5, "circles -> any corner", "(achieve (for (filter (shape circle)) (at Corner)))",
                   {{obj(kCircle)}, {obj(kCircle)}, 0.5, 3, 5, pred("(shape circle)")}));
  t.push_back(task(6, "boxes -> left", "(achieve (for (filter (shape box)) (at Left)))",
                   {{obj(kBox)}, {obj(kBox)}, 0.5, 3, 5, pred("(shape box)")}));
  t.push_back(task(7, "pink objects -> middle", "(achieve (for (filter (color pink)) (at Middle)))",
                   {{colored(C::Pink)}, {colored(C::Pink)}, 0.4, 3, 5, pred("(color pink)")}));
  t.push_back(task(8, "green objects -> top", "(achieve (for (filter (color green)) (at Top)))",
                   {{colored(C::Green)}, {colored(C::Green)}, 0.5, 3, 5, pred("(color green)")}));
  t.push_back(task(9, "triangles -> bottom left", "(achieve (for (filter (shape triangle)) (at Left Bottom)))",
                   {{obj(kTri)}, {obj(kTri)}, 0.5, 3, 5, pred("(shape triangle)")}));
  t.push_back(task(10, "red objects -> bottom left corner",
                   "(achieve (for (filter (color red)) (at Left Bottom Corner)))",
                   {{colored(C::Red)}, {}, 0.5, 3, 5, pred("(color red)")}));
  t.push_back(task(11, "green box -> bottom right corner",
                   "(achieve (for (filter (and (color green) (shape box))) (at Right Bottom Corner)))",
                   {{obj(kBox, C::Green)}, {}, 0.5, 3, 6, pred("(and (color green) (shape box))")}));
  t.push_back(task(12, "orange triangle -> bottom right corner",
                   "(achieve (for (filter (and (color orange) (shape triangle))) (at Right Bottom Corner)))",
                   {{obj(kTri, C::Orange)}, {}, 0.5, 3, 6, pred("(and (color orange) (shape triangle))")}));
  t.push_back(task(13, "green -> left, blue -> right",
                   "(achieve (for (filter (color green)) (at Left)) (for (filter (color blue)) (at Right)))",
                   {{colored(C::Green), colored(C::Blue)}, {colored(C::Green)}, 0.4, 3, 5,
                    pred("(or (color green) (color blue))")}));
  t.push_back(task(14, "squares -> top left", "(achieve (for (filter (shape square)) (at Left Top)))",
                   {{obj(kSquare), obj(kRect)}, {obj(kSquare)}, 0.4, 3, 5, pred("(shape square)")}));
  t.push_back(task(15, "yellow triangle -> top right",
                   "(achieve (for (filter (and (color yellow) (shape triangle))) (at Right Top)))",
                   {{obj(kTri, C::Yellow)}, {}, 0.5, 3, 6, pred("(and (color yellow) (shape triangle))")}));
  t.push_back(task(16, "purple objects -> top left corner",
                   "(achieve (for (filter (color purple)) (at Left Top Corner)))",
                   {{colored(C::Purple)}, {}, 0.5, 3, 5, pred("(color purple)")}));
  t.push_back(task(17, "all but yellow -> bottom", "(achieve (for (filter (not (color yellow))) (at Bottom)))",
                   {{colored(C::Yellow)}, {}, 0.5, 3, 4, pred("(color yellow)")}));
  t.push_back(task(18, "orange box -> bottom left corner",
                   "(achieve (for (filter (and (color orange) (shape box))) (at Left Bottom Corner)))",
                   {{obj(kBox, C::Orange)}, {}, 0.5, 3, 6, pred("(and (color orange) (shape box))")}));
  t.push_back(task(19, "largest circle -> bottom right corner",
                   "(achieve (for (largest area (filter (shape circle))) (at Right Bottom Corner)))",
                   {{obj(kCircle), obj(kCircle)}, {obj(kCircle)}, 0.5, 3, 6, std::nullopt}));
  t.push_back(task(20, "smallest object -> middle", "(achieve (for (smallest area (all)) (at Middle)))",
                   {{}, {}, 0.5, 3, 6, std::nullopt}));
  t.push_back(task(21, "largest box -> bottom left",
                   "(achieve (for (largest area (filter (shape box))) (at Left Bottom)))",
                   {{obj(kBox), obj(kBox)}, {}, 0.5, 3, 6, std::nullopt}));
  t.push_back(task(22, "purple square -> top left corner",
                   "(achieve (for (filter (and (color purple) (shape square))) (at Left Top Corner)))",
                   {{obj(kSquare, C::Purple)}, {}, 0.5, 3, 6, pred("(and (color purple) (shape square))")}));
  t.push_back(task(23, "largest blue or green circle -> left",
                   "(achieve (for (largest area (filter (and (or (color blue) (color green)) (shape circle)))) "
                   "(at Left)))",
                   {{obj(kCircle, C::Blue), obj(kCircle, C::Green)}, {}, 0.5, 3, 6, std::nullopt}));
  t.push_back(task(24, "largest yellow or green box -> top right",
                   "(achieve (for (largest area (filter (and (or (color yellow) (color green)) (shape box)))) "
                   "(at Right Top)))",
                   {{obj(kBox, C::Yellow), obj(kBox, C::Green)}, {}, 0.5, 3, 6, std::nullopt}));
  t.push_back(task(25, "green -> left and blue -> right",
                   "(achieve (for (filter (color green)) (at Left)) (for (filter (color blue)) (at Right)))",
                   {{colored(C::Green), colored(C::Blue)}, {colored(C::Blue)}, 0.4, 3, 5,
                    pred("(or (color green) (color blue))")}));
  t.push_back(task(26, "boxes -> top left, then circles -> bottom right",
                   "(seq (achieve (for (filter (shape box)) (at Left Top))) "
                   "(achieve (for (filter (shape circle)) (at Right Bottom))))",
                   {{obj(kBox), obj(kCircle)}, {obj(kBox)}, 0.4, 3, 4, pred("(or (shape box) (shape circle))")}));
  t.push_back(task(27, "circles -> top, then the rest -> bottom",
                   "(seq (achieve (for (filter (shape circle)) (at Top))) "
                   "(achieve (for (minus (all) (filter (shape circle))) (at Bottom))))",
                   {{obj(kCircle)}, {}, 0.5, 3, 3, pred("(shape circle)")}));
  t.push_back(task(28, "rectangles -> left, then squares -> right",
                   "(seq (achieve (for (filter (shape rectangle)) (at Left))) "
                   "(achieve (for (filter (shape square)) (at Right))))",
                   {{obj(kRect), obj(kSquare)}, {obj(kRect)}, 0.4, 3, 4, pred("(shape box)")}));
  t.push_back(task(29, "red -> right, then green -> left",
                   "(seq (achieve (for (filter (color red)) (at Right))) "
                   "(achieve (for (filter (color green)) (at Left))))",
                   {{colored(C::Red), colored(C::Green)}, {colored(C::Red)}, 0.4, 3, 4,
                    pred("(or (color red) (color green))")}));
  t.push_back(task(30, "largest triangle -> top right, then other triangles -> bottom left",
                   "(seq (achieve (for (largest area (filter (shape triangle))) (at Right Top))) "
                   "(achieve (for (minus (filter (shape triangle)) (largest area (filter (shape triangle)))) "
                   "(at Left Bottom))))",
                   {{obj(kTri), obj(kTri)}, {}, 0.5, 3, 4, pred("(shape triangle)")}));
  t.push_back(task(31, "most frequent shape -> left", "(achieve (for (most-common shape) (at Left)))",
                   {{obj(kCircle), obj(kCircle)}, {}, 0.5, 3, 5, std::nullopt}));
  t.push_back(task(32, "odd color -> top right corner", "(achieve (for (least-common color) (at Right Top Corner)))",
                   {{}, {}, 0.5, 3, 5, std::nullopt, 2}));
  t.push_back(task(33, "triangle present ? circles : boxes -> top right",
                   "(if (exists (filter (shape triangle))) "
                   "(achieve (for (filter (shape circle)) (at Right Top))) "
                   "(achieve (for (filter (shape box)) (at Right Top))))",
                   {{obj(kCircle), obj(kBox)}, {obj(kTri)}, 0.5, 3, 5, pred("(shape triangle)")}));
  t.push_back(task(34, "pink triangle present ? it : pink circle -> top left corner",
                   "(if (exists (filter (and (color pink) (shape triangle)))) "
                   "(achieve (for (filter (and (color pink) (shape triangle))) (at Left Top Corner))) "
                   "(achieve (for (filter (and (color pink) (shape circle))) (at Left Top Corner))))",
                   {{obj(kCircle, C::Pink)}, {obj(kTri, C::Pink)}, 0.5, 3, 5,
                    pred("(and (color pink) (or (shape triangle) (shape circle)))")}));
  t.push_back(task(35, "three objects by area: top left, middle, bottom right",
                   "(seq (achieve (for (rank area 1 (all)) (at Left Top))) "
                   "(achieve (for (rank area 2 (all)) (at Middle))) "
                   "(achieve (for (rank area 3 (all)) (at Right Bottom))))",
                   {{}, {}, 0.5, 3, 3, std::nullopt}));
  return t;
}

}  // namespace

const std::vector<TaskDef>& terc_tasks() {
  static const std::vector<TaskDef> tasks = build();
  return tasks;
}

bool valid_task_id(int id) { return id >= 1 && id <= static_cast<int>(terc_tasks().size()); }

const TaskDef& terc_task(int id) {
  if (!valid_task_id(id)) {
    throw std::out_of_range("task id must be in 1..35");
  }
  return terc_tasks()[static_cast<std::size_t>(id - 1)];
}

}  // namespace exprog

#include "exprog/world_io.hpp"

#include <fstream>
#include <sstream>

namespace exprog {
namespace {

Json header(const WorldState& w, const WorldConfig& config) {
  Json objects = Json::array();
  for (const auto& o : w.objects) {
    objects.push_back({{"id", o.id}, {"shape", shape_to_json(o.shape)}, {"color", to_string(o.color)}});
  }
  return {{"bounds", {0.0, 0.0, 1.0, 1.0}},
          {"dt", config.dt},
          {"v_max", config.v_max},
          {"objects", objects}};
}

Json dynamic_record(const WorldState& w) {
  Json agent = {{"x", w.agent.position.x}, {"y", w.agent.position.y}, {"grip", w.agent.grip ? 1 : 0},
                {"held", nullptr}};
  if (w.agent.held) {
    agent["held"] = w.agent.held->object;
    agent["grasp"] = {w.agent.held->offset.x, w.agent.held->offset.y};
  }
  Json objects = Json::array();
  for (const auto& o : w.objects) {
    objects.push_back({{"id", o.id}, {"x", o.pose.x}, {"y", o.pose.y}, {"theta", o.pose.theta}});
  }
  return {{"agent", agent}, {"objects", objects}};
}

std::vector<ObjectState> static_objects(const Json& j) {
  std::vector<ObjectState> out;
  for (const auto& o : j.at("objects")) {
    ObjectState s;
    s.id = o.at("id").get<ObjectId>();
    s.shape = shape_from_json(o.at("shape"));
    const auto color = parse_color(o.at("color").get<std::string>());
    if (!color) {
      throw TraceError("unknown color " + o.at("color").dump());
    }
    s.color = *color;
    if (s.id != out.size()) {
      throw TraceError("object ids must be 0..n-1 in order");
    }
    out.push_back(s);
  }
  return out;
}

WorldState apply_record(std::vector<ObjectState> objects, const Json& rec) {
  WorldState w;
  const auto& agent = rec.at("agent");
  w.agent.position = {agent.at("x").get<double>(), agent.at("y").get<double>()};
  w.agent.grip = agent.at("grip").get<int>() != 0;
  if (!agent.at("held").is_null()) {
    const auto& g = agent.at("grasp");
    w.agent.held = Held{agent.at("held").get<ObjectId>(), {g.at(0).get<double>(), g.at(1).get<double>()}};
    if (w.agent.held->object >= objects.size()) {
      throw TraceError("held object out of range");
    }
  }
  const auto& poses = rec.at("objects");
  if (poses.size() != objects.size()) {
    throw TraceError("object count mismatch");
  }
  for (const auto& p : poses) {
    const auto id = p.at("id").get<ObjectId>();
    if (id >= objects.size()) {
      throw TraceError("object id out of range");
    }
    objects[id].pose = {p.at("x").get<double>(), p.at("y").get<double>(), p.at("theta").get<double>()};
  }
  w.objects = std::move(objects);
  return w;
}

}  // namespace

Json shape_to_json(const Shape& s) {
  switch (s.kind) {
    case ShapeKind::Circle: return {{"kind", "circle"}, {"radius", s.a}};
    case ShapeKind::Box: return {{"kind", "box"}, {"width", s.a}, {"height", s.b}};
    case ShapeKind::Triangle: return {{"kind", "triangle"}, {"side", s.a}};
  }
  return {};
}

Shape shape_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  Shape s;
  if (kind == "circle") {
    s = Shape::circle(j.at("radius").get<double>());
  } else if (kind == "box") {
    s = Shape::box(j.at("width").get<double>(), j.at("height").get<double>());
  } else if (kind == "triangle") {
    s = Shape::triangle(j.at("side").get<double>());
  } else {
    throw TraceError("unknown shape kind " + kind);
  }
  if (!s.valid()) {
    throw TraceError("shape dimensions must be positive");
  }
  return s;
}

Json environment_to_json(const WorldState& w, const WorldConfig& config) {
  Json j = header(w, config);
  j["initial"] = dynamic_record(w);
  return j;
}

WorldState environment_from_json(const Json& j) {
  try {
    return apply_record(static_objects(j), j.at("initial"));
  } catch (const Json::exception& e) {
    throw TraceError(e.what());
  }
}

Json trajectory_to_json(const Trajectory& tau, const WorldConfig& config) {
  Json j = header(tau.initial(), config);
  Json frames = Json::array();
  for (std::size_t t = 0; t < tau.frames.size(); ++t) {
    const auto& f = tau.frames[t];
    Json rec = dynamic_record(f.state);
    rec["t"] = t;
    rec["action"] = {{"x", f.action.waypoint.x}, {"y", f.action.waypoint.y}, {"grip", f.action.grip ? 1 : 0}};
    frames.push_back(std::move(rec));
  }
  j["frames"] = std::move(frames);
  Json terminal = dynamic_record(tau.terminal);
  terminal["t"] = tau.frames.size();
  j["terminal"] = std::move(terminal);
  return j;
}

Trajectory trajectory_from_json(const Json& j) {
  std::vector<ObjectState> objects;
  try {
    objects = static_objects(j);
    if (!j.contains("frames") || !j.at("frames").is_array()) {
      throw TraceError("missing frames");
    }
  } catch (const Json::exception& e) {
    throw TraceError(e.what());
  }
  Trajectory tau;
  long t = 0;
  try {
    for (const auto& rec : j.at("frames")) {
      Frame f;
      f.state = apply_record(objects, rec);
      const auto& a = rec.at("action");
      f.action = {{a.at("x").get<double>(), a.at("y").get<double>()}, a.at("grip").get<int>() != 0};
      tau.frames.push_back(std::move(f));
      ++t;
    }
    tau.terminal = apply_record(objects, j.at("terminal"));
  } catch (const TraceError& e) {
    throw TraceError(e.what(), t);
  } catch (const Json::exception& e) {
    throw TraceError(e.what(), t);
  }
  return tau;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw TraceError("cannot open " + path.string());
  }
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw TraceError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace exprog

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "exprog/render.hpp"
#include "exprog/world_io.hpp"

namespace exprog {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Canvas {
  int size;
  double px(double x) const { return x * size; }
  double py(double y) const { return (1.0 - y) * size; }
  std::string point(Vec2 p) const { return num(px(p.x)) + "," + num(py(p.y)); }
};

void guides(std::ostringstream& os, const Canvas& c, const WorldConfig& config) {
  const std::string s = std::to_string(c.size);
  os << "<rect x=\"0\" y=\"0\" width=\"" << s << "\" height=\"" << s << "\" fill=\"#fafafa\" stroke=\"#333\"/>\n";
  os << "<g fill=\"none\" stroke=\"#bbb\" stroke-dasharray=\"4,4\">\n";
  os << "<line x1=\"" << num(c.px(0.5)) << "\" y1=\"0\" x2=\"" << num(c.px(0.5)) << "\" y2=\"" << s << "\"/>\n";
  os << "<line x1=\"0\" y1=\"" << num(c.py(0.5)) << "\" x2=\"" << s << "\" y2=\"" << num(c.py(0.5)) << "\"/>\n";
  os << "<circle cx=\"" << num(c.px(0.5)) << "\" cy=\"" << num(c.py(0.5)) << "\" r=\"" << num(config.r_middle * c.size)
     << "\"/>\n";
  for (const Vec2 v : {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}, Vec2{1, 1}}) {
    os << "<circle cx=\"" << num(c.px(v.x)) << "\" cy=\"" << num(c.py(v.y)) << "\" r=\""
       << num(config.r_corner * c.size) << "\"/>\n";
  }
  os << "</g>\n";
}

void object(std::ostringstream& os, const Canvas& c, const ObjectState& o, bool ghost) {
  const std::string style = ghost ? "fill=\"none\" stroke=\"" + color_hex(o.color) + "\" stroke-dasharray=\"3,2\""
                                  : "fill=\"" + color_hex(o.color) + "\" stroke=\"#222\"";
  if (o.shape.kind == ShapeKind::Circle) {
    os << "<circle cx=\"" << num(c.px(o.pose.x)) << "\" cy=\"" << num(c.py(o.pose.y)) << "\" r=\""
       << num(o.shape.a * c.size) << "\" " << style << "/>\n";
    return;
  }
  os << "<polygon points=\"";
  bool first = true;
  for (const auto& v : o.shape.outline()) {
    if (!first) os << ' ';
    first = false;
    os << c.point(o.pose.position() + rotate(v, o.pose.theta));
  }
  os << "\" " << style << "/>\n";
}

void agent(std::ostringstream& os, const Canvas& c, const WorldState& w, const WorldConfig& config) {
  const auto& a = w.agent;
  if (a.held) {
    const Vec2 o = a.position + a.held->offset;
    os << "<line x1=\"" << num(c.px(a.position.x)) << "\" y1=\"" << num(c.py(a.position.y)) << "\" x2=\""
       << num(c.px(o.x)) << "\" y2=\"" << num(c.py(o.y)) << "\" stroke=\"#000\" stroke-width=\"2\"/>\n";
  }
  os << "<circle cx=\"" << num(c.px(a.position.x)) << "\" cy=\"" << num(c.py(a.position.y)) << "\" r=\""
     << num(config.agent_radius * c.size) << "\" fill=\"" << (a.grip ? "#000" : "#fff")
     << "\" stroke=\"#000\" stroke-width=\"2\"/>\n";
}

std::string header(int size) {
  const std::string s = std::to_string(size);
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + s + "\" height=\"" + s + "\" viewBox=\"0 0 " + s +
         " " + s + "\">\n";
}

}  // namespace

std::array<std::uint8_t, 3> color_rgb(Color c) {
  switch (c) {
    case Color::Red: return {220, 50, 47};
    case Color::Green: return {60, 170, 70};
    case Color::Blue: return {40, 100, 210};
    case Color::Yellow: return {240, 200, 30};
    case Color::Orange: return {245, 130, 30};
    case Color::Purple: return {140, 70, 170};
    case Color::Pink: return {240, 120, 180};
  }
  return {128, 128, 128};
}

std::string color_hex(Color c) {
  const auto rgb = color_rgb(c);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string frame_svg(const WorldState& w, const World& world, std::size_t index, int size) {
  const Canvas c{size};
  std::ostringstream os;
  os << header(size);
  guides(os, c, world.config());
  for (const auto& o : w.objects) object(os, c, o, false);
  agent(os, c, w, world.config());
  os << "<text x=\"6\" y=\"16\" font-family=\"monospace\" font-size=\"12\">t=" << index << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string summary_svg(const Trajectory& tau, const World& world, int size) {
  if (tau.frames.empty()) throw RenderError("empty trace");
  const Canvas c{size};
  std::ostringstream os;
  os << header(size);
  guides(os, c, world.config());
  for (const auto& o : tau.initial().objects) object(os, c, o, true);
  for (const auto& o : tau.terminal.objects) object(os, c, o, false);
  os << "<polyline fill=\"none\" stroke=\"#444\" stroke-width=\"1.5\" points=\"";
  for (std::size_t t = 0; t < tau.state_count(); ++t) {
    if (t) os << ' ';
    os << c.point(tau.state(t).agent.position);
  }
  os << "\"/>\n";
  for (std::size_t t = 1; t < tau.state_count(); ++t) {
    if (tau.state(t).agent.grip != tau.state(t - 1).agent.grip) {
      const Vec2 p = tau.state(t).agent.position;
      os << "<circle cx=\"" << num(c.px(p.x)) << "\" cy=\"" << num(c.py(p.y)) << "\" r=\"4\" fill=\""
         << (tau.state(t).agent.grip ? "#000" : "#fff") << "\" stroke=\"#000\"/>\n";
    }
  }
  agent(os, c, tau.terminal, world.config());
  os << "</svg>\n";
  return os.str();
}

std::vector<std::size_t> frame_indices(std::size_t state_count, std::size_t stride) {
  std::vector<std::size_t> out;
  if (state_count == 0) return out;
  stride = std::max<std::size_t>(stride, 1);
  for (std::size_t t = 0; t < state_count; t += stride) out.push_back(t);
  if (out.back() != state_count - 1) out.push_back(state_count - 1);
  return out;
}

RenderedFiles render_trace(const Trajectory& tau, const World& world, std::size_t stride,
                           const std::filesystem::path& out, bool summary) {
  if (tau.frames.empty()) throw RenderError("empty trace");
  RenderedFiles files;
  for (const auto t : frame_indices(tau.state_count(), stride)) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.svg", t);
    files.frames.push_back(out / name);
    write_text_file(files.frames.back(), frame_svg(tau.state(t), world, t));
  }
  if (summary) {
    files.summary = out / "summary.svg";
    write_text_file(files.summary, summary_svg(tau, world));
  }
  return files;
}

}  // namespace exprog

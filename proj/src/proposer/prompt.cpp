#include <cstdio>
#include <sstream>

#include "exprog/proposer.hpp"
#include "exprog/render.hpp"

namespace exprog {
namespace {

constexpr const char* kSystem =
    "You are given recordings of a planar robot rearranging objects on a table. "
    "Work out the rule the robot was following and write it as a program in the language described below.";

constexpr const char* kLanguage = R"(Table: the unit square, x to the right and y up. An object is in a region when its centre is.
Regions: Left (x < 0.5), Right (x > 0.5), Top (y > 0.5), Bottom (y < 0.5),
Corner (within 0.15 of a table corner), Middle (within 0.15 of the centre).
Middle cannot be combined with other regions.

Language (s-expressions):
  task      := (achieve clause ...) | (seq task ...) | (if cond task task)
             | (each measure asc|desc selector (at region ...))
  clause    := (for selector (at region ...))      every selected object ends up in all listed regions
  selector  := (all) | (filter pred) | (largest measure selector) | (smallest measure selector)
             | (rank measure k selector) | (most-common shape|color) | (least-common shape|color)
             | (minus selector selector)
  pred      := (color red|green|blue|yellow|orange|purple|pink)
             | (shape circle|box|square|rectangle|triangle) | (and pred pred) | (or pred pred) | (not pred)
  measure   := area | perimeter | extent
  cond      := (exists selector) | (count selector n)
)";

constexpr const char* kExamples = R"(Examples:
  Put every blue object on the right:
    (achieve (for (filter (color blue)) (at Right)))
  Move the biggest box into the bottom left corner:
    (achieve (for (largest area (filter (shape box))) (at Left Bottom Corner)))
  First gather the circles in the middle, then send the triangles to the top:
    (seq (achieve (for (filter (shape circle)) (at Middle))) (achieve (for (filter (shape triangle)) (at Top))))
)";

std::string describe(const SymbolicState& s) {
  std::ostringstream os;
  for (ObjectId i = 0; i < s.object_count(); ++i) {
    const auto& a = s.attributes[i];
    std::string shape{to_string(a.kind)};
    if (a.kind == ShapeKind::Box) shape = a.square ? "square" : "rectangle";
    char area[32];
    std::snprintf(area, sizeof area, "%.4f", a.area);
    os << "    object " << i << ": " << to_string(a.color) << ' ' << shape << ", area " << area << ", in ["
       << mask_to_string(s.at[i]) << "]\n";
  }
  return os.str();
}

}  // namespace

std::vector<std::size_t> prompt_frames(std::size_t state_count, std::size_t stride) {
  return frame_indices(state_count, stride);
}

Prompt build_prompt(const ProposalContext& ctx, const ProposerConfig& config, const World& world) {
  Prompt p;
  p.system = kSystem;
  std::ostringstream os;
  os << kLanguage << '\n' << kExamples << '\n';
  for (std::size_t d = 0; d < ctx.initial_states.size(); ++d) {
    os << "Demonstration " << d + 1 << ".\n  Start:\n" << describe(ctx.initial_states[d]);
    if (d < ctx.demos.size() && !ctx.demos[d].states.empty()) {
      os << "  End:\n" << describe(ctx.demos[d].states.back());
    }
    if (d < ctx.trajectories.size()) {
      const auto& tau = ctx.trajectories[d];
      const auto frames = prompt_frames(tau.state_count(), config.frame_stride);
      os << "  " << frames.size() << " attached frames (t =";
      for (auto t : frames) {
        os << ' ' << t;
        p.images.push_back(base64_encode(encode_png(rasterize(tau.state(t), world, config.image_size))));
      }
      os << ").\n";
    }
    os << '\n';
  }
  if (!ctx.previous.empty()) {
    os << "Earlier guesses were checked against the demonstrations by replanning each one; the score says how "
          "well a sensible robot following that rule would have produced what was seen (higher is better):\n";
    for (const auto& [prog, w] : ctx.previous) {
      char score[32];
      std::snprintf(score, sizeof score, "%.4f", w);
      os << "  " << score << "  " << prog.to_sexpr() << '\n';
    }
    os << "Keep what scored well, fix what did not, and try new ideas.\n\n";
  }
  os << "Write " << ctx.requested
     << " different candidate programs, most likely first. Put each program alone in its own ``` fenced block.\n";
  p.text = os.str();
  return p;
}

Json chat_request(const Prompt& prompt, const std::string& model, std::size_t requested) {
  Json content = Json::array();
  content.push_back({{"type", "text"}, {"text", prompt.text}});
  for (const auto& img : prompt.images) {
    content.push_back({{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + img}}}});
  }
  return {{"model", model},
          {"messages", Json::array({{{"role", "system"}, {"content", prompt.system}},
                                    {{"role", "user"}, {"content", content}}})},
          {"temperature", 0.7},
          {"max_tokens", static_cast<int>(200 * requested + 400)}};
}

}  // namespace exprog

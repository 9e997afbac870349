#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "exprog/world.hpp"

namespace exprog {

using Json = nlohmann::json;

/// Malformed trace or environment file. `frame` is -1 for header problems.
class TraceError : public std::runtime_error {
 public:
  TraceError(const std::string& what, long frame = -1)
      : std::runtime_error(frame < 0 ? what : what + " (frame " + std::to_string(frame) + ")"),
        frame_(frame) {}
  long frame() const { return frame_; }

 private:
  long frame_;
};

Json shape_to_json(const Shape& s);
Shape shape_from_json(const Json& j);

Json environment_to_json(const WorldState& w, const WorldConfig& config = {});
WorldState environment_from_json(const Json& j);

Json trajectory_to_json(const Trajectory& tau, const WorldConfig& config = {});
Trajectory trajectory_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Writes to a sibling temp file first, then renames.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace exprog

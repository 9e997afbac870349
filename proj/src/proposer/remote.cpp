#include <cstdlib>
#include <sstream>

#include "exprog/proposer.hpp"

namespace exprog {

ExtractedPrograms extract_programs(const std::string& text) {
  ExtractedPrograms out;
  std::size_t pos = 0;
  int block = 0;
  while (true) {
    const auto open = text.find("```", pos);
    if (open == std::string::npos) break;
    const auto line_end = text.find('\n', open);
    if (line_end == std::string::npos) break;
    const auto close = text.find("```", line_end);
    if (close == std::string::npos) {
      out.diagnostics.push_back("block " + std::to_string(block) + ": unterminated fence");
      break;
    }
    const std::string body = text.substr(line_end + 1, close - line_end - 1);
    pos = close + 3;
    try {
      Program p = Program::parse(body);
      if (!regions_well_formed(p.root())) throw ParseError("unsatisfiable region set");
      out.programs.push_back(std::move(p));
    } catch (const ParseError& e) {
      out.diagnostics.push_back("block " + std::to_string(block) + ": " + e.what());
    }
    ++block;
  }
  return out;
}

std::string response_content(const std::string& body) {
  if (body.empty()) return {};
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::exception& e) {
    throw ParseFailure(std::string("response is not JSON: ") + e.what(), {});
  }
  const auto& choices = j.value("choices", Json::array());
  if (choices.empty() || !choices[0].contains("message")) return {};
  const auto& content = choices[0]["message"].value("content", Json());
  return content.is_string() ? content.get<std::string>() : std::string{};
}

RemoteProposer::RemoteProposer(ProposerConfig config, std::unique_ptr<Transport> transport, World world)
    : config_(std::move(config)), transport_(std::move(transport)), world_(std::move(world)) {}

std::vector<Program> RemoteProposer::propose(const ProposalContext& ctx) {
  std::string credential;
  if (!transport_ || transport_->needs_credential()) {
    const char* value = std::getenv(config_.credential_env.c_str());
    if (value == nullptr || *value == '\0') throw AuthMissing("environment variable " + config_.credential_env + " is not set");
    credential = value;
  }
  if (!transport_) transport_ = https_transport(config_);

  const std::string request = chat_request(build_prompt(ctx, config_, world_), config_.model, ctx.requested).dump();
  const int n = request_++;
  char name[32];
  if (config_.replay_dir) {
    std::snprintf(name, sizeof name, "request_%03d.json", n);
    write_text_file(*config_.replay_dir / name, request);
  }
  const std::string response = transport_->post(request, credential);
  if (config_.replay_dir) {
    std::snprintf(name, sizeof name, "response_%03d.json", n);
    write_text_file(*config_.replay_dir / name, response);
  }

  auto extracted = extract_programs(response_content(response));
  diagnostics_.insert(diagnostics_.end(), extracted.diagnostics.begin(), extracted.diagnostics.end());
  if (extracted.programs.empty()) {
    throw ParseFailure("no parseable program in response " + std::to_string(n), std::move(extracted.diagnostics));
  }
  return std::move(extracted.programs);
}

}  // namespace exprog

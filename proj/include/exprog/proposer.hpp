#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exprog/inverse.hpp"
#include "exprog/world_io.hpp"

namespace exprog {

struct ProposerConfig {
  enum class Mode { Enumerative, Remote };
  Mode mode = Mode::Enumerative;

  std::uint64_t seed = 0;
  int max_size = 10;

  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o";
  int timeout_seconds = 120;
  int retries = 2;
  std::string credential_env = "EXPROG_API_KEY";
  /// Request/response bodies are written here when set.
  std::optional<std::filesystem::path> replay_dir;
  std::size_t frame_stride = 10;
  int image_size = 256;
};

class GrammarExhausted : public ProposerFailure {
 public:
  using ProposerFailure::ProposerFailure;
};

class TransportError : public ProposerFailure {
 public:
  using ProposerFailure::ProposerFailure;
};

class AuthMissing : public ProposerFailure {
 public:
  using ProposerFailure::ProposerFailure;
};

class ParseFailure : public ProposerFailure {
 public:
  ParseFailure(const std::string& what, std::vector<std::string> diagnostics)
      : ProposerFailure(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// Grammar. Programs have the form (achieve (for SEL REGIONS)) with
//   SEL  := (all) | (filter P) | (largest|smallest M BASE) | (most-common|least-common A)
//   BASE := (all) | (filter P)
//   P    := atom | (not atom) | (and atom atom) | (or atom atom), operands in canonical order
// and REGIONS any satisfiable region set.

std::vector<Node> grammar_predicates();
std::vector<Node> grammar_selectors();
/// Every grammar program of exactly `size`, sorted.
std::vector<Program> grammar_level(int size);
/// Largest size any grammar program reaches.
int grammar_max_size();

/// True when every At mask in the program is a satisfiable region set.
bool regions_well_formed(const Node& n);

class EnumerativeProposer : public Proposer {
 public:
  EnumerativeProposer(ProposerConfig config, World world = World{});

  /// Nondecreasing size; each level shuffled by the seed. Keeps programs that
  /// ground on every demo initial state and whose goals every demo reaches.
  std::vector<Program> propose(const ProposalContext& ctx) override;

 private:
  ProposerConfig config_;
  World world_;
  std::vector<std::vector<Program>> levels_;
};

struct Prompt {
  std::string system;
  std::string text;
  /// Base64 PNG frames in order.
  std::vector<std::string> images;
};

/// Frame indices sent for one demo: first, every `stride`-th, last.
std::vector<std::size_t> prompt_frames(std::size_t state_count, std::size_t stride);
Prompt build_prompt(const ProposalContext& ctx, const ProposerConfig& config, const World& world);
Json chat_request(const Prompt& prompt, const std::string& model, std::size_t requested);

struct ExtractedPrograms {
  std::vector<Program> programs;
  std::vector<std::string> diagnostics;
};

/// Parses every fenced block of `text`; bad blocks become diagnostics.
ExtractedPrograms extract_programs(const std::string& text);
/// Message content of a chat completion body.
std::string response_content(const std::string& body);

class Transport {
 public:
  virtual ~Transport() = default;
  virtual bool needs_credential() const { return true; }
  /// Returns the raw response body. Throws TransportError.
  virtual std::string post(const std::string& body, const std::string& credential) = 0;
};

std::unique_ptr<Transport> https_transport(const ProposerConfig& config);
/// Serves response_NNN.json files from `dir` in order.
std::unique_ptr<Transport> replay_transport(const std::filesystem::path& dir);

class RemoteProposer : public Proposer {
 public:
  explicit RemoteProposer(ProposerConfig config, std::unique_ptr<Transport> transport = nullptr,
                          World world = World{});

  std::vector<Program> propose(const ProposalContext& ctx) override;
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  ProposerConfig config_;
  std::unique_ptr<Transport> transport_;
  World world_;
  std::vector<std::string> diagnostics_;
  int request_ = 0;
};

std::unique_ptr<Proposer> make_proposer(const ProposerConfig& config);

}  // namespace exprog

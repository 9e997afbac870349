#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fstream>
#include <sstream>

#include "exprog/proposer.hpp"

namespace exprog {
namespace {

class HttpsTransport : public Transport {
 public:
  explicit HttpsTransport(const ProposerConfig& config) : config_(config) {
    const auto scheme_end = config.endpoint.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = config.endpoint.find('/', host_start);
    origin_ = config.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config.endpoint.substr(path_start);
  }

  std::string post(const std::string& body, const std::string& credential) override {
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    client.set_write_timeout(config_.timeout_seconds);
    const httplib::Headers headers{{"Authorization", "Bearer " + credential}};
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
      auto res = client.Post(path_, headers, body, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status == 200) return res->body;
      last_error = "HTTP " + std::to_string(res->status);
      if (res->status < 500 && res->status != 429) break;
    }
    throw TransportError(origin_ + path_ + ": " + last_error);
  }

 private:
  ProposerConfig config_;
  std::string origin_;
  std::string path_;
};

class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}

  bool needs_credential() const override { return false; }

  std::string post(const std::string&, const std::string&) override {
    char name[32];
    std::snprintf(name, sizeof name, "response_%03d.json", next_++);
    std::ifstream in(dir_ / name, std::ios::binary);
    if (!in) throw TransportError("replay file missing: " + (dir_ / name).string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

 private:
  std::filesystem::path dir_;
  int next_ = 0;
};

}  // namespace

std::unique_ptr<Transport> https_transport(const ProposerConfig& config) {
  return std::make_unique<HttpsTransport>(config);
}

std::unique_ptr<Transport> replay_transport(const std::filesystem::path& dir) {
  return std::make_unique<ReplayTransport>(dir);
}

}  // namespace exprog

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairnets/errors.hpp"
#include "fairnets/ingest.hpp"

namespace fairnets::github {

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;   // keys lowercased
    std::string body;
};

/// Minimal GET transport so fetching can run against the live API, recorded
/// fixtures, or a scripted double.
class HttpTransport {
  public:
    virtual ~HttpTransport() = default;

    /// nullopt = no response at all (connection-level failure).
    virtual std::optional<HttpResponse> get(
        const std::string& path,
        const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

/// TLS client against the hosting API.
class LiveTransport : public HttpTransport {
  public:
    explicit LiveTransport(std::string host = "api.github.com");
    std::optional<HttpResponse> get(
        const std::string& path,
        const std::vector<std::pair<std::string, std::string>>& headers) override;

  private:
    std::string host_;
};

/// Replays recorded responses from a fixture directory. Each request path
/// maps to `<dir>/<path with '/' → '__'>.json` holding
/// {"status": int, "headers": {..}, "body": string}. A missing fixture is a
/// transport failure.
class ReplayTransport : public HttpTransport {
  public:
    explicit ReplayTransport(std::filesystem::path fixture_dir);
    std::optional<HttpResponse> get(
        const std::string& path,
        const std::vector<std::pair<std::string, std::string>>& headers) override;

    static std::string fixture_name(const std::string& path);

  private:
    std::filesystem::path dir_;
};

struct FetchOptions {
    std::optional<std::string> token;   // absent → FAIRNETS_GITHUB_TOKEN env var
    bool allow_wait = true;             // sleep through rate-limit resets
    int max_retries = 3;                // transient-failure retries
    std::function<void(std::chrono::seconds)> sleep;   // injectable; real sleep when empty
    std::function<std::int64_t()> now_unix;            // injectable clock
};

/// Fetches metadata, README (decoded from base64), and topics for one
/// repository. 404 on the repository itself → RepoNotFound; rate-limit
/// exhaustion with waiting disallowed → RateLimited; anything else that still
/// fails after retries → TransportError. A missing README or topic list is
/// not an error.
ingest::RawRepoDocument fetch_repository(HttpTransport& transport, const std::string& full_name,
                                         const FetchOptions& options = {});

}  // namespace fairnets::github

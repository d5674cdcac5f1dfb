#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "fairnets/errors.hpp"
#include "fairnets/github.hpp"

using namespace fairnets;
using namespace fairnets::github;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

/// Plays back a fixed response script, one entry per request.
class ScriptedTransport : public HttpTransport {
  public:
    explicit ScriptedTransport(std::vector<std::optional<HttpResponse>> script)
        : script_(std::move(script)) {}

    std::optional<HttpResponse> get(
        const std::string& path,
        const std::vector<std::pair<std::string, std::string>>& headers) override {
        paths.push_back(path);
        last_headers = headers;
        if (calls >= script_.size()) return std::nullopt;
        return script_[calls++];
    }

    std::vector<std::string> paths;
    std::vector<std::pair<std::string, std::string>> last_headers;
    std::size_t calls = 0;

  private:
    std::vector<std::optional<HttpResponse>> script_;
};

HttpResponse ok_json(const json& body, std::map<std::string, std::string> headers = {}) {
    return HttpResponse{200, std::move(headers), body.dump()};
}

HttpResponse status_only(int status, std::map<std::string, std::string> headers = {}) {
    return HttpResponse{status, std::move(headers), "{}"};
}

json repo_metadata() {
    return {{"full_name", "ada/net"},
            {"created_at", "2018-01-01T00:00:00Z"},
            {"updated_at", "2018-06-01T00:00:00Z"},
            {"watchers_count", 3},
            {"license", {{"spdx_id", "MIT"}}}};
}

FetchOptions quiet_options() {
    FetchOptions options;
    options.sleep = [](std::chrono::seconds) {};
    options.now_unix = [] { return 1000; };
    return options;
}

}  // namespace

TEST_CASE("successful fetch assembles metadata, readme, and topics") {
    // "IyBIZWxsbwo=" decodes to "# Hello\n"; GitHub wraps base64 with newlines.
    ScriptedTransport transport({
        ok_json(repo_metadata()),
        ok_json({{"content", "IyBIZWxs\nbwo=\n"}, {"encoding", "base64"}}),
        ok_json({{"names", {"keras", "cnn"}}}),
    });
    FetchOptions options = quiet_options();
    options.token = "tok123";
    ingest::RawRepoDocument raw = fetch_repository(transport, "ada/net", options);

    CHECK(raw.metadata["full_name"] == "ada/net");
    CHECK(raw.readme == "# Hello\n");
    CHECK(raw.topics == std::vector<std::string>{"keras", "cnn"});
    CHECK(raw.license_id == "MIT");

    REQUIRE(transport.paths.size() == 3);
    CHECK(transport.paths[0] == "/repos/ada/net");
    CHECK(transport.paths[1] == "/repos/ada/net/readme");
    CHECK(transport.paths[2] == "/repos/ada/net/topics");

    bool saw_auth = false;
    for (const auto& [name, value] : transport.last_headers) {
        if (name == "Authorization") {
            saw_auth = true;
            CHECK(value == "Bearer tok123");
        }
    }
    CHECK(saw_auth);
}

TEST_CASE("missing readme and topics are not errors") {
    ScriptedTransport transport({
        ok_json(repo_metadata()),
        status_only(404),
        status_only(404),
    });
    ingest::RawRepoDocument raw = fetch_repository(transport, "ada/net", quiet_options());
    CHECK(raw.readme.empty());
    CHECK(raw.topics.empty());
}

TEST_CASE("404 on the repository raises RepoNotFound") {
    ScriptedTransport transport({status_only(404)});
    CHECK_THROWS_AS(fetch_repository(transport, "ada/gone", quiet_options()), RepoNotFound);
}

TEST_CASE("server errors retry with backoff then fail") {
    ScriptedTransport transport({
        status_only(500),
        std::nullopt,  // connection failure counts as transient too
        status_only(503),
        status_only(502),
    });
    std::vector<std::int64_t> sleeps;
    FetchOptions options = quiet_options();
    options.sleep = [&](std::chrono::seconds s) { sleeps.push_back(s.count()); };
    CHECK_THROWS_AS(fetch_repository(transport, "ada/net", options), TransportError);
    CHECK(sleeps == std::vector<std::int64_t>{1, 2, 4});
}

TEST_CASE("transient failure recovers") {
    ScriptedTransport transport({
        status_only(500),
        ok_json(repo_metadata()),
        status_only(404),
        status_only(404),
    });
    ingest::RawRepoDocument raw = fetch_repository(transport, "ada/net", quiet_options());
    CHECK(raw.metadata["watchers_count"] == 3);
}

TEST_CASE("rate limit with waiting disabled raises RateLimited") {
    ScriptedTransport transport({
        status_only(403, {{"x-ratelimit-remaining", "0"}, {"x-ratelimit-reset", "1200"}}),
    });
    FetchOptions options = quiet_options();
    options.allow_wait = false;
    CHECK_THROWS_AS(fetch_repository(transport, "ada/net", options), RateLimited);
}

TEST_CASE("rate limit waits until the reset time then retries") {
    ScriptedTransport transport({
        status_only(403, {{"x-ratelimit-remaining", "0"}, {"x-ratelimit-reset", "1200"}}),
        ok_json(repo_metadata()),
        status_only(404),
        status_only(404),
    });
    std::vector<std::int64_t> sleeps;
    FetchOptions options = quiet_options();  // now_unix = 1000
    options.sleep = [&](std::chrono::seconds s) { sleeps.push_back(s.count()); };
    ingest::RawRepoDocument raw = fetch_repository(transport, "ada/net", options);
    CHECK(raw.metadata["full_name"] == "ada/net");
    CHECK(sleeps == std::vector<std::int64_t>{201});  // reset - now + 1
}

TEST_CASE("a plain 403 is not treated as a rate limit") {
    ScriptedTransport transport({status_only(403)});
    CHECK_THROWS_AS(fetch_repository(transport, "ada/net", quiet_options()), TransportError);
}

TEST_CASE("replay transport maps request paths to fixture files") {
    CHECK(ReplayTransport::fixture_name("/repos/ada/net") == "repos__ada__net.json");
    CHECK(ReplayTransport::fixture_name("/repos/ada/net/topics?page=2") ==
          "repos__ada__net__topics_page_2.json");

    fs::path dir = fs::temp_directory_path() / "fairnets-replay-test";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "repos__ada__net.json");
        out << R"({"status": 200, "headers": {"X-Test": "yes"}, "body": "{\"id\": 1}"})";
    }
    ReplayTransport transport(dir);
    auto hit = transport.get("/repos/ada/net", {});
    REQUIRE(hit.has_value());
    CHECK(hit->status == 200);
    CHECK(hit->headers.at("x-test") == "yes");
    CHECK(hit->body == "{\"id\": 1}");
    CHECK_FALSE(transport.get("/repos/ada/missing", {}).has_value());
    fs::remove_all(dir);
}

#include "fairnets/github.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace fairnets::github {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::optional<std::string> decode_base64(std::string_view encoded) {
    static constexpr signed char kInvalid = -1;
    auto value_of = [](char c) -> signed char {
        if (c >= 'A' && c <= 'Z') return static_cast<signed char>(c - 'A');
        if (c >= 'a' && c <= 'z') return static_cast<signed char>(c - 'a' + 26);
        if (c >= '0' && c <= '9') return static_cast<signed char>(c - '0' + 52);
        if (c == '+') return 62;
        if (c == '/') return 63;
        return kInvalid;
    };
    std::string out;
    out.reserve(encoded.size() / 4 * 3);
    int acc = 0, bits = 0;
    for (char c : encoded) {
        if (c == '\n' || c == '\r' || c == ' ' || c == '\t') continue;
        if (c == '=') break;
        signed char v = value_of(c);
        if (v == kInvalid) return std::nullopt;
        acc = (acc << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

std::optional<std::int64_t> header_int(const HttpResponse& response, const std::string& name) {
    auto it = response.headers.find(name);
    if (it == response.headers.end()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (errno == ERANGE || end == it->second.c_str()) return std::nullopt;
    return v;
}

struct Requester {
    HttpTransport& transport;
    const FetchOptions& options;
    std::vector<std::pair<std::string, std::string>> headers;

    void sleep_for(std::chrono::seconds amount) {
        if (amount.count() <= 0) return;
        if (options.sleep) {
            options.sleep(amount);
        } else {
            std::this_thread::sleep_for(amount);
        }
    }

    std::int64_t now_unix() {
        if (options.now_unix) return options.now_unix();
        return std::chrono::duration_cast<std::chrono::seconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }

    // One endpoint with rate-limit handling and transient-failure retries.
    HttpResponse get(const std::string& path) {
        int transient_failures = 0;
        for (;;) {
            std::optional<HttpResponse> response = transport.get(path, headers);
            if (!response || response->status >= 500) {
                if (++transient_failures > options.max_retries) {
                    throw TransportError("request failed after " +
                                         std::to_string(options.max_retries) + " retries: " +
                                         path);
                }
                sleep_for(std::chrono::seconds(1LL << (transient_failures - 1)));
                continue;
            }
            bool limited = response->status == 403 &&
                           header_int(*response, "x-ratelimit-remaining").value_or(-1) == 0;
            if (limited) {
                if (!options.allow_wait) {
                    throw RateLimited("rate limit exhausted: " + path);
                }
                std::int64_t reset = header_int(*response, "x-ratelimit-reset").value_or(0);
                std::int64_t wait = reset - now_unix() + 1;
                sleep_for(std::chrono::seconds(std::max<std::int64_t>(wait, 1)));
                continue;
            }
            return *response;
        }
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// LiveTransport

LiveTransport::LiveTransport(std::string host) : host_(std::move(host)) {}

std::optional<HttpResponse> LiveTransport::get(
    const std::string& path, const std::vector<std::pair<std::string, std::string>>& headers) {
    httplib::SSLClient client(host_);
    client.set_follow_location(true);
    client.set_connection_timeout(15);
    client.set_read_timeout(30);
    httplib::Headers request_headers;
    for (const auto& [name, value] : headers) request_headers.emplace(name, value);
    httplib::Result result = client.Get(path, request_headers);
    if (!result) return std::nullopt;
    HttpResponse response;
    response.status = result->status;
    response.body = result->body;
    for (const auto& [name, value] : result->headers) response.headers[lower(name)] = value;
    return response;
}

// ---------------------------------------------------------------------------
// ReplayTransport

ReplayTransport::ReplayTransport(std::filesystem::path fixture_dir) : dir_(std::move(fixture_dir)) {}

std::string ReplayTransport::fixture_name(const std::string& path) {
    std::string name;
    for (char c : path) {
        if (c == '/') {
            if (!name.empty()) name += "__";
        } else if (c == '?' || c == '&' || c == '=') {
            name += '_';
        } else {
            name += c;
        }
    }
    return name + ".json";
}

std::optional<HttpResponse> ReplayTransport::get(
    const std::string& path, const std::vector<std::pair<std::string, std::string>>&) {
    std::ifstream in(dir_ / fixture_name(path));
    if (!in) return std::nullopt;
    json doc;
    try {
        in >> doc;
    } catch (const json::exception&) {
        return std::nullopt;
    }
    if (!doc.is_object() || !doc.contains("status")) return std::nullopt;
    HttpResponse response;
    response.status = doc["status"].get<int>();
    if (doc.contains("headers") && doc["headers"].is_object()) {
        for (const auto& [name, value] : doc["headers"].items()) {
            if (value.is_string()) response.headers[lower(name)] = value.get<std::string>();
        }
    }
    if (doc.contains("body") && doc["body"].is_string()) {
        response.body = doc["body"].get<std::string>();
    }
    return response;
}

// ---------------------------------------------------------------------------

ingest::RawRepoDocument fetch_repository(HttpTransport& transport, const std::string& full_name,
                                         const FetchOptions& options) {
    Requester requester{transport, options, {}};
    requester.headers.emplace_back("User-Agent", "fairnets-toolchain");
    requester.headers.emplace_back("Accept", "application/vnd.github+json");
    std::optional<std::string> token = options.token;
    if (!token) {
        if (const char* env = std::getenv("FAIRNETS_GITHUB_TOKEN"); env && *env) {
            token = std::string(env);
        }
    }
    if (token) requester.headers.emplace_back("Authorization", "Bearer " + *token);

    const std::string base = "/repos/" + full_name;

    HttpResponse metadata_response = requester.get(base);
    if (metadata_response.status == 404) {
        throw RepoNotFound("repository not found: " + full_name);
    }
    if (metadata_response.status != 200) {
        throw TransportError("unexpected status " + std::to_string(metadata_response.status) +
                             " for " + base);
    }
    ingest::RawRepoDocument raw;
    try {
        raw.metadata = json::parse(metadata_response.body);
    } catch (const json::exception& e) {
        throw TransportError("malformed metadata document for " + full_name + ": " + e.what());
    }

    HttpResponse readme_response = requester.get(base + "/readme");
    if (readme_response.status == 200) {
        try {
            json doc = json::parse(readme_response.body);
            if (doc.contains("content") && doc["content"].is_string()) {
                if (auto text = decode_base64(doc["content"].get<std::string>())) {
                    raw.readme = *text;
                }
            }
        } catch (const json::exception&) {
            // README that cannot be decoded is treated as absent
        }
    }

    HttpResponse topics_response = requester.get(base + "/topics");
    if (topics_response.status == 200) {
        try {
            json doc = json::parse(topics_response.body);
            if (doc.contains("names") && doc["names"].is_array()) {
                for (const json& name : doc["names"]) {
                    if (name.is_string()) raw.topics.push_back(name.get<std::string>());
                }
            }
        } catch (const json::exception&) {
        }
    }

    if (raw.metadata.contains("license") && raw.metadata["license"].is_object() &&
        raw.metadata["license"].contains("spdx_id") &&
        raw.metadata["license"]["spdx_id"].is_string()) {
        raw.license_id = raw.metadata["license"]["spdx_id"].get<std::string>();
    }
    return raw;
}

}  // namespace fairnets::github

#include "fairnets/config.hpp"

#include <fstream>
#include <sstream>

#include "fairnets/errors.hpp"
#include "fairnets/iri.hpp"

namespace fairnets::config {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// A '#' opens a trailing comment only when preceded by whitespace, so IRI
// values ending in '#' survive unquoted.
std::string_view strip_comment(std::string_view line) {
    for (std::size_t i = 1; i < line.size(); ++i) {
        if (line[i] == '#' && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::string unquote(std::string_view value, int line) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        return std::string(value.substr(1, value.size() - 2));
    }
    if (!value.empty() && (value.front() == '"' || value.back() == '"')) {
        throw ConfigError("config line " + std::to_string(line) + ": unbalanced quotes");
    }
    return std::string(value);
}

}  // namespace

Config parse_config(std::string_view text) {
    Config config;
    bool namespace_set = false;
    int line_number = 0;
    std::size_t at = 0;
    while (at <= text.size()) {
        std::size_t end = text.find('\n', at);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(strip_comment(text.substr(at, end - at)));
        at = end + 1;
        ++line_number;
        if (line.empty() || line.front() == '#') continue;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_number) + ": expected key = value");
        }
        std::string_view key = trim(line.substr(0, eq));
        std::string value = unquote(trim(line.substr(eq + 1)), line_number);
        if (key == "data_namespace") {
            if (namespace_set) {
                throw ConfigError("config line " + std::to_string(line_number) +
                                  ": data_namespace set twice");
            }
            if (!looks_like_http_iri(value) || (value.back() != '#' && value.back() != '/')) {
                throw ConfigError("config line " + std::to_string(line_number) +
                                  ": data_namespace must be an http(s) IRI ending in '#' or '/'");
            }
            config.data_namespace = value;
            namespace_set = true;
        } else if (key == "badge_host") {
            if (value.empty()) {
                throw ConfigError("config line " + std::to_string(line_number) +
                                  ": badge_host value is empty");
            }
            config.extra_badge_hosts.push_back(value);
        } else {
            throw ConfigError("config line " + std::to_string(line_number) + ": unknown key '" +
                              std::string(key) + "'");
        }
    }
    return config;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return Config{};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace fairnets::config

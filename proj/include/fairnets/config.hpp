#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fairnets/rdf.hpp"

namespace fairnets::config {

struct Config {
    std::string data_namespace{rdf::ns::nno_data};
    std::vector<std::string> extra_badge_hosts;
};

/// Key/value text, one `key = value` per line, values optionally
/// double-quoted, `#` comments. Keys: `data_namespace` (once),
/// `badge_host` (repeatable). Throws ConfigError on malformed lines,
/// unknown keys, or an invalid namespace.
Config parse_config(std::string_view text);

/// Convenience file loader; a missing file yields the defaults.
Config load_config(const std::filesystem::path& path);

}  // namespace fairnets::config

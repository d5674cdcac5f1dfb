#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fairnets/config.hpp"
#include "fairnets/errors.hpp"

using namespace fairnets;
using namespace fairnets::config;

TEST_CASE("defaults") {
    Config c = parse_config("");
    CHECK(c.data_namespace == "https://w3id.org/nno/data#");
    CHECK(c.extra_badge_hosts.empty());
}

TEST_CASE("keys, quotes, and comments") {
    Config c = parse_config(
        "# corpus configuration\n"
        "data_namespace = \"https://graph.example.org/nets#\"\n"
        "\n"
        "badge_host = badges.internal.example\n"
        "badge_host = \"ci.example.net\"   # trailing comment\n");
    CHECK(c.data_namespace == "https://graph.example.org/nets#");
    CHECK(c.extra_badge_hosts ==
          std::vector<std::string>{"badges.internal.example", "ci.example.net"});
}

TEST_CASE("namespace must be an http(s) IRI ending in a separator") {
    CHECK(parse_config("data_namespace = https://x.example/ns/\n").data_namespace ==
          "https://x.example/ns/");
    CHECK_THROWS_AS(parse_config("data_namespace = ftp://x.example/ns#\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("data_namespace = https://x.example/ns\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("data_namespace = https://a.example/#\n"
                                 "data_namespace = https://b.example/#\n"),
                    ConfigError);
}

TEST_CASE("malformed lines and unknown keys") {
    CHECK_THROWS_WITH_AS(parse_config("colour = blue\n"),
                         doctest::Contains("unknown key 'colour'"), ConfigError);
    CHECK_THROWS_AS(parse_config("data_namespace\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("badge_host = \n"), ConfigError);
}

TEST_CASE("load_config falls back to defaults for a missing file") {
    Config c = load_config("/nonexistent/fairnets.toml");
    CHECK(c.data_namespace == "https://w3id.org/nno/data#");

    std::filesystem::path path =
        std::filesystem::temp_directory_path() / "fairnets-config-test.toml";
    {
        std::ofstream out(path);
        out << "badge_host = one.example\n";
    }
    CHECK(load_config(path).extra_badge_hosts == std::vector<std::string>{"one.example"});
    std::filesystem::remove(path);
}

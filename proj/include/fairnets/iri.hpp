#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace fairnets {

/// An absolute http(s) IRI. Parsed/checked instances always satisfy
/// looks_like_http_iri; a default-constructed Iri is empty and must be
/// assigned before use. Comparison is exact byte equality.
class Iri {
public:
    Iri() = default;

    /// Validates and wraps `text`; nullopt if it is not an absolute http(s) IRI.
    static std::optional<Iri> parse(std::string_view text);

    /// As parse(), but throws std::invalid_argument on bad input.
    static Iri checked(std::string_view text);

    const std::string& value() const { return value_; }
    std::string_view view() const { return value_; }

    bool starts_with(std::string_view prefix) const {
        return std::string_view(value_).substr(0, prefix.size()) == prefix;
    }

    auto operator<=>(const Iri&) const = default;

private:
    explicit Iri(std::string v) : value_(std::move(v)) {}
    std::string value_;
};

/// True when `text` is an absolute IRI with scheme http or https, a nonempty
/// authority, and no whitespace or characters the IRI grammar forbids raw.
bool looks_like_http_iri(std::string_view text);

/// Percent-encodes everything outside unreserved characters and '/'.
/// Multi-byte UTF-8 sequences are encoded byte by byte.
std::string percent_encode_iri_part(std::string_view raw);

}  // namespace fairnets

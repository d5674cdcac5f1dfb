#include "fairnets/iri.hpp"

#include <cctype>
#include <stdexcept>

namespace fairnets {

namespace {

bool is_forbidden_raw(unsigned char c) {
    // Whitespace, controls, and the characters RFC 3987 keeps out of IRIs
    // unless percent-encoded.
    if (c <= 0x20 || c == 0x7f) return true;
    switch (c) {
        case '<':
        case '>':
        case '"':
        case '{':
        case '}':
        case '|':
        case '\\':
        case '^':
        case '`':
            return true;
        default:
            return false;
    }
}

bool is_unreserved(unsigned char c) {
    return std::isalnum(c) != 0 || c == '-' || c == '.' || c == '_' || c == '~';
}

}  // namespace

bool looks_like_http_iri(std::string_view text) {
    std::string_view rest;
    if (text.substr(0, 8) == "https://") {
        rest = text.substr(8);
    } else if (text.substr(0, 7) == "http://") {
        rest = text.substr(7);
    } else {
        return false;
    }
    if (rest.empty() || rest.front() == '/') return false;
    for (unsigned char c : text) {
        if (c < 0x80 && is_forbidden_raw(c)) return false;
    }
    return true;
}

std::optional<Iri> Iri::parse(std::string_view text) {
    if (!looks_like_http_iri(text)) return std::nullopt;
    return Iri(std::string(text));
}

Iri Iri::checked(std::string_view text) {
    auto iri = parse(text);
    if (!iri) {
        throw std::invalid_argument("not an absolute http(s) IRI: '" + std::string(text) + "'");
    }
    return *iri;
}

std::string percent_encode_iri_part(std::string_view raw) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(raw.size());
    for (unsigned char c : raw) {
        if (is_unreserved(c) || c == '/') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        }
    }
    return out;
}

}  // namespace fairnets

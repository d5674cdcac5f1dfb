#include "fairnets/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <vector>

namespace fairnets::rdf {

namespace {

// ---------------------------------------------------------------------------
// Serialization

bool is_pn_local_safe(std::string_view local) {
    if (local.empty()) return false;
    unsigned char first = static_cast<unsigned char>(local.front());
    if (!(std::isalpha(first) || first == '_')) return false;
    for (unsigned char c : local) {
        if (!(std::isalnum(c) || c == '_' || c == '-')) return false;
    }
    return true;
}

// Renders an IRI as prefix:local when a declared namespace covers it and the
// local part is safe, otherwise as <iri>.
std::string render_iri(const Iri& iri, const std::map<std::string, std::string>& prefixes) {
    for (const auto& [prefix, name_space] : prefixes) {
        if (iri.starts_with(name_space)) {
            std::string_view local = iri.view().substr(name_space.size());
            if (is_pn_local_safe(local)) {
                return prefix + ":" + std::string(local);
            }
        }
    }
    return "<" + iri.value() + ">";
}

void append_escaped(std::string& out, std::string_view text) {
    static const char* hex = "0123456789ABCDEF";
    for (unsigned char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    out += "\\u00";
                    out += hex[c >> 4];
                    out += hex[c & 0xf];
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
}

std::string render_object(const Object& object, const std::map<std::string, std::string>& prefixes) {
    if (const Iri* iri = object_iri(object)) return render_iri(*iri, prefixes);
    const Literal& lit = *object_literal(object);
    std::string out = "\"";
    append_escaped(out, lit.lexical);
    out += '"';
    if (lit.datatype) {
        out += "^^";
        out += render_iri(*lit.datatype, prefixes);
    } else if (!lit.language.empty()) {
        out += '@';
        out += lit.language;
    }
    return out;
}

const Iri& type_predicate() {
    static const Iri iri = rdf_type();
    return iri;
}

// ---------------------------------------------------------------------------
// Parsing

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool at_end() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw TurtleParseError(line, col, what);
    }

    void skip_ws_and_comments() {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    bool consume(char expected) {
        if (!at_end() && peek() == expected) {
            advance();
            return true;
        }
        return false;
    }

    void expect(char expected, const char* what) {
        if (!consume(expected)) fail(std::string("expected ") + what);
    }
};

bool is_pname_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '.' || u >= 0x80;
}

void append_utf8(std::string& out, std::uint32_t cp, Cursor& cur) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cur.fail("invalid unicode escape");
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::uint32_t parse_hex_escape(Cursor& cur, int digits) {
    std::uint32_t value = 0;
    for (int i = 0; i < digits; ++i) {
        if (cur.at_end()) cur.fail("truncated unicode escape");
        char c = cur.advance();
        value <<= 4;
        if (c >= '0' && c <= '9') value |= static_cast<std::uint32_t>(c - '0');
        else if (c >= 'a' && c <= 'f') value |= static_cast<std::uint32_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') value |= static_cast<std::uint32_t>(c - 'A' + 10);
        else cur.fail("bad hex digit in unicode escape");
    }
    return value;
}

Iri parse_iriref(Cursor& cur) {
    int line = cur.line, col = cur.col;
    cur.expect('<', "'<'");
    std::string raw;
    while (true) {
        if (cur.at_end()) cur.fail("unterminated IRI");
        char c = cur.advance();
        if (c == '>') break;
        if (c == '\\') {
            if (cur.at_end()) cur.fail("truncated escape in IRI");
            char e = cur.advance();
            if (e == 'u') append_utf8(raw, parse_hex_escape(cur, 4), cur);
            else if (e == 'U') append_utf8(raw, parse_hex_escape(cur, 8), cur);
            else cur.fail("unsupported escape in IRI");
        } else {
            raw.push_back(c);
        }
    }
    auto iri = Iri::parse(raw);
    if (!iri) throw TurtleParseError(line, col, "not an absolute http(s) IRI: '" + raw + "'");
    return *iri;
}

std::string parse_pname_prefix(Cursor& cur) {
    std::string prefix;
    while (!cur.at_end() && cur.peek() != ':') {
        char c = cur.peek();
        if (!is_pname_char(c)) break;
        prefix.push_back(cur.advance());
    }
    cur.expect(':', "':' after prefix label");
    return prefix;
}

Iri parse_prefixed_name(Cursor& cur, const std::map<std::string, std::string>& prefixes) {
    int line = cur.line, col = cur.col;
    std::string prefix = parse_pname_prefix(cur);
    std::string local;
    while (!cur.at_end() && is_pname_char(cur.peek())) local.push_back(cur.advance());
    // A trailing '.' belongs to the statement terminator, not the name.
    while (!local.empty() && local.back() == '.') {
        local.pop_back();
        cur.pos -= 1;
        cur.col -= 1;
    }
    auto it = prefixes.find(prefix);
    if (it == prefixes.end()) {
        throw TurtleParseError(line, col, "undeclared prefix '" + prefix + ":'");
    }
    auto iri = Iri::parse(it->second + local);
    if (!iri) throw TurtleParseError(line, col, "prefixed name expands to an invalid IRI");
    return *iri;
}

std::string parse_quoted_string(Cursor& cur) {
    char quote = cur.advance();  // ' or "
    std::string out;
    while (true) {
        if (cur.at_end()) cur.fail("unterminated string literal");
        char c = cur.advance();
        if (c == quote) break;
        if (c == '\n') cur.fail("newline in short string literal");
        if (c == '\\') {
            if (cur.at_end()) cur.fail("truncated escape");
            char e = cur.advance();
            switch (e) {
                case 't': out.push_back('\t'); break;
                case 'b': out.push_back('\b'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 'f': out.push_back('\f'); break;
                case '"': out.push_back('"'); break;
                case '\'': out.push_back('\''); break;
                case '\\': out.push_back('\\'); break;
                case 'u': append_utf8(out, parse_hex_escape(cur, 4), cur); break;
                case 'U': append_utf8(out, parse_hex_escape(cur, 8), cur); break;
                default: cur.fail("unsupported string escape");
            }
        } else {
            out.push_back(c);
        }
    }
    return out;
}

bool lexical_is_integer(const std::string& text) {
    if (text.empty()) return false;
    std::size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    if (start == text.size()) return false;
    return std::all_of(text.begin() + static_cast<std::ptrdiff_t>(start), text.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

bool lexical_is_date_time(const std::string& text) {
    // YYYY-MM-DDThh:mm:ss with optional fraction and zone.
    if (text.size() < 19) return false;
    auto digit = [&](std::size_t i) { return std::isdigit(static_cast<unsigned char>(text[i])) != 0; };
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u}) {
        if (!digit(i)) return false;
    }
    return text[4] == '-' && text[7] == '-' && text[10] == 'T' && text[13] == ':' &&
           text[16] == ':';
}

Literal finish_literal(Cursor& cur, std::string lexical,
                       const std::map<std::string, std::string>& prefixes) {
    int line = cur.line, col = cur.col;
    if (cur.consume('^')) {
        cur.expect('^', "'^^' before datatype");
        Iri datatype = (!cur.at_end() && cur.peek() == '<') ? parse_iriref(cur)
                                                            : parse_prefixed_name(cur, prefixes);
        Literal lit = Literal::typed(std::move(lexical), datatype);
        if (lit.is_integer_typed() && !lexical_is_integer(lit.lexical)) {
            throw TurtleParseError(line, col, "xsd:integer literal '" + lit.lexical +
                                                  "' is not an integer");
        }
        if (datatype.view() == std::string(ns::xsd) + "dateTime" &&
            !lexical_is_date_time(lit.lexical)) {
            throw TurtleParseError(line, col, "xsd:dateTime literal '" + lit.lexical +
                                                  "' is not ISO-8601");
        }
        return lit;
    }
    if (cur.consume('@')) {
        std::string tag;
        while (!cur.at_end() &&
               (std::isalnum(static_cast<unsigned char>(cur.peek())) || cur.peek() == '-')) {
            tag.push_back(cur.advance());
        }
        if (tag.empty()) cur.fail("empty language tag");
        return Literal::lang(std::move(lexical), std::move(tag));
    }
    return Literal::plain(std::move(lexical));
}

Iri parse_iri_term(Cursor& cur, const std::map<std::string, std::string>& prefixes) {
    if (!cur.at_end() && cur.peek() == '<') return parse_iriref(cur);
    return parse_prefixed_name(cur, prefixes);
}

Object parse_object(Cursor& cur, const std::map<std::string, std::string>& prefixes) {
    if (cur.at_end()) cur.fail("expected object");
    char c = cur.peek();
    if (c == '"' || c == '\'') {
        std::string lexical = parse_quoted_string(cur);
        return finish_literal(cur, std::move(lexical), prefixes);
    }
    return parse_iri_term(cur, prefixes);
}

void parse_prefix_directive(Cursor& cur, KnowledgeGraph& graph) {
    // "@prefix" already consumed.
    cur.skip_ws_and_comments();
    std::string prefix = parse_pname_prefix(cur);
    cur.skip_ws_and_comments();
    Iri name_space = parse_iriref(cur);
    cur.skip_ws_and_comments();
    cur.expect('.', "'.' after @prefix directive");
    graph.declare_prefix(std::move(prefix), name_space.value());
}

bool at_word(Cursor& cur, std::string_view word) {
    if (cur.text.substr(cur.pos, word.size()) != word) return false;
    std::size_t after = cur.pos + word.size();
    if (after < cur.text.size()) {
        char c = cur.text[after];
        if (is_pname_char(c) || c == ':') return false;
    }
    return true;
}

void consume_word(Cursor& cur, std::string_view word) {
    for (char expected : word) {
        char got = cur.advance();
        (void)expected;
        (void)got;
    }
}

void parse_statement(Cursor& cur, KnowledgeGraph& graph) {
    Iri subject = parse_iri_term(cur, graph.prefixes());
    while (true) {
        cur.skip_ws_and_comments();
        Iri predicate = [&] {
            if (at_word(cur, "a")) {
                consume_word(cur, "a");
                return type_predicate();
            }
            return parse_iri_term(cur, graph.prefixes());
        }();
        while (true) {
            cur.skip_ws_and_comments();
            Object object = parse_object(cur, graph.prefixes());
            graph.add(subject, predicate, std::move(object));
            cur.skip_ws_and_comments();
            if (!cur.consume(',')) break;
        }
        if (cur.consume(';')) {
            cur.skip_ws_and_comments();
            if (cur.consume('.')) return;  // trailing ';' before '.'
            continue;
        }
        cur.expect('.', "'.' at end of statement");
        return;
    }
}

}  // namespace

std::string serialize_turtle(const KnowledgeGraph& graph) {
    std::string out;
    for (const auto& [prefix, name_space] : graph.prefixes()) {
        out += "@prefix " + prefix + ": <" + name_space + "> .\n";
    }
    if (graph.empty()) return out;
    if (!graph.prefixes().empty()) out += "\n";
    for (const Triple& t : graph.triples()) {
        out += "<" + t.subject.value() + "> ";
        out += (t.predicate == type_predicate()) ? "a" : render_iri(t.predicate, graph.prefixes());
        out += " ";
        out += render_object(t.object, graph.prefixes());
        out += " .\n";
    }
    return out;
}

KnowledgeGraph parse_turtle(std::string_view text) {
    KnowledgeGraph graph;
    Cursor cur{text};
    while (true) {
        cur.skip_ws_and_comments();
        if (cur.at_end()) break;
        if (at_word(cur, "@prefix")) {
            consume_word(cur, "@prefix");
            parse_prefix_directive(cur, graph);
        } else if (cur.peek() == '@') {
            cur.fail("unsupported directive");
        } else {
            parse_statement(cur, graph);
        }
    }
    return graph;
}

}  // namespace fairnets::rdf

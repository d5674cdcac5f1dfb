#include "fairnets/py/lexer.hpp"

#include <array>
#include <cctype>
#include <cstdint>

namespace fairnets::py {

namespace {

struct LexAbort {
    int line;
    int col;
    std::string message;
};

struct Scanner {
    std::string text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool at_end() const { return pos >= text.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < text.size() ? text[pos + ahead] : '\0';
    }
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
    [[noreturn]] void fail(std::string message) const { throw LexAbort{line, col, std::move(message)}; }
};

bool is_ident_start(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalpha(u) != 0 || c == '_' || u >= 0x80;
}

bool is_ident_cont(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || c == '_' || u >= 0x80;
}

void append_codepoint(std::string& out, std::uint32_t cp) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        out.push_back('?');
        return;
    }
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

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// Reads `digits` hex digits; -1 when the next char is not a hex digit.
std::int64_t read_hex(Scanner& s, int digits) {
    std::int64_t value = 0;
    for (int i = 0; i < digits; ++i) {
        int v = hex_value(s.peek());
        if (v < 0) return -1;
        s.advance();
        value = value * 16 + v;
    }
    return value;
}

void cook_escape(Scanner& s, std::string& out) {
    if (s.at_end()) s.fail("truncated escape at end of file");
    char e = s.advance();
    switch (e) {
        case '\n': break;  // line continuation inside the literal
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case 'a': out.push_back('\a'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case 'v': out.push_back('\v'); break;
        case '\'': out.push_back('\''); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'x': {
            std::int64_t v = read_hex(s, 2);
            if (v < 0) s.fail("invalid \\x escape");
            out.push_back(static_cast<char>(v));
            break;
        }
        case 'u': {
            std::int64_t v = read_hex(s, 4);
            if (v < 0) s.fail("invalid \\u escape");
            append_codepoint(out, static_cast<std::uint32_t>(v));
            break;
        }
        case 'U': {
            std::int64_t v = read_hex(s, 8);
            if (v < 0) s.fail("invalid \\U escape");
            append_codepoint(out, static_cast<std::uint32_t>(v));
            break;
        }
        default:
            if (e >= '0' && e <= '7') {
                int v = e - '0';
                for (int i = 0; i < 2 && s.peek() >= '0' && s.peek() <= '7'; ++i) {
                    v = v * 8 + (s.advance() - '0');
                }
                out.push_back(static_cast<char>(v));
            } else {
                // Unknown escapes keep the backslash, matching the reference
                // tokenizer's lenient mode.
                out.push_back('\\');
                out.push_back(e);
            }
    }
}

struct Lexer {
    Scanner s;
    std::vector<Token> tokens;
    std::vector<int> indents{0};
    int depth = 0;
    bool line_start = true;

    Token start_token(TokenKind kind) const {
        Token t;
        t.kind = kind;
        t.line = s.line;
        t.col = s.col;
        t.end_line = s.line;
        t.end_col = s.col;
        return t;
    }

    void finish(Token& t, std::size_t text_from) {
        t.text = s.text.substr(text_from, s.pos - text_from);
        t.end_line = s.line;
        t.end_col = s.col;
        tokens.push_back(std::move(t));
    }

    void push_marker(TokenKind kind) {
        Token t = start_token(kind);
        tokens.push_back(std::move(t));
    }

    void lex_string(std::string_view prefix, std::size_t text_from, int tok_line, int tok_col) {
        bool raw = false;
        bool fstring = false;
        for (char p : prefix) {
            char l = static_cast<char>(std::tolower(static_cast<unsigned char>(p)));
            if (l == 'r') raw = true;
            if (l == 'f') fstring = true;
        }
        char quote = s.advance();
        bool triple = s.peek() == quote && s.peek(1) == quote;
        if (triple) {
            s.advance();
            s.advance();
        }
        std::string value;
        while (true) {
            if (s.at_end()) throw LexAbort{tok_line, tok_col, "unterminated string literal"};
            char c = s.peek();
            if (!triple && c == '\n') {
                throw LexAbort{tok_line, tok_col, "unterminated string literal"};
            }
            if (c == quote) {
                if (!triple) {
                    s.advance();
                    break;
                }
                if (s.peek(1) == quote && s.peek(2) == quote) {
                    s.advance();
                    s.advance();
                    s.advance();
                    break;
                }
                value.push_back(s.advance());
                continue;
            }
            if (c == '\\') {
                s.advance();
                if (raw || fstring) {
                    if (s.at_end()) throw LexAbort{tok_line, tok_col, "unterminated string literal"};
                    value.push_back('\\');
                    value.push_back(s.advance());
                } else {
                    cook_escape(s, value);
                }
                continue;
            }
            value.push_back(s.advance());
        }
        Token t;
        t.kind = fstring ? TokenKind::FString : TokenKind::String;
        t.line = tok_line;
        t.col = tok_col;
        t.value = std::move(value);
        finish(t, text_from);
    }

    void lex_number() {
        Token t = start_token(TokenKind::Number);
        std::size_t from = s.pos;
        auto digits = [&](auto pred) {
            while (pred(s.peek()) || s.peek() == '_') s.advance();
        };
        auto is_dec = [](char c) { return c >= '0' && c <= '9'; };
        if (s.peek() == '0' && (s.peek(1) == 'x' || s.peek(1) == 'X' || s.peek(1) == 'o' ||
                                s.peek(1) == 'O' || s.peek(1) == 'b' || s.peek(1) == 'B')) {
            s.advance();
            s.advance();
            digits([](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
        } else {
            digits(is_dec);
            if (s.peek() == '.') {
                s.advance();
                digits(is_dec);
            }
            if ((s.peek() == 'e' || s.peek() == 'E') &&
                (is_dec(s.peek(1)) ||
                 ((s.peek(1) == '+' || s.peek(1) == '-') && is_dec(s.peek(2))))) {
                s.advance();
                if (s.peek() == '+' || s.peek() == '-') s.advance();
                digits(is_dec);
            }
            if (s.peek() == 'j' || s.peek() == 'J') s.advance();
        }
        finish(t, from);
    }

    bool lex_operator() {
        static constexpr std::array<std::string_view, 47> kOps = {
            "**=", "//=", ">>=", "<<=", "...", "!=", "->", ":=", "<=", ">=", "==", "+=",
            "-=",  "*=",  "/=",  "%=",  "@=",  "&=", "|=", "^=", "**", "//", "<<", ">>",
            "+",   "-",   "*",   "/",   "%",   "@",  "&",  "|",  "^",  "~",  "<",  ">",
            "(",   ")",   "[",   "]",   "{",   "}",  ",",  ":",  ".",  ";",  "=",
        };
        for (std::string_view op : kOps) {
            if (s.text.compare(s.pos, op.size(), op) == 0) {
                Token t = start_token(TokenKind::Op);
                std::size_t from = s.pos;
                for (std::size_t i = 0; i < op.size(); ++i) s.advance();
                if (op == "(" || op == "[" || op == "{") ++depth;
                if (op == ")" || op == "]" || op == "}") depth = depth > 0 ? depth - 1 : 0;
                finish(t, from);
                return true;
            }
        }
        return false;
    }

    void handle_line_start() {
        int count = 0;
        while (true) {
            char c = s.peek();
            if (c == ' ') {
                ++count;
                s.advance();
            } else if (c == '\t') {
                count += 8 - (count % 8);
                s.advance();
            } else if (c == '\f') {
                count = 0;
                s.advance();
            } else {
                break;
            }
        }
        if (s.at_end()) return;
        char c = s.peek();
        if (c == '\n') {
            s.advance();
            return;
        }
        if (c == '#') {
            while (!s.at_end() && s.peek() != '\n') s.advance();
            return;
        }
        if (count > indents.back()) {
            indents.push_back(count);
            push_marker(TokenKind::Indent);
        } else {
            while (count < indents.back()) {
                indents.pop_back();
                if (count > indents.back()) {
                    s.fail("unindent does not match any outer indentation level");
                }
                push_marker(TokenKind::Dedent);
            }
        }
        line_start = false;
    }

    void run() {
        while (true) {
            if (line_start && depth == 0) {
                if (s.at_end()) break;
                handle_line_start();
                continue;
            }
            if (s.at_end()) break;
            char c = s.peek();
            if (c == ' ' || c == '\t' || c == '\f') {
                s.advance();
                continue;
            }
            if (c == '#') {
                while (!s.at_end() && s.peek() != '\n') s.advance();
                continue;
            }
            if (c == '\n') {
                s.advance();
                if (depth > 0) continue;
                if (!tokens.empty() && tokens.back().kind != TokenKind::Newline) {
                    push_marker(TokenKind::Newline);
                }
                line_start = true;
                continue;
            }
            if (c == '\\') {
                if (s.peek(1) == '\n') {
                    s.advance();
                    s.advance();
                    continue;
                }
                s.fail("unexpected character after line continuation character");
            }
            if (c == '\0') s.fail("source contains a NUL byte");
            if (is_ident_start(c)) {
                Token t = start_token(TokenKind::Name);
                std::size_t from = s.pos;
                std::string word;
                while (is_ident_cont(s.peek())) word.push_back(s.advance());
                bool prefix_ok = word.size() <= 2 && (s.peek() == '\'' || s.peek() == '"');
                if (prefix_ok) {
                    for (char p : word) {
                        char l = static_cast<char>(std::tolower(static_cast<unsigned char>(p)));
                        if (l != 'r' && l != 'b' && l != 'u' && l != 'f') prefix_ok = false;
                    }
                }
                if (prefix_ok) {
                    lex_string(word, from, t.line, t.col);
                } else {
                    finish(t, from);
                }
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '.' && std::isdigit(static_cast<unsigned char>(s.peek(1))))) {
                lex_number();
                continue;
            }
            if (c == '\'' || c == '"') {
                lex_string("", s.pos, s.line, s.col);
                continue;
            }
            if (!lex_operator()) s.fail(std::string("unexpected character '") + c + "'");
        }
        if (!tokens.empty() && tokens.back().kind != TokenKind::Newline &&
            tokens.back().kind != TokenKind::Dedent) {
            push_marker(TokenKind::Newline);
        }
        while (indents.size() > 1) {
            indents.pop_back();
            push_marker(TokenKind::Dedent);
        }
        push_marker(TokenKind::EndOfFile);
    }
};

}  // namespace

// Strips a BOM and folds \r\n / \r to \n so the scanner sees one newline form.
std::string normalize_source(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    std::size_t i = 0;
    if (in.size() >= 3 && in.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
    for (; i < in.size(); ++i) {
        char c = in[i];
        if (c == '\r') {
            out.push_back('\n');
            if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

LexResult lex_source(std::string_view text) {
    Lexer lexer;
    lexer.s.text = normalize_source(text);
    try {
        lexer.run();
    } catch (const LexAbort& abort) {
        return {std::move(lexer.tokens), ParseFailure{abort.line, abort.col, abort.message}};
    }
    return {std::move(lexer.tokens), std::nullopt};
}

}  // namespace fairnets::py

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairnets/py/ast.hpp"

namespace fairnets::py {

enum class TokenKind {
    Name,
    Number,
    String,    // value carries the cooked text
    FString,   // kept raw, never folded
    Op,
    Newline,
    Indent,
    Dedent,
    EndOfFile,
};

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string text;    // raw spelling (operators, names, number literals)
    std::string value;   // cooked string value for String tokens
    int line = 1;
    int col = 1;
    int end_line = 1;
    int end_col = 1;
};

struct LexResult {
    std::vector<Token> tokens;                // ends with EndOfFile when ok
    std::optional<ParseFailure> failure;
};

/// Line-ending/BOM normalization applied before tokenizing; token spans and
/// ParseFailure positions refer to this normalized text.
std::string normalize_source(std::string_view text);

/// Tokenizes subject source. Indentation becomes Indent/Dedent tokens;
/// newlines inside brackets and after `\` joins are suppressed. Tolerant of
/// some spellings the reference grammar rejects, strict about indentation
/// consistency, string termination, and stray characters.
LexResult lex_source(std::string_view text);

}  // namespace fairnets::py

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fairnets::py {

struct Span {
    int line = 0;
    int col = 0;
    int end_line = 0;
    int end_col = 0;
};

enum class NodeKind {
    Module,
    Block,
    FunctionDef,
    ClassDef,
    ParamList,
    Param,
    DecoratorList,
    If,
    While,
    For,
    With,
    WithItem,
    Try,
    Handler,
    Return,
    Pass,
    Break,
    Continue,
    Delete,
    Assert,
    Raise,
    Global,
    Nonlocal,
    Import,
    ImportFrom,
    Alias,
    Assign,
    AugAssign,
    AnnAssign,
    ExprStmt,
    Name,
    NumberLit,
    StringLit,
    FStringLit,
    BoolLit,
    NoneLit,
    EllipsisLit,
    Tuple,
    ListDisplay,
    SetDisplay,
    DictDisplay,
    DictItem,
    DictUnpack,
    Call,
    Arg,
    Keyword,
    StarArg,
    DoubleStarArg,
    Attribute,
    Subscript,
    Slice,
    Empty,
    BinOp,
    UnaryOp,
    BoolOp,
    Compare,
    CompareOp,
    Conditional,
    NamedExpr,
    Lambda,
    Comprehension,
    CompFor,
    CompIf,
    Starred,
    Yield,
    Await,
};

std::string_view to_string(NodeKind kind);

/// One node of the subject-language syntax tree. The shape of `children` is
/// fixed per kind (see parser.cpp); `text` carries identifiers, literal
/// values, operators, and attribute/keyword names.
struct Node {
    NodeKind kind = NodeKind::Empty;
    Span span;
    std::string text;
    std::vector<Node> children;
};

/// Location and reason of the first syntax error in a file.
struct ParseFailure {
    int line = 0;
    int col = 0;
    std::string message;
};

using ParseOutcome = std::variant<Node, ParseFailure>;

/// Parses one subject source file. Never throws on malformed input: every
/// error is reported as a ParseFailure.
ParseOutcome parse_subject_source(std::string_view text);

/// Number of nodes of `kind` in the tree rooted at `root` (root included).
std::size_t count_nodes(const Node& root, NodeKind kind);

}  // namespace fairnets::py

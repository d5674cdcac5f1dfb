#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fairnets/py/ast.hpp"
#include "fairnets/py/lexer.hpp"

namespace fairnets::py {

namespace {

struct ParseAbort {
    int line;
    int col;
    std::string message;
};

bool is_keyword(std::string_view word) {
    static constexpr std::array<std::string_view, 35> kKeywords = {
        "False",  "None",    "True",  "and",    "as",     "assert", "async",
        "await",  "break",   "class", "continue", "def",  "del",    "elif",
        "else",   "except",  "finally", "for",  "from",   "global", "if",
        "import", "in",      "is",    "lambda", "nonlocal", "not",  "or",
        "pass",   "raise",   "return", "try",   "while",  "with",   "yield",
    };
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

constexpr int kMaxDepth = 200;

// Recursive-descent parser over the token stream. Children layout per kind:
//   Module        statements
//   Block         statements
//   FunctionDef   [DecoratorList, ParamList, Block]; text = name
//   ClassDef      [DecoratorList, ParamList (base args), Block]; text = name
//   If            [cond, Block, Block?]       (elif nests as If inside else)
//   While         [cond, Block, Block?]
//   For           [target, iter, Block, Block?]
//   With          [WithItem..., Block];  WithItem = [expr, target?]
//   Try           [Block, Handler..., Block?...]; Handler = [type?, Block], text = as-name
//   Assign        [target..., value]
//   AugAssign     [target, value]; text = operator
//   AnnAssign     [target, annotation, value?]
//   Import        Alias...;   Alias text = dotted name, child Name = as-name
//   ImportFrom    Alias...;   text = module (leading dots kept), "*" alias for star
//   Call          [callee, (Arg|Keyword|StarArg|DoubleStarArg)...]
//   Attribute     [value]; text = attribute name
//   Subscript     [value, index]
//   BinOp/UnaryOp/BoolOp  operands; text = operator
//   Compare       [left, CompareOp...]; CompareOp = [right], text = operator
//   Conditional   [body, condition, orelse]
//   Comprehension [element(s), CompFor/CompIf...]; text = list|set|dict|generator
class Parser {
  public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    Node parse_module() {
        Node module = make(NodeKind::Module);
        while (!at(TokenKind::EndOfFile)) {
            if (at(TokenKind::Newline)) {
                advance();
                continue;
            }
            parse_statements_into(module.children);
        }
        close(module);
        return module;
    }

  private:
    const std::vector<Token>& toks_;
    std::size_t i_ = 0;
    int depth_ = 0;

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > kMaxDepth) p.fail("nesting too deep");
        }
        ~DepthGuard() { --p.depth_; }
    };

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t j = i_ + ahead;
        return j < toks_.size() ? toks_[j] : toks_.back();
    }
    const Token& prev() const { return toks_[i_ == 0 ? 0 : i_ - 1]; }
    const Token& advance() {
        const Token& t = toks_[i_];
        if (i_ + 1 < toks_.size()) ++i_;
        return t;
    }

    bool at(TokenKind kind) const { return peek().kind == kind; }
    bool at_op(std::string_view text) const {
        return peek().kind == TokenKind::Op && peek().text == text;
    }
    bool at_word(std::string_view word) const {
        return peek().kind == TokenKind::Name && peek().text == word;
    }
    bool consume_op(std::string_view text) {
        if (at_op(text)) {
            advance();
            return true;
        }
        return false;
    }
    bool consume_word(std::string_view word) {
        if (at_word(word)) {
            advance();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(std::string message) const {
        throw ParseAbort{peek().line, peek().col, std::move(message)};
    }

    void expect_op(std::string_view text) {
        if (!consume_op(text)) fail("expected '" + std::string(text) + "'");
    }
    void expect_newline() {
        if (at(TokenKind::EndOfFile)) return;
        if (!at(TokenKind::Newline)) fail("expected end of statement");
        advance();
    }
    std::string expect_identifier() {
        if (!at(TokenKind::Name) || is_keyword(peek().text)) fail("expected identifier");
        return advance().text;
    }

    Node make(NodeKind kind) const {
        Node n;
        n.kind = kind;
        const Token& t = peek();
        n.span = {t.line, t.col, t.end_line, t.end_col};
        return n;
    }
    void close(Node& n) const {
        n.span.end_line = prev().end_line;
        n.span.end_col = prev().end_col;
    }

    // ----- statements ---------------------------------------------------

    void parse_statements_into(std::vector<Node>& out) {
        DepthGuard guard(*this);
        if (at(TokenKind::Indent)) fail("unexpected indent");
        if (at(TokenKind::Dedent)) fail("unexpected unindent");
        if (auto compound = parse_compound()) {
            out.push_back(std::move(*compound));
            return;
        }
        while (true) {
            out.push_back(parse_simple_stmt());
            if (consume_op(";")) {
                if (at(TokenKind::Newline) || at(TokenKind::EndOfFile)) break;
                continue;
            }
            break;
        }
        expect_newline();
    }

    std::optional<Node> parse_compound() {
        if (at_op("@")) return parse_decorated();
        if (!at(TokenKind::Name)) return std::nullopt;
        const std::string& word = peek().text;
        if (word == "if") return parse_if();
        if (word == "while") return parse_while();
        if (word == "for") return parse_for();
        if (word == "try") return parse_try();
        if (word == "with") return parse_with();
        if (word == "def") return parse_def(Node{NodeKind::DecoratorList, peek_span(), "", {}});
        if (word == "class") return parse_class(Node{NodeKind::DecoratorList, peek_span(), "", {}});
        if (word == "async") {
            const std::string& next = peek(1).text;
            if (next == "def" || next == "for" || next == "with") {
                advance();
                if (at_word("def")) return parse_def(Node{NodeKind::DecoratorList, peek_span(), "", {}});
                if (at_word("for")) return parse_for();
                return parse_with();
            }
            return std::nullopt;
        }
        return std::nullopt;
    }

    Span peek_span() const {
        const Token& t = peek();
        return {t.line, t.col, t.end_line, t.end_col};
    }

    Node parse_decorated() {
        Node decorators = make(NodeKind::DecoratorList);
        while (consume_op("@")) {
            decorators.children.push_back(parse_namedexpr());
            expect_newline();
        }
        close(decorators);
        if (at_word("async") && peek(1).text == "def") advance();
        if (at_word("def")) return parse_def(std::move(decorators));
        if (at_word("class")) return parse_class(std::move(decorators));
        fail("decorator must precede a function or class definition");
    }

    Node parse_def(Node decorators) {
        Node def = make(NodeKind::FunctionDef);
        advance();  // def
        def.text = expect_identifier();
        expect_op("(");
        Node params = parse_params(true);
        expect_op(")");
        if (consume_op("->")) parse_test();  // return annotation, not retained
        def.children.push_back(std::move(decorators));
        def.children.push_back(std::move(params));
        def.children.push_back(parse_suite());
        close(def);
        return def;
    }

    Node parse_class(Node decorators) {
        Node cls = make(NodeKind::ClassDef);
        advance();  // class
        cls.text = expect_identifier();
        Node bases = make(NodeKind::ParamList);
        if (consume_op("(")) {
            parse_call_args_into(bases.children);
            expect_op(")");
        }
        close(bases);
        cls.children.push_back(std::move(decorators));
        cls.children.push_back(std::move(bases));
        cls.children.push_back(parse_suite());
        close(cls);
        return cls;
    }

    Node parse_params(bool parens) {
        Node params = make(NodeKind::ParamList);
        while (true) {
            if (parens ? at_op(")") : at_op(":")) break;
            Node param = make(NodeKind::Param);
            if (consume_op("*")) {
                param.text = "*";
                if (at(TokenKind::Name) && !is_keyword(peek().text)) param.text += advance().text;
            } else if (consume_op("**")) {
                param.text = "**" + expect_identifier();
            } else if (consume_op("/")) {
                param.text = "/";
            } else {
                param.text = expect_identifier();
                if (parens && consume_op(":")) param.children.push_back(parse_test());
                if (consume_op("=")) param.children.push_back(parse_test());
            }
            close(param);
            params.children.push_back(std::move(param));
            if (!consume_op(",")) break;
        }
        close(params);
        return params;
    }

    Node parse_suite() {
        Node block = make(NodeKind::Block);
        expect_op(":");
        if (at(TokenKind::Newline)) {
            advance();
            if (!at(TokenKind::Indent)) fail("expected an indented block");
            advance();
            while (!at(TokenKind::Dedent)) {
                if (at(TokenKind::EndOfFile)) fail("unexpected end of file in indented block");
                if (at(TokenKind::Newline)) {
                    advance();
                    continue;
                }
                parse_statements_into(block.children);
            }
            advance();  // dedent
        } else {
            while (true) {
                block.children.push_back(parse_simple_stmt());
                if (consume_op(";")) {
                    if (at(TokenKind::Newline) || at(TokenKind::EndOfFile)) break;
                    continue;
                }
                break;
            }
            expect_newline();
        }
        close(block);
        return block;
    }

    Node parse_if() {
        Node node = make(NodeKind::If);
        advance();  // if / elif
        node.children.push_back(parse_namedexpr());
        node.children.push_back(parse_suite());
        if (at_word("elif")) {
            Node block = make(NodeKind::Block);
            block.children.push_back(parse_if());
            close(block);
            node.children.push_back(std::move(block));
        } else if (consume_word("else")) {
            node.children.push_back(parse_suite());
        }
        close(node);
        return node;
    }

    Node parse_while() {
        Node node = make(NodeKind::While);
        advance();
        node.children.push_back(parse_namedexpr());
        node.children.push_back(parse_suite());
        if (consume_word("else")) node.children.push_back(parse_suite());
        close(node);
        return node;
    }

    Node parse_for() {
        Node node = make(NodeKind::For);
        advance();
        node.children.push_back(parse_target_list());
        if (!consume_word("in")) fail("expected 'in'");
        node.children.push_back(parse_testlist());
        node.children.push_back(parse_suite());
        if (consume_word("else")) node.children.push_back(parse_suite());
        close(node);
        return node;
    }

    Node parse_with() {
        Node node = make(NodeKind::With);
        advance();
        while (true) {
            Node item = make(NodeKind::WithItem);
            item.children.push_back(parse_test());
            if (consume_word("as")) item.children.push_back(parse_primary_target());
            close(item);
            node.children.push_back(std::move(item));
            if (!consume_op(",")) break;
        }
        node.children.push_back(parse_suite());
        close(node);
        return node;
    }

    Node parse_try() {
        Node node = make(NodeKind::Try);
        advance();
        node.children.push_back(parse_suite());
        bool saw_handler = false;
        while (at_word("except")) {
            saw_handler = true;
            Node handler = make(NodeKind::Handler);
            advance();
            if (!at_op(":")) {
                handler.children.push_back(parse_test());
                if (consume_word("as")) handler.text = expect_identifier();
            }
            handler.children.push_back(parse_suite());
            close(handler);
            node.children.push_back(std::move(handler));
        }
        if (saw_handler && consume_word("else")) node.children.push_back(parse_suite());
        if (consume_word("finally")) {
            node.children.push_back(parse_suite());
        } else if (!saw_handler) {
            fail("expected 'except' or 'finally'");
        }
        close(node);
        return node;
    }

    Node parse_simple_stmt() {
        DepthGuard guard(*this);
        if (at(TokenKind::Name)) {
            const std::string& word = peek().text;
            if (word == "return") {
                Node node = make(NodeKind::Return);
                advance();
                if (starts_expression()) node.children.push_back(parse_testlist_star());
                close(node);
                return node;
            }
            if (word == "pass" || word == "break" || word == "continue") {
                Node node = make(word == "pass" ? NodeKind::Pass
                                 : word == "break" ? NodeKind::Break
                                                   : NodeKind::Continue);
                advance();
                close(node);
                return node;
            }
            if (word == "del") {
                Node node = make(NodeKind::Delete);
                advance();
                node.children.push_back(parse_target_list());
                close(node);
                return node;
            }
            if (word == "assert") {
                Node node = make(NodeKind::Assert);
                advance();
                node.children.push_back(parse_test());
                if (consume_op(",")) node.children.push_back(parse_test());
                close(node);
                return node;
            }
            if (word == "raise") {
                Node node = make(NodeKind::Raise);
                advance();
                if (starts_expression()) {
                    node.children.push_back(parse_test());
                    if (consume_word("from")) node.children.push_back(parse_test());
                }
                close(node);
                return node;
            }
            if (word == "global" || word == "nonlocal") {
                Node node = make(word == "global" ? NodeKind::Global : NodeKind::Nonlocal);
                advance();
                while (true) {
                    Node name = make(NodeKind::Name);
                    name.text = expect_identifier();
                    close(name);
                    node.children.push_back(std::move(name));
                    if (!consume_op(",")) break;
                }
                close(node);
                return node;
            }
            if (word == "import") return parse_import();
            if (word == "from") return parse_import_from();
        }
        return parse_expr_stmt();
    }

    Node parse_import() {
        Node node = make(NodeKind::Import);
        advance();
        while (true) {
            node.children.push_back(parse_alias(true));
            if (!consume_op(",")) break;
        }
        close(node);
        return node;
    }

    Node parse_import_from() {
        Node node = make(NodeKind::ImportFrom);
        advance();
        std::string module;
        while (true) {
            if (at_op(".")) {
                module += advance().text;
            } else if (at_op("...")) {
                module += advance().text;
            } else {
                break;
            }
        }
        if (at(TokenKind::Name) && !is_keyword(peek().text)) module += parse_dotted_name();
        node.text = std::move(module);
        if (!consume_word("import")) fail("expected 'import'");
        if (at_op("*")) {
            Node star = make(NodeKind::Alias);
            star.text = "*";
            advance();
            close(star);
            node.children.push_back(std::move(star));
        } else if (consume_op("(")) {
            while (!at_op(")")) {
                node.children.push_back(parse_alias(false));
                if (!consume_op(",")) break;
            }
            expect_op(")");
        } else {
            while (true) {
                node.children.push_back(parse_alias(false));
                if (!consume_op(",")) break;
            }
        }
        close(node);
        return node;
    }

    std::string parse_dotted_name() {
        std::string name = expect_identifier();
        while (at_op(".") && peek(1).kind == TokenKind::Name && !is_keyword(peek(1).text)) {
            advance();
            name += ".";
            name += advance().text;
        }
        return name;
    }

    Node parse_alias(bool dotted) {
        Node alias = make(NodeKind::Alias);
        alias.text = dotted ? parse_dotted_name() : expect_identifier();
        if (consume_word("as")) {
            Node as_name = make(NodeKind::Name);
            as_name.text = expect_identifier();
            close(as_name);
            alias.children.push_back(std::move(as_name));
        }
        close(alias);
        return alias;
    }

    bool at_aug_op() const {
        static constexpr std::array<std::string_view, 13> kAug = {
            "+=", "-=", "*=", "/=", "//=", "**=", "%=", "@=", "&=", "|=", "^=", "<<=", ">>=",
        };
        return peek().kind == TokenKind::Op &&
               std::find(kAug.begin(), kAug.end(), peek().text) != kAug.end();
    }

    Node parse_assign_value() {
        if (at_word("yield")) return parse_yield();
        return parse_testlist_star();
    }

    Node parse_expr_stmt() {
        if (at_word("yield")) {
            Node stmt = make(NodeKind::ExprStmt);
            stmt.children.push_back(parse_yield());
            close(stmt);
            return stmt;
        }
        Node first = parse_testlist_star();
        if (at_op("=")) {
            Node assign = make(NodeKind::Assign);
            assign.span = first.span;
            assign.children.push_back(std::move(first));
            while (consume_op("=")) assign.children.push_back(parse_assign_value());
            close(assign);
            return assign;
        }
        if (at_aug_op()) {
            Node aug = make(NodeKind::AugAssign);
            aug.span = first.span;
            aug.text = advance().text;
            aug.children.push_back(std::move(first));
            aug.children.push_back(parse_assign_value());
            close(aug);
            return aug;
        }
        if (at_op(":")) {
            Node ann = make(NodeKind::AnnAssign);
            ann.span = first.span;
            advance();
            ann.children.push_back(std::move(first));
            ann.children.push_back(parse_test());
            if (consume_op("=")) ann.children.push_back(parse_assign_value());
            close(ann);
            return ann;
        }
        Node stmt = make(NodeKind::ExprStmt);
        stmt.span = first.span;
        stmt.children.push_back(std::move(first));
        close(stmt);
        return stmt;
    }

    // ----- expressions ---------------------------------------------------

    bool starts_expression() const {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Number:
            case TokenKind::String:
            case TokenKind::FString:
                return true;
            case TokenKind::Name:
                if (!is_keyword(t.text)) return true;
                return t.text == "True" || t.text == "False" || t.text == "None" ||
                       t.text == "not" || t.text == "lambda" || t.text == "await" ||
                       t.text == "yield";
            case TokenKind::Op:
                return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "+" ||
                       t.text == "-" || t.text == "~" || t.text == "*" || t.text == "**" ||
                       t.text == "...";
            default:
                return false;
        }
    }

    Node parse_target_list() {
        Node first = parse_star_or_primary_target();
        if (!at_op(",")) return first;
        Node tuple = make(NodeKind::Tuple);
        tuple.span = first.span;
        tuple.children.push_back(std::move(first));
        while (consume_op(",")) {
            if (!starts_expression()) break;
            tuple.children.push_back(parse_star_or_primary_target());
        }
        close(tuple);
        return tuple;
    }

    Node parse_star_or_primary_target() {
        if (at_op("*")) {
            Node star = make(NodeKind::Starred);
            advance();
            star.children.push_back(parse_primary_target());
            close(star);
            return star;
        }
        return parse_primary_target();
    }

    // Targets share the primary grammar (name, attribute, subscript, or a
    // parenthesized/bracketed list of targets). Parsing stops below the
    // comparison level so the `in` of a for/comprehension clause is not
    // swallowed as a containment test.
    Node parse_primary_target() { return parse_bitor(); }

    Node parse_testlist() {
        Node first = parse_test();
        if (!at_op(",")) return first;
        Node tuple = make(NodeKind::Tuple);
        tuple.span = first.span;
        tuple.children.push_back(std::move(first));
        while (consume_op(",")) {
            if (!starts_expression()) break;
            tuple.children.push_back(parse_test());
        }
        close(tuple);
        return tuple;
    }

    Node parse_testlist_star() {
        Node first = at_op("*") ? parse_star_expr() : parse_namedexpr();
        if (!at_op(",")) return first;
        Node tuple = make(NodeKind::Tuple);
        tuple.span = first.span;
        tuple.children.push_back(std::move(first));
        while (consume_op(",")) {
            if (!starts_expression()) break;
            tuple.children.push_back(at_op("*") ? parse_star_expr() : parse_namedexpr());
        }
        close(tuple);
        return tuple;
    }

    Node parse_star_expr() {
        Node star = make(NodeKind::Starred);
        expect_op("*");
        star.children.push_back(parse_or());
        close(star);
        return star;
    }

    Node parse_namedexpr() {
        Node node = parse_test();
        if (at_op(":=")) {
            if (node.kind != NodeKind::Name) fail("assignment expression target must be a name");
            Node named = make(NodeKind::NamedExpr);
            named.span = node.span;
            advance();
            named.children.push_back(std::move(node));
            named.children.push_back(parse_test());
            close(named);
            return named;
        }
        return node;
    }

    Node parse_test() {
        DepthGuard guard(*this);
        if (at_word("lambda")) return parse_lambda();
        Node body = parse_or();
        if (at_word("if")) {
            Node cond = make(NodeKind::Conditional);
            cond.span = body.span;
            advance();
            cond.children.push_back(std::move(body));
            cond.children.push_back(parse_or());
            if (!consume_word("else")) fail("expected 'else'");
            cond.children.push_back(parse_test());
            close(cond);
            return cond;
        }
        return body;
    }

    Node parse_lambda() {
        Node node = make(NodeKind::Lambda);
        advance();
        node.children.push_back(parse_params(false));
        expect_op(":");
        node.children.push_back(parse_test());
        close(node);
        return node;
    }

    Node parse_yield() {
        Node node = make(NodeKind::Yield);
        advance();  // yield
        if (consume_word("from")) {
            node.children.push_back(parse_test());
        } else if (starts_expression()) {
            node.children.push_back(parse_testlist_star());
        }
        close(node);
        return node;
    }

    Node parse_bool_op(std::string_view word, Node (Parser::*next)()) {
        Node left = (this->*next)();
        if (!at_word(word)) return left;
        Node node = make(NodeKind::BoolOp);
        node.span = left.span;
        node.text = std::string(word);
        node.children.push_back(std::move(left));
        while (consume_word(word)) node.children.push_back((this->*next)());
        close(node);
        return node;
    }

    Node parse_or() { return parse_bool_op("or", &Parser::parse_and); }
    Node parse_and() { return parse_bool_op("and", &Parser::parse_not); }

    Node parse_not() {
        if (at_word("not")) {
            Node node = make(NodeKind::UnaryOp);
            node.text = "not";
            advance();
            node.children.push_back(parse_not());
            close(node);
            return node;
        }
        return parse_comparison();
    }

    std::optional<std::string> comparison_op() {
        if (peek().kind == TokenKind::Op) {
            const std::string& t = peek().text;
            if (t == "<" || t == ">" || t == "<=" || t == ">=" || t == "==" || t == "!=") {
                return advance().text;
            }
            return std::nullopt;
        }
        if (at_word("in")) {
            advance();
            return "in";
        }
        if (at_word("not") && peek(1).text == "in") {
            advance();
            advance();
            return "not in";
        }
        if (at_word("is")) {
            advance();
            if (consume_word("not")) return "is not";
            return "is";
        }
        return std::nullopt;
    }

    Node parse_comparison() {
        Node left = parse_bitor();
        auto op = comparison_op();
        if (!op) return left;
        Node node = make(NodeKind::Compare);
        node.span = left.span;
        node.children.push_back(std::move(left));
        while (op) {
            Node part = make(NodeKind::CompareOp);
            part.text = *op;
            part.children.push_back(parse_bitor());
            close(part);
            node.children.push_back(std::move(part));
            op = comparison_op();
        }
        close(node);
        return node;
    }

    Node parse_binary(std::initializer_list<std::string_view> ops, Node (Parser::*next)()) {
        Node left = (this->*next)();
        while (peek().kind == TokenKind::Op &&
               std::find(ops.begin(), ops.end(), peek().text) != ops.end()) {
            Node node = make(NodeKind::BinOp);
            node.span = left.span;
            node.text = advance().text;
            node.children.push_back(std::move(left));
            node.children.push_back((this->*next)());
            close(node);
            left = std::move(node);
        }
        return left;
    }

    Node parse_bitor() { return parse_binary({"|"}, &Parser::parse_bitxor); }
    Node parse_bitxor() { return parse_binary({"^"}, &Parser::parse_bitand); }
    Node parse_bitand() { return parse_binary({"&"}, &Parser::parse_shift); }
    Node parse_shift() { return parse_binary({"<<", ">>"}, &Parser::parse_arith); }
    Node parse_arith() { return parse_binary({"+", "-"}, &Parser::parse_term); }
    Node parse_term() { return parse_binary({"*", "@", "/", "//", "%"}, &Parser::parse_factor); }

    Node parse_factor() {
        DepthGuard guard(*this);
        if (at_op("+") || at_op("-") || at_op("~")) {
            Node node = make(NodeKind::UnaryOp);
            node.text = advance().text;
            node.children.push_back(parse_factor());
            close(node);
            return node;
        }
        return parse_power();
    }

    Node parse_power() {
        Node base = parse_await_primary();
        if (at_op("**")) {
            Node node = make(NodeKind::BinOp);
            node.span = base.span;
            node.text = advance().text;
            node.children.push_back(std::move(base));
            node.children.push_back(parse_factor());
            close(node);
            return node;
        }
        return base;
    }

    Node parse_await_primary() {
        if (at_word("await")) {
            Node node = make(NodeKind::Await);
            advance();
            node.children.push_back(parse_primary());
            close(node);
            return node;
        }
        return parse_primary();
    }

    Node parse_primary() {
        DepthGuard guard(*this);
        Node node = parse_atom();
        while (true) {
            if (at_op("(")) {
                Node call = make(NodeKind::Call);
                call.span = node.span;
                advance();
                call.children.push_back(std::move(node));
                parse_call_args_into(call.children);
                expect_op(")");
                close(call);
                node = std::move(call);
            } else if (at_op("[")) {
                Node sub = make(NodeKind::Subscript);
                sub.span = node.span;
                advance();
                sub.children.push_back(std::move(node));
                sub.children.push_back(parse_subscript_list());
                expect_op("]");
                close(sub);
                node = std::move(sub);
            } else if (at_op(".")) {
                Node attr = make(NodeKind::Attribute);
                attr.span = node.span;
                advance();
                attr.text = expect_identifier();
                attr.children.push_back(std::move(node));
                close(attr);
                node = std::move(attr);
            } else {
                return node;
            }
        }
    }

    void parse_call_args_into(std::vector<Node>& out) {
        while (!at_op(")")) {
            if (at(TokenKind::EndOfFile)) fail("unexpected end of file in argument list");
            if (at_op("*")) {
                Node star = make(NodeKind::StarArg);
                advance();
                star.children.push_back(parse_test());
                close(star);
                out.push_back(std::move(star));
            } else if (at_op("**")) {
                Node dstar = make(NodeKind::DoubleStarArg);
                advance();
                dstar.children.push_back(parse_test());
                close(dstar);
                out.push_back(std::move(dstar));
            } else if (peek().kind == TokenKind::Name && !is_keyword(peek().text) &&
                       peek(1).kind == TokenKind::Op && peek(1).text == "=") {
                Node kw = make(NodeKind::Keyword);
                kw.text = advance().text;
                advance();  // '='
                kw.children.push_back(parse_test());
                close(kw);
                out.push_back(std::move(kw));
            } else {
                Node arg = make(NodeKind::Arg);
                Node value = parse_namedexpr();
                if (at_word("for") || (at_word("async") && peek(1).text == "for")) {
                    value = parse_comprehension_tail(std::move(value), "generator");
                }
                arg.span = value.span;
                arg.children.push_back(std::move(value));
                close(arg);
                out.push_back(std::move(arg));
            }
            if (!consume_op(",")) break;
        }
    }

    Node parse_subscript_list() {
        Node first = parse_subscript_item();
        if (!at_op(",")) return first;
        Node tuple = make(NodeKind::Tuple);
        tuple.span = first.span;
        tuple.children.push_back(std::move(first));
        while (consume_op(",")) {
            if (at_op("]")) break;
            tuple.children.push_back(parse_subscript_item());
        }
        close(tuple);
        return tuple;
    }

    Node parse_subscript_item() {
        Node lower = make(NodeKind::Empty);
        bool have_lower = false;
        if (!at_op(":")) {
            lower = parse_test();
            have_lower = true;
        }
        if (!at_op(":")) {
            if (!have_lower) fail("expected subscript");
            return lower;
        }
        Node slice = make(NodeKind::Slice);
        slice.span = lower.span;
        advance();  // ':'
        slice.children.push_back(std::move(lower));
        if (!at_op(":") && !at_op("]") && !at_op(",")) {
            slice.children.push_back(parse_test());
        } else {
            slice.children.push_back(Node{NodeKind::Empty, peek_span(), "", {}});
        }
        if (consume_op(":")) {
            if (!at_op("]") && !at_op(",")) {
                slice.children.push_back(parse_test());
            } else {
                slice.children.push_back(Node{NodeKind::Empty, peek_span(), "", {}});
            }
        }
        close(slice);
        return slice;
    }

    Node parse_comprehension_tail(Node element, std::string kind) {
        Node comp = make(NodeKind::Comprehension);
        comp.span = element.span;
        comp.text = std::move(kind);
        comp.children.push_back(std::move(element));
        while (true) {
            if (at_word("async") && peek(1).text == "for") advance();
            if (at_word("for")) {
                Node clause = make(NodeKind::CompFor);
                advance();
                clause.children.push_back(parse_target_list());
                if (!consume_word("in")) fail("expected 'in'");
                clause.children.push_back(parse_or());
                close(clause);
                comp.children.push_back(std::move(clause));
            } else if (at_word("if")) {
                Node clause = make(NodeKind::CompIf);
                advance();
                clause.children.push_back(parse_or());
                close(clause);
                comp.children.push_back(std::move(clause));
            } else {
                break;
            }
        }
        close(comp);
        return comp;
    }

    Node parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Number: {
                Node node = make(NodeKind::NumberLit);
                node.text = advance().text;
                close(node);
                return node;
            }
            case TokenKind::String:
            case TokenKind::FString:
                return parse_string_group();
            case TokenKind::Name: {
                if (t.text == "True" || t.text == "False") {
                    Node node = make(NodeKind::BoolLit);
                    node.text = advance().text;
                    close(node);
                    return node;
                }
                if (t.text == "None") {
                    Node node = make(NodeKind::NoneLit);
                    advance();
                    close(node);
                    return node;
                }
                if (t.text == "yield") return parse_yield();
                if (t.text == "lambda") return parse_lambda();
                if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
                Node node = make(NodeKind::Name);
                node.text = advance().text;
                close(node);
                return node;
            }
            case TokenKind::Op: {
                if (t.text == "...") {
                    Node node = make(NodeKind::EllipsisLit);
                    advance();
                    close(node);
                    return node;
                }
                if (t.text == "(") return parse_paren_atom();
                if (t.text == "[") return parse_list_atom();
                if (t.text == "{") return parse_brace_atom();
                fail("unexpected token '" + t.text + "'");
            }
            case TokenKind::Indent:
                fail("unexpected indent");
            case TokenKind::Newline:
            case TokenKind::Dedent:
            case TokenKind::EndOfFile:
                fail("unexpected end of statement");
        }
        fail("unexpected token");
    }

    // Adjacent string literals concatenate; any f-string in the run keeps the
    // whole group opaque.
    Node parse_string_group() {
        Node node = make(NodeKind::StringLit);
        bool fstring = false;
        std::string cooked;
        std::string raw;
        while (at(TokenKind::String) || at(TokenKind::FString)) {
            const Token& tok = advance();
            if (tok.kind == TokenKind::FString) fstring = true;
            cooked += tok.value;
            raw += tok.text;
        }
        if (fstring) {
            node.kind = NodeKind::FStringLit;
            node.text = std::move(raw);
        } else {
            node.text = std::move(cooked);
        }
        close(node);
        return node;
    }

    Node parse_paren_atom() {
        Node open = make(NodeKind::Tuple);
        expect_op("(");
        if (at_op(")")) {
            advance();
            close(open);
            return open;  // empty tuple
        }
        if (at_word("yield")) {
            Node inner = parse_yield();
            expect_op(")");
            return inner;
        }
        Node first = at_op("*") ? parse_star_expr() : parse_namedexpr();
        if (at_word("for") || (at_word("async") && peek(1).text == "for")) {
            Node comp = parse_comprehension_tail(std::move(first), "generator");
            expect_op(")");
            return comp;
        }
        if (at_op(",")) {
            open.children.push_back(std::move(first));
            while (consume_op(",")) {
                if (at_op(")")) break;
                open.children.push_back(at_op("*") ? parse_star_expr() : parse_namedexpr());
            }
            expect_op(")");
            close(open);
            return open;
        }
        expect_op(")");
        return first;  // plain parenthesized expression
    }

    Node parse_list_atom() {
        Node node = make(NodeKind::ListDisplay);
        expect_op("[");
        if (at_op("]")) {
            advance();
            close(node);
            return node;
        }
        Node first = at_op("*") ? parse_star_expr() : parse_namedexpr();
        if (at_word("for") || (at_word("async") && peek(1).text == "for")) {
            Node comp = parse_comprehension_tail(std::move(first), "list");
            expect_op("]");
            return comp;
        }
        node.children.push_back(std::move(first));
        while (consume_op(",")) {
            if (at_op("]")) break;
            node.children.push_back(at_op("*") ? parse_star_expr() : parse_namedexpr());
        }
        expect_op("]");
        close(node);
        return node;
    }

    Node parse_brace_atom() {
        Node node = make(NodeKind::DictDisplay);
        expect_op("{");
        if (at_op("}")) {
            advance();
            close(node);
            return node;  // empty dict
        }
        if (at_op("**")) {
            while (true) {
                if (at_op("**")) {
                    Node unpack = make(NodeKind::DictUnpack);
                    advance();
                    unpack.children.push_back(parse_or());
                    close(unpack);
                    node.children.push_back(std::move(unpack));
                } else {
                    node.children.push_back(parse_dict_item());
                }
                if (!consume_op(",")) break;
                if (at_op("}")) break;
            }
            expect_op("}");
            close(node);
            return node;
        }
        Node first = at_op("*") ? parse_star_expr() : parse_namedexpr();
        if (at_op(":")) {
            advance();
            Node item = make(NodeKind::DictItem);
            item.span = first.span;
            item.children.push_back(std::move(first));
            item.children.push_back(parse_test());
            close(item);
            if (at_word("for") || (at_word("async") && peek(1).text == "for")) {
                Node comp = parse_comprehension_tail(std::move(item), "dict");
                expect_op("}");
                return comp;
            }
            node.children.push_back(std::move(item));
            while (consume_op(",")) {
                if (at_op("}")) break;
                if (at_op("**")) {
                    Node unpack = make(NodeKind::DictUnpack);
                    advance();
                    unpack.children.push_back(parse_or());
                    close(unpack);
                    node.children.push_back(std::move(unpack));
                } else {
                    node.children.push_back(parse_dict_item());
                }
            }
            expect_op("}");
            close(node);
            return node;
        }
        // set display or set comprehension
        node.kind = NodeKind::SetDisplay;
        if (at_word("for") || (at_word("async") && peek(1).text == "for")) {
            Node comp = parse_comprehension_tail(std::move(first), "set");
            expect_op("}");
            return comp;
        }
        node.children.push_back(std::move(first));
        while (consume_op(",")) {
            if (at_op("}")) break;
            node.children.push_back(at_op("*") ? parse_star_expr() : parse_namedexpr());
        }
        expect_op("}");
        close(node);
        return node;
    }

    Node parse_dict_item() {
        Node item = make(NodeKind::DictItem);
        item.children.push_back(parse_test());
        expect_op(":");
        item.children.push_back(parse_test());
        close(item);
        return item;
    }
};

}  // namespace

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Module: return "Module";
        case NodeKind::Block: return "Block";
        case NodeKind::FunctionDef: return "FunctionDef";
        case NodeKind::ClassDef: return "ClassDef";
        case NodeKind::ParamList: return "ParamList";
        case NodeKind::Param: return "Param";
        case NodeKind::DecoratorList: return "DecoratorList";
        case NodeKind::If: return "If";
        case NodeKind::While: return "While";
        case NodeKind::For: return "For";
        case NodeKind::With: return "With";
        case NodeKind::WithItem: return "WithItem";
        case NodeKind::Try: return "Try";
        case NodeKind::Handler: return "Handler";
        case NodeKind::Return: return "Return";
        case NodeKind::Pass: return "Pass";
        case NodeKind::Break: return "Break";
        case NodeKind::Continue: return "Continue";
        case NodeKind::Delete: return "Delete";
        case NodeKind::Assert: return "Assert";
        case NodeKind::Raise: return "Raise";
        case NodeKind::Global: return "Global";
        case NodeKind::Nonlocal: return "Nonlocal";
        case NodeKind::Import: return "Import";
        case NodeKind::ImportFrom: return "ImportFrom";
        case NodeKind::Alias: return "Alias";
        case NodeKind::Assign: return "Assign";
        case NodeKind::AugAssign: return "AugAssign";
        case NodeKind::AnnAssign: return "AnnAssign";
        case NodeKind::ExprStmt: return "ExprStmt";
        case NodeKind::Name: return "Name";
        case NodeKind::NumberLit: return "NumberLit";
        case NodeKind::StringLit: return "StringLit";
        case NodeKind::FStringLit: return "FStringLit";
        case NodeKind::BoolLit: return "BoolLit";
        case NodeKind::NoneLit: return "NoneLit";
        case NodeKind::EllipsisLit: return "EllipsisLit";
        case NodeKind::Tuple: return "Tuple";
        case NodeKind::ListDisplay: return "ListDisplay";
        case NodeKind::SetDisplay: return "SetDisplay";
        case NodeKind::DictDisplay: return "DictDisplay";
        case NodeKind::DictItem: return "DictItem";
        case NodeKind::DictUnpack: return "DictUnpack";
        case NodeKind::Call: return "Call";
        case NodeKind::Arg: return "Arg";
        case NodeKind::Keyword: return "Keyword";
        case NodeKind::StarArg: return "StarArg";
        case NodeKind::DoubleStarArg: return "DoubleStarArg";
        case NodeKind::Attribute: return "Attribute";
        case NodeKind::Subscript: return "Subscript";
        case NodeKind::Slice: return "Slice";
        case NodeKind::Empty: return "Empty";
        case NodeKind::BinOp: return "BinOp";
        case NodeKind::UnaryOp: return "UnaryOp";
        case NodeKind::BoolOp: return "BoolOp";
        case NodeKind::Compare: return "Compare";
        case NodeKind::CompareOp: return "CompareOp";
        case NodeKind::Conditional: return "Conditional";
        case NodeKind::NamedExpr: return "NamedExpr";
        case NodeKind::Lambda: return "Lambda";
        case NodeKind::Comprehension: return "Comprehension";
        case NodeKind::CompFor: return "CompFor";
        case NodeKind::CompIf: return "CompIf";
        case NodeKind::Starred: return "Starred";
        case NodeKind::Yield: return "Yield";
        case NodeKind::Await: return "Await";
    }
    return "Unknown";
}

std::size_t count_nodes(const Node& root, NodeKind kind) {
    std::size_t count = root.kind == kind ? 1 : 0;
    for (const Node& child : root.children) count += count_nodes(child, kind);
    return count;
}

ParseOutcome parse_subject_source(std::string_view text) {
    LexResult lex = lex_source(text);
    if (lex.failure) return *lex.failure;
    Parser parser(lex.tokens);
    try {
        return parser.parse_module();
    } catch (const ParseAbort& abort) {
        return ParseFailure{abort.line, abort.col, abort.message};
    }
}

}  // namespace fairnets::py

#include "fairnets/extract.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <utility>

#include "fairnets/py/lexer.hpp"

namespace fairnets::extract {

namespace {

using py::Node;
using py::NodeKind;

// ---------------------------------------------------------------------------
// Value rendering

void append_json_string(std::string& out, std::string_view text) {
    static const char* hex = "0123456789ABCDEF";
    out.push_back('"');
    for (unsigned char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default:
                if (c < 0x20) {
                    out += "\\u00";
                    out += hex[c >> 4];
                    out += hex[c & 0xf];
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out.push_back('"');
}

std::string render_real(double value) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) return "0";
    return std::string(buffer, end);
}

void render_into(std::string& out, const LiteralValue& v) {
    switch (v.kind) {
        case LiteralValue::Kind::Text:
        case LiteralValue::Kind::Opaque:
            append_json_string(out, v.text);
            break;
        case LiteralValue::Kind::Integer:
            out += std::to_string(v.integer);
            break;
        case LiteralValue::Kind::Real:
            out += render_real(v.real);
            break;
        case LiteralValue::Kind::Boolean:
            out += v.boolean ? "true" : "false";
            break;
        case LiteralValue::Kind::None:
            out += "null";
            break;
        case LiteralValue::Kind::List: {
            out.push_back('[');
            for (std::size_t i = 0; i < v.items.size(); ++i) {
                if (i) out += ", ";
                render_into(out, v.items[i]);
            }
            out.push_back(']');
            break;
        }
        case LiteralValue::Kind::Map: {
            std::vector<std::pair<std::string, const LiteralValue*>> entries;
            for (std::size_t i = 0; i + 1 < v.items.size(); i += 2) {
                const LiteralValue& key = v.items[i];
                std::string rendered =
                    key.kind == LiteralValue::Kind::Text ? key.text : render_value(key);
                entries.emplace_back(std::move(rendered), &v.items[i + 1]);
            }
            std::stable_sort(entries.begin(), entries.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            out.push_back('{');
            bool first = true;
            for (const auto& [key, value] : entries) {
                if (!first) out += ", ";
                first = false;
                append_json_string(out, key);
                out += ": ";
                render_into(out, *value);
            }
            out.push_back('}');
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Number folding

std::optional<LiteralValue> fold_number(std::string_view raw) {
    std::string s;
    s.reserve(raw.size());
    for (char c : raw) {
        if (c != '_') s.push_back(c);
    }
    if (s.empty()) return std::nullopt;
    if (s.back() == 'j' || s.back() == 'J') return std::nullopt;  // imaginary
    errno = 0;
    if (s.size() > 2 && s[0] == '0' &&
        (s[1] == 'x' || s[1] == 'X' || s[1] == 'o' || s[1] == 'O' || s[1] == 'b' || s[1] == 'B')) {
        int base = (s[1] == 'x' || s[1] == 'X') ? 16 : (s[1] == 'o' || s[1] == 'O') ? 8 : 2;
        char* end = nullptr;
        long long v = std::strtoll(s.c_str() + 2, &end, base);
        if (errno == ERANGE || end != s.c_str() + s.size()) return std::nullopt;
        return LiteralValue::make_integer(v);
    }
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos) {
        char* end = nullptr;
        double d = std::strtod(s.c_str(), &end);
        if (errno == ERANGE || end != s.c_str() + s.size()) return std::nullopt;
        return LiteralValue::make_real(d);
    }
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno == ERANGE || end != s.c_str() + s.size()) return std::nullopt;
    return LiteralValue::make_integer(v);
}

std::optional<std::int64_t> checked_arith(std::int64_t a, std::int64_t b, char op) {
    __int128 wide;
    switch (op) {
        case '+': wide = static_cast<__int128>(a) + b; break;
        case '-': wide = static_cast<__int128>(a) - b; break;
        case '*': wide = static_cast<__int128>(a) * b; break;
        default: return std::nullopt;
    }
    if (wide > INT64_MAX || wide < INT64_MIN) return std::nullopt;
    return static_cast<std::int64_t>(wide);
}

bool is_numeric(const LiteralValue& v) {
    return v.kind == LiteralValue::Kind::Integer || v.kind == LiteralValue::Kind::Real;
}

double as_real(const LiteralValue& v) {
    return v.kind == LiteralValue::Kind::Integer ? static_cast<double>(v.integer) : v.real;
}

// ---------------------------------------------------------------------------
// UTF-8 sanitizing

int utf8_sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 0;
}

std::string sanitize_utf8(std::string_view in, bool& lossy) {
    std::string out;
    out.reserve(in.size());
    lossy = false;
    std::size_t i = 0;
    while (i < in.size()) {
        unsigned char lead = static_cast<unsigned char>(in[i]);
        int len = utf8_sequence_length(lead);
        if (len == 0) {
            out.push_back('?');
            lossy = true;
            ++i;
            continue;
        }
        if (len == 1) {
            out.push_back(in[i]);
            ++i;
            continue;
        }
        bool ok = i + static_cast<std::size_t>(len) <= in.size();
        for (int k = 1; ok && k < len; ++k) {
            if ((static_cast<unsigned char>(in[i + static_cast<std::size_t>(k)]) & 0xC0) != 0x80) {
                ok = false;
            }
        }
        if (!ok) {
            out.push_back('?');
            lossy = true;
            ++i;
            continue;
        }
        out.append(in.substr(i, static_cast<std::size_t>(len)));
        i += static_cast<std::size_t>(len);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LiteralValue

LiteralValue LiteralValue::make_text(std::string value) {
    LiteralValue v;
    v.kind = Kind::Text;
    v.text = std::move(value);
    return v;
}
LiteralValue LiteralValue::make_integer(std::int64_t value) {
    LiteralValue v;
    v.kind = Kind::Integer;
    v.integer = value;
    return v;
}
LiteralValue LiteralValue::make_real(double value) {
    LiteralValue v;
    v.kind = Kind::Real;
    v.real = value;
    return v;
}
LiteralValue LiteralValue::make_boolean(bool value) {
    LiteralValue v;
    v.kind = Kind::Boolean;
    v.boolean = value;
    return v;
}
LiteralValue LiteralValue::make_none() {
    LiteralValue v;
    v.kind = Kind::None;
    return v;
}
LiteralValue LiteralValue::make_list(std::vector<LiteralValue> elements) {
    LiteralValue v;
    v.kind = Kind::List;
    v.items = std::move(elements);
    return v;
}
LiteralValue LiteralValue::make_map(std::vector<LiteralValue> flat_pairs) {
    LiteralValue v;
    v.kind = Kind::Map;
    v.items = std::move(flat_pairs);
    return v;
}
LiteralValue LiteralValue::opaque(std::string source) {
    LiteralValue v;
    v.kind = Kind::Opaque;
    v.text = std::move(source);
    return v;
}

std::string render_value(const LiteralValue& value) {
    std::string out;
    render_into(out, value);
    return out;
}

std::string render_keywords(const std::vector<std::pair<std::string, LiteralValue>>& keywords) {
    std::vector<std::pair<std::string, const LiteralValue*>> sorted;
    sorted.reserve(keywords.size());
    for (const auto& [name, value] : keywords) {
        auto it = std::find_if(sorted.begin(), sorted.end(),
                               [&](const auto& e) { return e.first == name; });
        if (it != sorted.end()) {
            it->second = &value;  // duplicate keyword: last one wins
        } else {
            sorted.emplace_back(name, &value);
        }
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out = "{";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) out += ", ";
        append_json_string(out, sorted[i].first);
        out += ": ";
        render_into(out, *sorted[i].second);
    }
    out += "}";
    return out;
}

// ---------------------------------------------------------------------------
// SourceText

SourceText::SourceText(std::string_view text) : text_(py::normalize_source(text)) {
    line_offsets_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
        if (text_[i] == '\n') line_offsets_.push_back(i + 1);
    }
}

std::string SourceText::slice(const py::Span& span) const {
    auto offset = [&](int line, int col) -> std::size_t {
        if (line < 1) return 0;
        std::size_t line_index = static_cast<std::size_t>(line - 1);
        if (line_index >= line_offsets_.size()) return text_.size();
        std::size_t at = line_offsets_[line_index] + static_cast<std::size_t>(col > 0 ? col - 1 : 0);
        return std::min(at, text_.size());
    };
    std::size_t from = offset(span.line, span.col);
    std::size_t to = offset(span.end_line, span.end_col);
    if (to < from) to = from;
    return text_.substr(from, to - from);
}

// ---------------------------------------------------------------------------
// StaticEnv

const LiteralValue* StaticEnv::lookup(std::string_view name) const {
    auto it = bindings_.find(name);
    if (it != bindings_.end()) return &it->second;
    return parent_ ? parent_->lookup(name) : nullptr;
}

void StaticEnv::bind(std::string name, LiteralValue value) {
    bindings_.insert_or_assign(std::move(name), std::move(value));
}

// ---------------------------------------------------------------------------
// Expression folding

LiteralValue resolve_expression(const Node& node, const StaticEnv& env, const SourceText& source) {
    auto opaque_here = [&] { return LiteralValue::opaque(source.slice(node.span)); };
    switch (node.kind) {
        case NodeKind::NumberLit: {
            auto folded = fold_number(node.text);
            return folded ? *folded : opaque_here();
        }
        case NodeKind::StringLit:
            return LiteralValue::make_text(node.text);
        case NodeKind::BoolLit:
            return LiteralValue::make_boolean(node.text == "True");
        case NodeKind::NoneLit:
            return LiteralValue::make_none();
        case NodeKind::Name: {
            const LiteralValue* bound = env.lookup(node.text);
            return bound ? *bound : LiteralValue::opaque(node.text);
        }
        case NodeKind::Tuple:
        case NodeKind::ListDisplay:
        case NodeKind::SetDisplay: {
            std::vector<LiteralValue> elements;
            elements.reserve(node.children.size());
            for (const Node& child : node.children) {
                if (child.kind == NodeKind::Starred) return opaque_here();
                LiteralValue v = resolve_expression(child, env, source);
                if (v.is_opaque()) return opaque_here();
                elements.push_back(std::move(v));
            }
            return LiteralValue::make_list(std::move(elements));
        }
        case NodeKind::DictDisplay: {
            std::vector<LiteralValue> flat;
            flat.reserve(node.children.size() * 2);
            for (const Node& child : node.children) {
                if (child.kind != NodeKind::DictItem) return opaque_here();
                LiteralValue key = resolve_expression(child.children[0], env, source);
                LiteralValue value = resolve_expression(child.children[1], env, source);
                if (key.is_opaque() || value.is_opaque()) return opaque_here();
                flat.push_back(std::move(key));
                flat.push_back(std::move(value));
            }
            return LiteralValue::make_map(std::move(flat));
        }
        case NodeKind::UnaryOp: {
            if (node.text != "+" && node.text != "-") return opaque_here();
            LiteralValue operand = resolve_expression(node.children[0], env, source);
            if (operand.kind == LiteralValue::Kind::Integer) {
                if (node.text == "+") return operand;
                auto negated = checked_arith(0, operand.integer, '-');
                return negated ? LiteralValue::make_integer(*negated) : opaque_here();
            }
            if (operand.kind == LiteralValue::Kind::Real) {
                if (node.text == "-") operand.real = -operand.real;
                return operand;
            }
            return opaque_here();
        }
        case NodeKind::BinOp: {
            if (node.text != "+" && node.text != "-" && node.text != "*") return opaque_here();
            LiteralValue lhs = resolve_expression(node.children[0], env, source);
            LiteralValue rhs = resolve_expression(node.children[1], env, source);
            if (node.text == "+" && lhs.kind == LiteralValue::Kind::Text &&
                rhs.kind == LiteralValue::Kind::Text) {
                return LiteralValue::make_text(lhs.text + rhs.text);
            }
            if (!is_numeric(lhs) || !is_numeric(rhs)) return opaque_here();
            if (lhs.kind == LiteralValue::Kind::Integer &&
                rhs.kind == LiteralValue::Kind::Integer) {
                auto value = checked_arith(lhs.integer, rhs.integer, node.text[0]);
                return value ? LiteralValue::make_integer(*value) : opaque_here();
            }
            double a = as_real(lhs), b = as_real(rhs);
            double r = node.text == "+" ? a + b : node.text == "-" ? a - b : a * b;
            return LiteralValue::make_real(r);
        }
        default:
            return opaque_here();
    }
}

// ---------------------------------------------------------------------------
// Static environment construction

namespace {

// Names (re)bound anywhere in a statement list, functions/classes excluded.
void collect_assigned_names(const std::vector<Node>& stmts, std::vector<std::string>& out) {
    for (const Node& stmt : stmts) {
        switch (stmt.kind) {
            case NodeKind::Assign: {
                for (std::size_t t = 0; t + 1 < stmt.children.size(); ++t) {
                    const Node& target = stmt.children[t];
                    if (target.kind == NodeKind::Name) out.push_back(target.text);
                    if (target.kind == NodeKind::Tuple) {
                        for (const Node& el : target.children) {
                            if (el.kind == NodeKind::Name) out.push_back(el.text);
                        }
                    }
                }
                break;
            }
            case NodeKind::AnnAssign:
            case NodeKind::AugAssign:
                if (stmt.children[0].kind == NodeKind::Name) out.push_back(stmt.children[0].text);
                break;
            case NodeKind::If:
            case NodeKind::While:
            case NodeKind::For:
            case NodeKind::With:
            case NodeKind::Try:
                for (const Node& child : stmt.children) {
                    if (child.kind == NodeKind::Block) collect_assigned_names(child.children, out);
                    if (child.kind == NodeKind::Handler && !child.children.empty()) {
                        collect_assigned_names(child.children.back().children, out);
                    }
                }
                break;
            default:
                break;
        }
    }
}

struct EnvBuilder {
    StaticEnv& env;
    const SourceText& source;
    std::vector<Diagnostic>* diagnostics;

    void note(const py::Span& span, std::string code, std::string message) {
        if (diagnostics) {
            diagnostics->push_back(
                {Diagnostic::Severity::Warning, span, std::move(code), std::move(message)});
        }
    }

    void bind_target(const Node& target, LiteralValue value, const Node& value_node,
                     bool force_opaque) {
        if (force_opaque && !value.is_opaque()) {
            value = LiteralValue::opaque(source.slice(value_node.span));
        }
        if (target.kind == NodeKind::Name) {
            env.bind(target.text, std::move(value));
            return;
        }
        if (target.kind == NodeKind::Tuple) {
            bool pairwise = value.kind == LiteralValue::Kind::List &&
                            value.items.size() == target.children.size();
            for (std::size_t i = 0; i < target.children.size(); ++i) {
                const Node& element = target.children[i];
                if (element.kind != NodeKind::Name) continue;
                if (pairwise) {
                    env.bind(element.text, value.items[i]);
                } else {
                    env.bind(element.text, LiteralValue::opaque(source.slice(value_node.span)));
                }
            }
        }
        // attribute/subscript targets carry no static binding
    }

    void walk(const std::vector<Node>& stmts, bool in_loop) {
        for (const Node& stmt : stmts) {
            switch (stmt.kind) {
                case NodeKind::Assign: {
                    const Node& value_node = stmt.children.back();
                    LiteralValue value = resolve_expression(value_node, env, source);
                    for (std::size_t t = 0; t + 1 < stmt.children.size(); ++t) {
                        bind_target(stmt.children[t], value, value_node, in_loop);
                    }
                    break;
                }
                case NodeKind::AnnAssign: {
                    if (stmt.children.size() == 3) {
                        const Node& value_node = stmt.children[2];
                        LiteralValue value = resolve_expression(value_node, env, source);
                        bind_target(stmt.children[0], std::move(value), value_node, in_loop);
                    }
                    break;
                }
                case NodeKind::AugAssign: {
                    if (stmt.children[0].kind == NodeKind::Name) {
                        env.bind(stmt.children[0].text,
                                 LiteralValue::opaque(source.slice(stmt.span)));
                    }
                    break;
                }
                case NodeKind::If: {
                    // children: cond, then-Block, optional else-Block
                    std::vector<const Node*> branches;
                    for (std::size_t c = 1; c < stmt.children.size(); ++c) {
                        if (stmt.children[c].kind == NodeKind::Block) {
                            branches.push_back(&stmt.children[c]);
                        }
                    }
                    if (branches.size() > 1) {
                        std::vector<std::string> seen;
                        std::vector<std::string> conflicted;
                        for (const Node* branch : branches) {
                            std::vector<std::string> names;
                            collect_assigned_names(branch->children, names);
                            std::sort(names.begin(), names.end());
                            names.erase(std::unique(names.begin(), names.end()), names.end());
                            for (const std::string& n : names) {
                                if (std::find(seen.begin(), seen.end(), n) != seen.end()) {
                                    conflicted.push_back(n);
                                } else {
                                    seen.push_back(n);
                                }
                            }
                        }
                        for (const std::string& n : conflicted) {
                            note(stmt.span, "branch-conflict",
                                 "'" + n + "' is assigned in more than one branch; "
                                 "the last textual assignment wins");
                        }
                    }
                    for (const Node* branch : branches) walk(branch->children, in_loop);
                    break;
                }
                case NodeKind::For: {
                    // target, iter, body, optional else — loop bindings are
                    // iteration-dependent, so they fold to Opaque here.
                    bind_target(stmt.children[0],
                                LiteralValue::opaque(source.slice(stmt.children[1].span)),
                                stmt.children[1], true);
                    for (std::size_t c = 2; c < stmt.children.size(); ++c) {
                        if (stmt.children[c].kind == NodeKind::Block) {
                            walk(stmt.children[c].children, true);
                        }
                    }
                    break;
                }
                case NodeKind::While: {
                    for (std::size_t c = 1; c < stmt.children.size(); ++c) {
                        if (stmt.children[c].kind == NodeKind::Block) {
                            walk(stmt.children[c].children, true);
                        }
                    }
                    break;
                }
                case NodeKind::With: {
                    for (const Node& child : stmt.children) {
                        if (child.kind == NodeKind::WithItem && child.children.size() == 2) {
                            bind_target(child.children[1],
                                        LiteralValue::opaque(source.slice(child.children[0].span)),
                                        child.children[0], true);
                        }
                        if (child.kind == NodeKind::Block) walk(child.children, in_loop);
                    }
                    break;
                }
                case NodeKind::Try: {
                    for (const Node& child : stmt.children) {
                        if (child.kind == NodeKind::Block) walk(child.children, in_loop);
                        if (child.kind == NodeKind::Handler && !child.children.empty() &&
                            child.children.back().kind == NodeKind::Block) {
                            walk(child.children.back().children, in_loop);
                        }
                    }
                    break;
                }
                default:
                    break;  // defs/classes are separate scopes; other statements bind nothing
            }
        }
    }
};

}  // namespace

StaticEnv build_static_environment(const Node& scope_block, const StaticEnv* parent,
                                   const SourceText& source,
                                   std::vector<Diagnostic>* diagnostics) {
    StaticEnv env(parent);
    EnvBuilder builder{env, source, diagnostics};
    builder.walk(scope_block.children, false);
    return env;
}

StaticEnv build_static_environment(const Node& module_tree, std::string_view source_text) {
    SourceText source(source_text);
    return build_static_environment(module_tree, nullptr, source, nullptr);
}

// ---------------------------------------------------------------------------
// Imports

namespace {

void collect_imports(const Node& node, ImportTable& table) {
    if (node.kind == NodeKind::Import) {
        for (const Node& alias : node.children) {
            if (alias.kind != NodeKind::Alias) continue;
            if (!alias.children.empty()) {
                table.aliases[alias.children[0].text] = alias.text;
            } else {
                std::string root = alias.text.substr(0, alias.text.find('.'));
                table.aliases[root] = root;
            }
        }
        return;
    }
    if (node.kind == NodeKind::ImportFrom) {
        for (const Node& alias : node.children) {
            if (alias.kind != NodeKind::Alias) continue;
            if (alias.text == "*") {
                table.has_star_import = true;
                table.star_modules.push_back(node.text);
                continue;
            }
            std::string qualified =
                node.text.empty() ? alias.text : node.text + "." + alias.text;
            const std::string& local =
                alias.children.empty() ? alias.text : alias.children[0].text;
            table.aliases[local] = qualified;
        }
        return;
    }
    for (const Node& child : node.children) collect_imports(child, table);
}

}  // namespace

ImportTable build_import_table(const Node& module_tree) {
    ImportTable table;
    collect_imports(module_tree, table);
    return table;
}

std::optional<std::string> normalize_framework_path(std::string_view dotted) {
    std::string_view s = dotted;
    if (s.substr(0, 11) == "tensorflow.") {
        s.remove_prefix(11);
        if (s.substr(0, 7) == "python.") s.remove_prefix(7);
    }
    if (s == "keras" || s.substr(0, 6) == "keras.") return std::string(s);
    return std::nullopt;
}

std::optional<std::string> resolve_callee_path(const Node& callee, const ImportTable& imports) {
    std::vector<std::string> parts;
    const Node* at = &callee;
    while (at->kind == NodeKind::Attribute) {
        parts.push_back(at->text);
        at = &at->children[0];
    }
    if (at->kind != NodeKind::Name) return std::nullopt;
    std::reverse(parts.begin(), parts.end());
    const std::string& base = at->text;

    auto join_onto = [&](std::string head) {
        for (const std::string& part : parts) {
            head += ".";
            head += part;
        }
        return head;
    };

    auto alias = imports.aliases.find(base);
    if (alias != imports.aliases.end()) return join_onto(alias->second);
    if (imports.has_star_import) {
        for (const std::string& module : imports.star_modules) {
            std::string candidate = join_onto(module + "." + base);
            if (normalize_framework_path(candidate)) return candidate;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Layer calls

namespace {

std::string last_segment(std::string_view dotted) {
    std::size_t at = dotted.rfind('.');
    return std::string(at == std::string_view::npos ? dotted : dotted.substr(at + 1));
}

bool has_segment(std::string_view dotted, std::string_view segment) {
    std::size_t start = 0;
    while (start <= dotted.size()) {
        std::size_t end = dotted.find('.', start);
        if (end == std::string_view::npos) end = dotted.size();
        if (dotted.substr(start, end - start) == segment) return true;
        start = end + 1;
    }
    return false;
}

}  // namespace

std::optional<ExtractedLayer> extract_layer_call(const Node& call, const StaticEnv& env,
                                                 const ImportTable& imports,
                                                 const vocab::Vocabulary& vocabulary,
                                                 const SourceText& source,
                                                 std::vector<Diagnostic>& diagnostics) {
    if (call.kind != NodeKind::Call || call.children.empty()) return std::nullopt;
    const Node& callee = call.children[0];

    std::string written_name;
    const vocab::LayerClass* resolved = nullptr;
    bool layerish_path = false;

    if (callee.kind == NodeKind::Name &&
        imports.aliases.find(callee.text) == imports.aliases.end()) {
        // A star import may bring layer constructors into scope unqualified;
        // only vocabulary names are accepted to avoid false positives, since
        // the module path is our guess rather than the author's spelling.
        if (!imports.has_star_import) return std::nullopt;
        written_name = callee.text;
        resolved = vocabulary.resolve_layer_class(written_name);
        if (!resolved) return std::nullopt;
    } else if (auto path = resolve_callee_path(callee, imports)) {
        auto framework = normalize_framework_path(*path);
        if (!framework) return std::nullopt;
        written_name = last_segment(*framework);
        resolved = vocabulary.resolve_layer_class(written_name);
        layerish_path = has_segment(*framework, "layers");
    } else {
        return std::nullopt;
    }

    // The functional entry tensor is not a layer of the architecture.
    if (written_name == "Input") return std::nullopt;
    if (!resolved && !layerish_path) return std::nullopt;

    ExtractedLayer layer;
    layer.name = resolved ? resolved->canonical_name : written_name;
    if (resolved) layer.layer_class = *resolved;

    if (!resolved) {
        diagnostics.push_back({Diagnostic::Severity::Warning, call.span, "unknown-layer",
                               "'" + written_name + "' is not in the layer vocabulary; "
                               "kept as a generic layer"});
    }

    auto note_opaque = [&](const py::Span& span, const LiteralValue& v) {
        if (v.is_opaque()) {
            diagnostics.push_back({Diagnostic::Severity::Info, span, "opaque-value",
                                   "argument does not fold to a literal: " + v.text});
        }
    };

    for (std::size_t i = 1; i < call.children.size(); ++i) {
        const Node& arg = call.children[i];
        switch (arg.kind) {
            case NodeKind::Arg: {
                LiteralValue v = resolve_expression(arg.children[0], env, source);
                note_opaque(arg.span, v);
                layer.positional_params.push_back(std::move(v));
                break;
            }
            case NodeKind::Keyword: {
                LiteralValue v = resolve_expression(arg.children[0], env, source);
                note_opaque(arg.span, v);
                layer.keywords.emplace_back(arg.text, std::move(v));
                break;
            }
            case NodeKind::StarArg: {
                LiteralValue v = LiteralValue::opaque(source.slice(arg.span));
                diagnostics.push_back({Diagnostic::Severity::Info, arg.span, "opaque-value",
                                       "unpacked positional arguments: " + v.text});
                layer.positional_params.push_back(std::move(v));
                break;
            }
            case NodeKind::DoubleStarArg:
                diagnostics.push_back({Diagnostic::Severity::Warning, arg.span,
                                       "unsupported-argument",
                                       "keyword unpacking cannot be resolved statically"});
                break;
            default:
                break;
        }
    }
    return layer;
}

// ---------------------------------------------------------------------------
// Compile configuration

namespace {

struct CompileResolver {
    const StaticEnv& env;
    const ImportTable& imports;
    const vocab::Vocabulary& vocabulary;
    const SourceText& source;
    std::vector<Diagnostic>& diagnostics;

    // Shared resolution for optimizer= and loss= values: text literal,
    // static name, framework attribute reference, or constructor call.
    std::optional<std::string> resolve(const Node& value, bool optimizer_slot) {
        LiteralValue folded = resolve_expression(value, env, source);
        if (folded.kind == LiteralValue::Kind::Text) return folded.text;

        if (value.kind == NodeKind::Name || value.kind == NodeKind::Attribute) {
            if (auto path = resolve_callee_path(value, imports)) {
                if (auto framework = normalize_framework_path(*path)) {
                    return last_segment(*framework);
                }
            }
            return std::nullopt;
        }
        if (value.kind == NodeKind::Call && !value.children.empty()) {
            std::optional<std::string> name;
            if (auto path = resolve_callee_path(value.children[0], imports)) {
                if (auto framework = normalize_framework_path(*path)) {
                    name = last_segment(*framework);
                }
            } else if (value.children[0].kind == NodeKind::Name) {
                name = value.children[0].text;
            }
            if (!name) return std::nullopt;
            if (optimizer_slot && !vocabulary.resolve_optimizer(*name)) return std::nullopt;
            if (!optimizer_slot && !vocabulary.resolve_loss(*name)) return std::nullopt;
            for (std::size_t i = 1; i < value.children.size(); ++i) {
                const Node& arg = value.children[i];
                if (arg.kind != NodeKind::Keyword) continue;
                LiteralValue v = resolve_expression(arg.children[0], env, source);
                diagnostics.push_back({Diagnostic::Severity::Info, arg.span,
                                       optimizer_slot ? "optimizer-config" : "loss-config",
                                       *name + " " + arg.text + "=" + render_value(v)});
            }
            return name;
        }
        return std::nullopt;
    }
};

bool is_method_call_on(const Node& stmt, std::string_view method, std::string_view var,
                       const Node** call_out) {
    if (stmt.kind != NodeKind::ExprStmt || stmt.children.empty()) return false;
    const Node& expr = stmt.children[0];
    if (expr.kind != NodeKind::Call || expr.children.empty()) return false;
    const Node& callee = expr.children[0];
    if (callee.kind != NodeKind::Attribute || callee.text != method) return false;
    if (callee.children[0].kind != NodeKind::Name || callee.children[0].text != var) return false;
    *call_out = &expr;
    return true;
}

void apply_compile_call(const Node& call, CompileResolver& resolver, CompileConfig& config) {
    auto handle = [&](const Node& value, bool optimizer_slot, const py::Span& span) {
        auto resolved = resolver.resolve(value, optimizer_slot);
        if (resolved) {
            (optimizer_slot ? config.optimizer : config.loss) = *resolved;
        } else {
            config.diagnostics.push_back(
                {Diagnostic::Severity::Warning, span, "dynamic-value",
                 std::string(optimizer_slot ? "optimizer" : "loss") +
                     " does not resolve to a known value"});
        }
    };
    std::size_t positional = 0;
    for (std::size_t i = 1; i < call.children.size(); ++i) {
        const Node& arg = call.children[i];
        if (arg.kind == NodeKind::Keyword) {
            if (arg.text == "optimizer") handle(arg.children[0], true, arg.span);
            if (arg.text == "loss") handle(arg.children[0], false, arg.span);
        } else if (arg.kind == NodeKind::Arg) {
            // compile(optimizer, loss, ...) positional form
            if (positional == 0) handle(arg.children[0], true, arg.span);
            if (positional == 1) handle(arg.children[0], false, arg.span);
            ++positional;
        }
    }
}

void find_compile_calls(const std::vector<Node>& stmts, std::string_view model_var,
                        CompileResolver& resolver, CompileConfig& config) {
    for (const Node& stmt : stmts) {
        const Node* call = nullptr;
        if (is_method_call_on(stmt, "compile", model_var, &call)) {
            apply_compile_call(*call, resolver, config);
            continue;
        }
        for (const Node& child : stmt.children) {
            if (child.kind == NodeKind::Block) {
                find_compile_calls(child.children, model_var, resolver, config);
            }
            if (child.kind == NodeKind::Handler && !child.children.empty() &&
                child.children.back().kind == NodeKind::Block) {
                find_compile_calls(child.children.back().children, model_var, resolver, config);
            }
        }
    }
}

}  // namespace

CompileConfig extract_compile_config(const Node& scope_block, const StaticEnv& env,
                                     const ImportTable& imports, std::string_view model_var,
                                     const vocab::Vocabulary& vocabulary,
                                     const SourceText& source) {
    CompileConfig config;
    CompileResolver resolver{env, imports, vocabulary, source, config.diagnostics};
    find_compile_calls(scope_block.children, model_var, resolver, config);
    return config;
}

// ---------------------------------------------------------------------------
// Model extraction

namespace {

constexpr std::size_t kLoopUnrollBound = 64;

struct Application {
    ExtractedLayer layer;
    std::vector<Diagnostic> diagnostics;
};

struct PendingModel {
    ExtractedModel model;
    std::size_t creation_index = 0;
    bool open = true;
};

struct FileWalk {
    const vocab::Vocabulary& vocabulary;
    const SourceText& source;
    const ImportTable& imports;
    std::vector<std::pair<std::size_t, ExtractedModel>> collected;
    std::vector<Diagnostic> file_diagnostics;
    std::size_t creation_counter = 0;

    // True when a call constructs the named framework entry point.
    bool is_constructor(const Node& call, std::string_view ctor_name) const {
        if (call.kind != NodeKind::Call || call.children.empty()) return false;
        auto path = resolve_callee_path(call.children[0], imports);
        if (path) {
            auto framework = normalize_framework_path(*path);
            return framework && last_segment(*framework) == ctor_name;
        }
        const Node& callee = call.children[0];
        return imports.has_star_import && callee.kind == NodeKind::Name &&
               callee.text == ctor_name;
    }

    // Syntactic check used to flag unsupported dynamic loops that clearly
    // manipulate models.
    bool contains_model_ops(const std::vector<Node>& stmts) const {
        for (const Node& stmt : stmts) {
            if (subtree_has_model_ops(stmt)) return true;
        }
        return false;
    }

    bool subtree_has_model_ops(const Node& node) const {
        if (node.kind == NodeKind::Call && !node.children.empty()) {
            const Node& callee = node.children[0];
            if (callee.kind == NodeKind::Attribute &&
                (callee.text == "add" || callee.text == "compile")) {
                return true;
            }
            if (callee.kind == NodeKind::Call) return true;  // layer application shape
            if (is_constructor(node, "Sequential") || is_constructor(node, "Model")) return true;
        }
        for (const Node& child : node.children) {
            if (subtree_has_model_ops(child)) return true;
        }
        return false;
    }

    void walk_scope(const std::vector<Node>& stmts, StaticEnv& env) {
        ScopeState state{*this, env};
        state.walk(stmts);
        state.finish();
    }

    struct ScopeState {
        FileWalk& file;
        StaticEnv& env;
        std::vector<PendingModel> builders;
        std::map<std::string, std::size_t> open_by_var;
        std::vector<Application> pending_apps;

        ScopeState(FileWalk& f, StaticEnv& e) : file(f), env(e) {}

        PendingModel& new_builder(std::string var) {
            PendingModel pending;
            pending.model.variable = var;
            pending.creation_index = file.creation_counter++;
            builders.push_back(std::move(pending));
            if (!var.empty()) open_by_var[var] = builders.size() - 1;
            return builders.back();
        }

        void close_var(const std::string& var) {
            auto it = open_by_var.find(var);
            if (it == open_by_var.end()) return;
            builders[it->second].open = false;
            open_by_var.erase(it);
        }

        PendingModel* open_model(const std::string& var) {
            auto it = open_by_var.find(var);
            return it == open_by_var.end() ? nullptr : &builders[it->second];
        }

        void append_layer(ExtractedModel& model, ExtractedLayer layer,
                          std::vector<Diagnostic> notes) {
            layer.position = static_cast<int>(model.layers.size());
            model.layers.push_back(std::move(layer));
            for (Diagnostic& d : notes) model.diagnostics.push_back(std::move(d));
        }

        // Pattern (a): Sequential([...]) with a literal list of layer calls.
        void fill_from_layer_list(PendingModel& pending, const Node& ctor_call) {
            for (std::size_t i = 1; i < ctor_call.children.size(); ++i) {
                const Node& arg = ctor_call.children[i];
                if (arg.kind != NodeKind::Arg) continue;
                const Node& value = arg.children[0];
                if (value.kind != NodeKind::ListDisplay && value.kind != NodeKind::Tuple) {
                    pending.model.diagnostics.push_back(
                        {Diagnostic::Severity::Warning, value.span, "unsupported-pattern",
                         "sequential constructor argument is not a literal layer list"});
                    continue;
                }
                for (const Node& element : value.children) {
                    std::vector<Diagnostic> notes;
                    auto layer = element.kind == NodeKind::Call
                                     ? extract_layer_call(element, env, file.imports,
                                                          file.vocabulary, file.source, notes)
                                     : std::nullopt;
                    if (layer) {
                        append_layer(pending.model, std::move(*layer), std::move(notes));
                    } else {
                        pending.model.diagnostics.push_back(
                            {Diagnostic::Severity::Warning, element.span, "unsupported-pattern",
                             "list element is not a recognizable layer call"});
                    }
                }
            }
        }

        // Pattern (c) bookkeeping: collect layer applications in evaluation
        // order; Sequential/Model constructors nested in expressions become
        // anonymous models.
        void scan_expression(const Node& node) {
            for (const Node& child : node.children) scan_expression(child);
            if (node.kind != NodeKind::Call || node.children.empty()) return;
            if (file.is_constructor(node, "Sequential")) {
                PendingModel& pending = new_builder("");
                fill_from_layer_list(pending, node);
                pending.open = false;
                return;
            }
            if (file.is_constructor(node, "Model")) {
                finalize_functional("", node);
                return;
            }
            const Node& callee = node.children[0];
            if (callee.kind == NodeKind::Call) {
                std::vector<Diagnostic> notes;
                auto layer = extract_layer_call(callee, env, file.imports, file.vocabulary,
                                                file.source, notes);
                if (layer) pending_apps.push_back({std::move(*layer), std::move(notes)});
            }
        }

        void finalize_functional(const std::string& var, const Node& ctor_call) {
            if (!var.empty()) close_var(var);
            PendingModel& pending = new_builder(var);
            if (pending_apps.empty()) {
                pending.model.diagnostics.push_back(
                    {Diagnostic::Severity::Info, ctor_call.span, "no-applications",
                     "functional model without recorded layer applications"});
            }
            for (Application& app : pending_apps) {
                append_layer(pending.model, std::move(app.layer), std::move(app.diagnostics));
            }
            pending_apps.clear();
            if (var.empty()) pending.open = false;
        }

        void handle_assign_value(const std::string& var, const Node& value) {
            if (file.is_constructor(value, "Sequential")) {
                close_var(var);
                PendingModel& pending = new_builder(var);
                fill_from_layer_list(pending, value);
                return;
            }
            if (file.is_constructor(value, "Model")) {
                // Applications written inline in the constructor arguments
                // still precede the model.
                for (std::size_t i = 1; i < value.children.size(); ++i) {
                    scan_expression(value.children[i]);
                }
                finalize_functional(var, value);
                return;
            }
            close_var(var);  // the variable no longer names the model
            scan_expression(value);
        }

        void handle_statement(const Node& stmt) {
            switch (stmt.kind) {
                case NodeKind::Assign: {
                    const Node& value = stmt.children.back();
                    bool handled = false;
                    if (stmt.children.size() == 2 && stmt.children[0].kind == NodeKind::Name) {
                        handle_assign_value(stmt.children[0].text, value);
                        handled = true;
                    }
                    if (!handled) {
                        for (std::size_t t = 0; t + 1 < stmt.children.size(); ++t) {
                            if (stmt.children[t].kind == NodeKind::Name) {
                                close_var(stmt.children[t].text);
                            }
                        }
                        scan_expression(value);
                    }
                    break;
                }
                case NodeKind::AnnAssign:
                    if (stmt.children.size() == 3 && stmt.children[0].kind == NodeKind::Name) {
                        handle_assign_value(stmt.children[0].text, stmt.children[2]);
                    }
                    break;
                case NodeKind::ExprStmt:
                    handle_expression_statement(stmt);
                    break;
                case NodeKind::Return:
                    if (!stmt.children.empty()) scan_expression(stmt.children[0]);
                    break;
                case NodeKind::If:
                    for (std::size_t c = 1; c < stmt.children.size(); ++c) {
                        if (stmt.children[c].kind == NodeKind::Block) {
                            walk(stmt.children[c].children);
                        }
                    }
                    break;
                case NodeKind::For:
                    handle_for(stmt);
                    break;
                case NodeKind::While:
                    for (std::size_t c = 1; c < stmt.children.size(); ++c) {
                        if (stmt.children[c].kind == NodeKind::Block &&
                            file.contains_model_ops(stmt.children[c].children)) {
                            file.file_diagnostics.push_back(
                                {Diagnostic::Severity::Warning, stmt.span, "unsupported-pattern",
                                 "model construction inside a while loop is not unrolled"});
                        }
                    }
                    break;
                case NodeKind::With:
                case NodeKind::Try:
                    for (const Node& child : stmt.children) {
                        if (child.kind == NodeKind::Block) walk(child.children);
                        if (child.kind == NodeKind::Handler && !child.children.empty() &&
                            child.children.back().kind == NodeKind::Block) {
                            walk(child.children.back().children);
                        }
                    }
                    break;
                case NodeKind::FunctionDef: {
                    const Node& body = stmt.children.back();
                    StaticEnv child_env =
                        build_static_environment(body, &env, file.source, &file.file_diagnostics);
                    file.walk_scope(body.children, child_env);
                    break;
                }
                case NodeKind::ClassDef: {
                    // Methods are walked as their own scopes; subclass-style
                    // model definitions themselves are out of contract.
                    const Node& body = stmt.children.back();
                    for (const Node& member : body.children) {
                        if (member.kind == NodeKind::FunctionDef) {
                            const Node& method_body = member.children.back();
                            StaticEnv child_env = build_static_environment(
                                method_body, &env, file.source, &file.file_diagnostics);
                            file.walk_scope(method_body.children, child_env);
                        }
                    }
                    break;
                }
                default:
                    break;
            }
        }

        void handle_expression_statement(const Node& stmt) {
            const Node& expr = stmt.children[0];
            if (expr.kind == NodeKind::Call && !expr.children.empty() &&
                expr.children[0].kind == NodeKind::Attribute &&
                expr.children[0].children[0].kind == NodeKind::Name) {
                const Node& callee = expr.children[0];
                const std::string& var = callee.children[0].text;
                if (callee.text == "add") {
                    if (PendingModel* pending = open_model(var)) {
                        handle_add_call(*pending, expr);
                        return;
                    }
                }
                if (callee.text == "compile") {
                    if (PendingModel* pending = open_model(var)) {
                        CompileConfig config;
                        CompileResolver resolver{env, file.imports, file.vocabulary, file.source,
                                                 config.diagnostics};
                        apply_compile_call(expr, resolver, config);
                        if (config.optimizer) pending->model.optimizer = config.optimizer;
                        if (config.loss) pending->model.loss_function = config.loss;
                        for (Diagnostic& d : config.diagnostics) {
                            pending->model.diagnostics.push_back(std::move(d));
                        }
                        return;
                    }
                }
            }
            scan_expression(expr);
        }

        // Pattern (b): model.add(<layer call>) in textual order.
        void handle_add_call(PendingModel& pending, const Node& call) {
            bool appended = false;
            for (std::size_t i = 1; i < call.children.size(); ++i) {
                const Node& arg = call.children[i];
                if (arg.kind != NodeKind::Arg) continue;
                const Node& value = arg.children[0];
                std::vector<Diagnostic> notes;
                auto layer = value.kind == NodeKind::Call
                                 ? extract_layer_call(value, env, file.imports, file.vocabulary,
                                                      file.source, notes)
                                 : std::nullopt;
                if (layer) {
                    append_layer(pending.model, std::move(*layer), std::move(notes));
                    appended = true;
                } else {
                    pending.model.diagnostics.push_back(
                        {Diagnostic::Severity::Warning, value.span, "unsupported-pattern",
                         "add() argument is not a recognizable layer call"});
                }
            }
            if (!appended && call.children.size() == 1) {
                pending.model.diagnostics.push_back(
                    {Diagnostic::Severity::Warning, call.span, "unsupported-pattern",
                     "add() without arguments"});
            }
        }

        // Literal iteration values for `for <name> in <iterable>`, bounded.
        std::optional<std::vector<LiteralValue>> literal_iteration(const Node& iter) {
            if (iter.kind == NodeKind::Call && !iter.children.empty() &&
                iter.children[0].kind == NodeKind::Name && iter.children[0].text == "range") {
                std::vector<std::int64_t> args;
                for (std::size_t i = 1; i < iter.children.size(); ++i) {
                    if (iter.children[i].kind != NodeKind::Arg) return std::nullopt;
                    LiteralValue v =
                        resolve_expression(iter.children[i].children[0], env, file.source);
                    if (v.kind != LiteralValue::Kind::Integer) return std::nullopt;
                    args.push_back(v.integer);
                }
                std::int64_t start = 0, stop = 0, step = 1;
                if (args.size() == 1) {
                    stop = args[0];
                } else if (args.size() == 2) {
                    start = args[0];
                    stop = args[1];
                } else if (args.size() == 3) {
                    start = args[0];
                    stop = args[1];
                    step = args[2];
                } else {
                    return std::nullopt;
                }
                if (step == 0) return std::nullopt;
                std::vector<LiteralValue> values;
                for (std::int64_t at = start; step > 0 ? at < stop : at > stop; at += step) {
                    values.push_back(LiteralValue::make_integer(at));
                    if (values.size() > kLoopUnrollBound) return std::nullopt;
                }
                return values;
            }
            LiteralValue folded = resolve_expression(iter, env, file.source);
            if (folded.kind == LiteralValue::Kind::List &&
                folded.items.size() <= kLoopUnrollBound) {
                return folded.items;
            }
            return std::nullopt;
        }

        void handle_for(const Node& stmt) {
            const Node& target = stmt.children[0];
            const Node& iter = stmt.children[1];
            const Node* body = nullptr;
            for (std::size_t c = 2; c < stmt.children.size(); ++c) {
                if (stmt.children[c].kind == NodeKind::Block) {
                    body = &stmt.children[c];
                    break;
                }
            }
            if (!body) return;
            auto values = target.kind == NodeKind::Name ? literal_iteration(iter) : std::nullopt;
            if (!values) {
                if (file.contains_model_ops(body->children)) {
                    file.file_diagnostics.push_back(
                        {Diagnostic::Severity::Warning, stmt.span, "unsupported-pattern",
                         "loop bound is not a literal range (or exceeds the unroll bound); "
                         "body skipped"});
                }
                return;
            }
            for (const LiteralValue& value : *values) {
                env.bind(target.text, value);
                walk(body->children);
            }
        }

        void walk(const std::vector<Node>& stmts) {
            for (const Node& stmt : stmts) handle_statement(stmt);
        }

        void finish() {
            if (!pending_apps.empty()) {
                file.file_diagnostics.push_back(
                    {Diagnostic::Severity::Warning, py::Span{}, "unconsumed-applications",
                     std::to_string(pending_apps.size()) +
                         " functional layer application(s) were never consumed by a model "
                         "constructor"});
            }
            for (PendingModel& pending : builders) {
                file.collected.emplace_back(pending.creation_index, std::move(pending.model));
            }
        }
    };
};

}  // namespace

FileExtraction extract_models(std::string_view text, const std::string& source_file,
                              const vocab::Vocabulary& vocabulary) {
    FileExtraction out;
    bool lossy = false;
    std::string clean = sanitize_utf8(text, lossy);
    if (lossy) {
        out.file_diagnostics.push_back({Diagnostic::Severity::Warning, py::Span{}, "lossy-decode",
                                        "source is not valid UTF-8; invalid bytes replaced"});
    }

    py::ParseOutcome outcome = py::parse_subject_source(clean);
    if (const py::ParseFailure* failure = std::get_if<py::ParseFailure>(&outcome)) {
        out.parse_failure = *failure;
        return out;
    }
    const Node& module = std::get<Node>(outcome);

    SourceText source(clean);
    ImportTable imports = build_import_table(module);
    FileWalk walk{vocabulary, source, imports, {}, std::move(out.file_diagnostics), 0};

    StaticEnv module_env =
        build_static_environment(module, nullptr, source, &walk.file_diagnostics);
    walk.walk_scope(module.children, module_env);

    std::sort(walk.collected.begin(), walk.collected.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    int ordinal = 0;
    for (auto& [index, model] : walk.collected) {
        model.source_file = source_file;
        model.model_ordinal = ordinal++;
        out.models.push_back(std::move(model));
    }
    out.file_diagnostics = std::move(walk.file_diagnostics);
    return out;
}

}  // namespace fairnets::extract

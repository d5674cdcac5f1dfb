#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairnets/py/ast.hpp"
#include "fairnets/vocab.hpp"

namespace fairnets::extract {

/// A value the static evaluator could (or could not) fold. Opaque keeps the
/// exact source text of the unfoldable expression.
struct LiteralValue {
    enum class Kind { Text, Integer, Real, Boolean, None, List, Map, Opaque };

    Kind kind = Kind::Opaque;
    std::string text;                  // Text payload or Opaque source text
    std::int64_t integer = 0;
    double real = 0.0;
    bool boolean = false;
    std::vector<LiteralValue> items;   // List elements; Map as flat [k0,v0,k1,v1,...]

    static LiteralValue make_text(std::string value);
    static LiteralValue make_integer(std::int64_t value);
    static LiteralValue make_real(double value);
    static LiteralValue make_boolean(bool value);
    static LiteralValue make_none();
    static LiteralValue make_list(std::vector<LiteralValue> elements);
    static LiteralValue make_map(std::vector<LiteralValue> flat_pairs);
    static LiteralValue opaque(std::string source);

    bool is_opaque() const { return kind == Kind::Opaque; }
    bool operator==(const LiteralValue&) const = default;
};

/// Canonical rendering: JSON with sorted-key objects, ", " and ": "
/// separators, shortest round-trip float form; Opaque renders as a JSON
/// string of its source text.
std::string render_value(const LiteralValue& value);
std::string render_keywords(const std::vector<std::pair<std::string, LiteralValue>>& keywords);

struct Diagnostic {
    enum class Severity { Info, Warning };
    Severity severity = Severity::Warning;
    py::Span span;
    std::string code;     // stable machine-readable tag, e.g. "unsupported-pattern"
    std::string message;
};

/// Line-offset view of one source file, for exact Opaque slices.
class SourceText {
  public:
    explicit SourceText(std::string_view text);
    std::string slice(const py::Span& span) const;
    const std::string& text() const { return text_; }

  private:
    std::string text_;
    std::vector<std::size_t> line_offsets_;
};

/// Literal bindings of one scope; lookups fall back to the enclosing scope.
class StaticEnv {
  public:
    StaticEnv() = default;
    explicit StaticEnv(const StaticEnv* parent) : parent_(parent) {}

    const LiteralValue* lookup(std::string_view name) const;
    void bind(std::string name, LiteralValue value);
    const std::map<std::string, LiteralValue, std::less<>>& bindings() const { return bindings_; }

  private:
    std::map<std::string, LiteralValue, std::less<>> bindings_;
    const StaticEnv* parent_ = nullptr;
};

/// Folds `node` under `env`: literals, unary +/-, {+,-,*} over integers and
/// reals, text concatenation, list/tuple/dict displays of foldable parts,
/// and bound names. Everything else becomes Opaque.
LiteralValue resolve_expression(const py::Node& node, const StaticEnv& env,
                                const SourceText& source);

/// Binds every name whose assignment right-hand side folds to a literal,
/// walking one scope in textual order (conditional branches both walked, the
/// last textual assignment winning — recorded as a diagnostic when branches
/// conflict). Function bodies are separate scopes and are not entered.
StaticEnv build_static_environment(const py::Node& scope_block, const StaticEnv* parent,
                                   const SourceText& source,
                                   std::vector<Diagnostic>* diagnostics);
StaticEnv build_static_environment(const py::Node& module_tree, std::string_view source_text);

struct ImportTable {
    std::map<std::string, std::string> aliases;   // local name → dotted framework path
    std::vector<std::string> star_modules;        // `from M import *` sources
    bool has_star_import = false;
};

ImportTable build_import_table(const py::Node& module_tree);

/// Dotted path of a callee expression (Name / Attribute chain) with the
/// leading name resolved through the import table. nullopt when the base is
/// not a plain imported name.
std::optional<std::string> resolve_callee_path(const py::Node& callee,
                                               const ImportTable& imports);

/// Strips a leading "tensorflow." ("tensorflow.python." included) and keeps
/// only paths rooted at the framework namespace "keras".
std::optional<std::string> normalize_framework_path(std::string_view dotted);

struct ExtractedLayer {
    int position = 0;
    std::optional<vocab::LayerClass> layer_class;   // nullopt = unknown layer
    std::string name;                               // canonical or as written
    std::vector<LiteralValue> positional_params;
    std::vector<std::pair<std::string, LiteralValue>> keywords;  // source order
};

struct ExtractedModel {
    std::string source_file;
    int model_ordinal = 0;
    std::string variable;
    std::vector<ExtractedLayer> layers;
    std::optional<std::string> optimizer;
    std::optional<std::string> loss_function;
    std::vector<Diagnostic> diagnostics;
};

/// Classifies one call expression. nullopt = not a layer constructor.
/// Unknown-but-layer-like names (a `layers` path segment) are kept with an
/// empty layer_class plus a diagnostic.
std::optional<ExtractedLayer> extract_layer_call(const py::Node& call, const StaticEnv& env,
                                                 const ImportTable& imports,
                                                 const vocab::Vocabulary& vocabulary,
                                                 const SourceText& source,
                                                 std::vector<Diagnostic>& diagnostics);

struct CompileConfig {
    std::optional<std::string> optimizer;
    std::optional<std::string> loss;
    std::vector<Diagnostic> diagnostics;
};

/// Finds `<modelVar>.compile(...)` in one scope and resolves its optimizer
/// and loss arguments (text literals, static names, constructor calls on
/// known optimizer classes, framework attribute references).
CompileConfig extract_compile_config(const py::Node& scope_block, const StaticEnv& env,
                                     const ImportTable& imports, std::string_view model_var,
                                     const vocab::Vocabulary& vocabulary,
                                     const SourceText& source);

struct FileExtraction {
    std::vector<ExtractedModel> models;
    std::optional<py::ParseFailure> parse_failure;
    std::vector<Diagnostic> file_diagnostics;
};

/// Full extraction for one source file: parses, builds scope environments,
/// and recognizes sequential-list, sequential-add, and functional
/// construction patterns. Never throws on subject-code input.
FileExtraction extract_models(std::string_view text, const std::string& source_file,
                              const vocab::Vocabulary& vocabulary);

}  // namespace fairnets::extract

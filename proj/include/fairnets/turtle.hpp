#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "fairnets/rdf.hpp"

namespace fairnets::rdf {

struct TurtleParseError : std::runtime_error {
    TurtleParseError(int line, int column, const std::string& what)
        : std::runtime_error("turtle:" + std::to_string(line) + ":" + std::to_string(column) +
                             ": " + what),
          line(line),
          column(column) {}
    int line;
    int column;
};

/// Deterministic Turtle: prefixes sorted by prefix name, one triple per line,
/// triples in canonical (subject, predicate, object) order, UTF-8, LF endings.
/// Serializing the same triple set twice yields byte-identical output.
std::string serialize_turtle(const KnowledgeGraph& graph);

/// Parses the subset serialize_turtle emits plus common hand-written forms:
/// @prefix directives, prefixed names, <iri> refs, plain/typed/language-tagged
/// literals, the `a` keyword, and `;`/`,` predicate-object lists.
/// parse_turtle(serialize_turtle(g)) equals g as a triple set.
KnowledgeGraph parse_turtle(std::string_view text);

}  // namespace fairnets::rdf

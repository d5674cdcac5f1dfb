#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fairnets/iri.hpp"

namespace fairnets::rdf {

/// Namespaces the toolchain emits into. Prefix names follow the declared
/// prefix table of KnowledgeGraph::with_default_prefixes().
namespace ns {
inline constexpr std::string_view nno = "https://w3id.org/nno/ontology#";
inline constexpr std::string_view nno_data = "https://w3id.org/nno/data#";
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view dcterms = "http://purl.org/dc/terms/";
inline constexpr std::string_view doap = "http://usefulinc.com/ns/doap#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view void_ns = "http://rdfs.org/ns/void#";
inline constexpr std::string_view cc = "http://creativecommons.org/ns#";
inline constexpr std::string_view doc = "http://www.w3.org/2000/10/swap/pim/doc#";
}  // namespace ns

Iri nno(std::string_view local);
Iri nno_data(std::string_view local);
Iri rdf_type();
Iri rdfs(std::string_view local);
Iri dcterms(std::string_view local);
Iri doap(std::string_view local);
Iri xsd(std::string_view local);
Iri void_iri(std::string_view local);

/// An RDF literal: lexical form plus either a datatype or a language tag
/// (never both; both absent means a plain string).
struct Literal {
    std::string lexical;
    std::optional<Iri> datatype;
    std::string language;

    static Literal plain(std::string text);
    static Literal lang(std::string text, std::string tag);
    static Literal typed(std::string text, Iri datatype);
    static Literal integer(std::int64_t value);
    static Literal date_time(std::string iso8601);
    static Literal any_uri(std::string uri);

    bool is_integer_typed() const;
    bool is_any_uri_typed() const;

    auto operator<=>(const Literal&) const = default;
};

using Object = std::variant<Iri, Literal>;

/// Ordering of Object follows variant index, so IRIs sort before literals;
/// the serializer's canonical triple order relies on this.
struct Triple {
    Iri subject;
    Iri predicate;
    Object object;

    auto operator<=>(const Triple&) const = default;
};

inline const Iri* object_iri(const Object& o) { return std::get_if<Iri>(&o); }
inline const Literal* object_literal(const Object& o) { return std::get_if<Literal>(&o); }

/// A set of triples plus the prefix table used for serialization.
/// Set semantics: inserting a duplicate triple is a no-op, so merge is
/// associative, commutative, and idempotent.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    /// Graph with the seven prefixes the toolchain declares everywhere:
    /// cc, dcterms, doap, nno, rdfs, void, xsd.
    static KnowledgeGraph with_default_prefixes();

    void declare_prefix(std::string prefix, std::string name_space);
    const std::map<std::string, std::string>& prefixes() const { return prefixes_; }

    void insert(Triple triple) { triples_.insert(std::move(triple)); }
    void add(Iri subject, Iri predicate, Object object) {
        triples_.insert(Triple{std::move(subject), std::move(predicate), std::move(object)});
    }
    void merge(const KnowledgeGraph& other);

    bool contains(const Triple& triple) const { return triples_.count(triple) > 0; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }
    const std::set<Triple>& triples() const { return triples_; }

    /// Objects of all (subject, predicate, ·) triples, in canonical order.
    std::vector<Object> objects_of(const Iri& subject, const Iri& predicate) const;
    /// Subjects of all (·, predicate, ·) triples, deduplicated, in order.
    std::vector<Iri> subjects_with(const Iri& predicate) const;
    /// Subjects of all (·, predicate, object) triples, deduplicated, in order.
    std::vector<Iri> subjects_of(const Iri& predicate, const Object& object) const;
    std::size_t distinct_subject_count() const;

    bool operator==(const KnowledgeGraph& other) const { return triples_ == other.triples_; }

private:
    std::set<Triple> triples_;
    std::map<std::string, std::string> prefixes_;
};

}  // namespace fairnets::rdf

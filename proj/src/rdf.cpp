#include "fairnets/rdf.hpp"

#include <charconv>
#include <stdexcept>

namespace fairnets::rdf {

namespace {
Iri make(std::string_view name_space, std::string_view local) {
    std::string full(name_space);
    full += local;
    return Iri::checked(full);
}
}  // namespace

Iri nno(std::string_view local) { return make(ns::nno, local); }
Iri nno_data(std::string_view local) { return make(ns::nno_data, local); }
Iri rdf_type() { return make(ns::rdf, "type"); }
Iri rdfs(std::string_view local) { return make(ns::rdfs, local); }
Iri dcterms(std::string_view local) { return make(ns::dcterms, local); }
Iri doap(std::string_view local) { return make(ns::doap, local); }
Iri xsd(std::string_view local) { return make(ns::xsd, local); }
Iri void_iri(std::string_view local) { return make(ns::void_ns, local); }

Literal Literal::plain(std::string text) { return Literal{std::move(text), std::nullopt, {}}; }

Literal Literal::lang(std::string text, std::string tag) {
    return Literal{std::move(text), std::nullopt, std::move(tag)};
}

Literal Literal::typed(std::string text, Iri datatype) {
    return Literal{std::move(text), std::move(datatype), {}};
}

Literal Literal::integer(std::int64_t value) {
    return typed(std::to_string(value), xsd("integer"));
}

Literal Literal::date_time(std::string iso8601) {
    return typed(std::move(iso8601), xsd("dateTime"));
}

Literal Literal::any_uri(std::string uri) { return typed(std::move(uri), xsd("anyURI")); }

bool Literal::is_integer_typed() const {
    return datatype && datatype->view() == std::string(ns::xsd) + "integer";
}

bool Literal::is_any_uri_typed() const {
    return datatype && datatype->view() == std::string(ns::xsd) + "anyURI";
}

KnowledgeGraph KnowledgeGraph::with_default_prefixes() {
    KnowledgeGraph g;
    g.declare_prefix("cc", std::string(ns::cc));
    g.declare_prefix("dcterms", std::string(ns::dcterms));
    g.declare_prefix("doap", std::string(ns::doap));
    g.declare_prefix("nno", std::string(ns::nno));
    g.declare_prefix("rdfs", std::string(ns::rdfs));
    g.declare_prefix("void", std::string(ns::void_ns));
    g.declare_prefix("xsd", std::string(ns::xsd));
    return g;
}

void KnowledgeGraph::declare_prefix(std::string prefix, std::string name_space) {
    prefixes_[std::move(prefix)] = std::move(name_space);
}

void KnowledgeGraph::merge(const KnowledgeGraph& other) {
    triples_.insert(other.triples_.begin(), other.triples_.end());
    for (const auto& [prefix, name_space] : other.prefixes_) {
        prefixes_.emplace(prefix, name_space);
    }
}

std::vector<Object> KnowledgeGraph::objects_of(const Iri& subject, const Iri& predicate) const {
    std::vector<Object> out;
    for (const auto& t : triples_) {
        if (t.subject == subject && t.predicate == predicate) out.push_back(t.object);
    }
    return out;
}

std::vector<Iri> KnowledgeGraph::subjects_with(const Iri& predicate) const {
    std::vector<Iri> out;
    for (const auto& t : triples_) {
        if (t.predicate == predicate && (out.empty() || out.back() != t.subject)) {
            out.push_back(t.subject);
        }
    }
    return out;
}

std::vector<Iri> KnowledgeGraph::subjects_of(const Iri& predicate, const Object& object) const {
    std::vector<Iri> out;
    for (const auto& t : triples_) {
        if (t.predicate == predicate && t.object == object &&
            (out.empty() || out.back() != t.subject)) {
            out.push_back(t.subject);
        }
    }
    return out;
}

std::size_t KnowledgeGraph::distinct_subject_count() const {
    std::size_t n = 0;
    const Iri* last = nullptr;
    for (const auto& t : triples_) {
        if (last == nullptr || !(*last == t.subject)) ++n;
        last = &t.subject;
    }
    return n;
}

}  // namespace fairnets::rdf

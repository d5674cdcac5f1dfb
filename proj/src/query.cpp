#include "fairnets/query.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fairnets/ingest.hpp"

namespace fairnets::query {

namespace {

Iri class_of(inference::NetworkType type) {
    switch (type) {
        case inference::NetworkType::CNN: return rdf::nno("ConvolutionalNeuralNetwork");
        case inference::NetworkType::RNN: return rdf::nno("RecurrentNeuralNetwork");
        case inference::NetworkType::FFNN: break;
    }
    return rdf::nno("FeedForwardNeuralNetwork");
}

bool is_typed(const rdf::KnowledgeGraph& g, const Iri& node, const Iri& class_iri) {
    return g.contains({node, rdf::rdf_type(), class_iri});
}

inference::NetworkType type_of(const rdf::KnowledgeGraph& g, const Iri& node) {
    if (is_typed(g, node, class_of(inference::NetworkType::CNN))) {
        return inference::NetworkType::CNN;
    }
    if (is_typed(g, node, class_of(inference::NetworkType::RNN))) {
        return inference::NetworkType::RNN;
    }
    return inference::NetworkType::FFNN;
}

std::string first_literal(const rdf::KnowledgeGraph& g, const Iri& node, const Iri& predicate) {
    for (const rdf::Object& object : g.objects_of(node, predicate)) {
        if (const rdf::Literal* literal = rdf::object_literal(object)) return literal->lexical;
    }
    return "";
}

bool year_matches(const rdf::KnowledgeGraph& g, const Iri& node, int year) {
    std::string prefix = std::to_string(year) + "-";
    for (const rdf::Object& object : g.objects_of(node, rdf::dcterms("created"))) {
        const rdf::Literal* literal = rdf::object_literal(object);
        if (literal != nullptr && literal->lexical.compare(0, prefix.size(), prefix) == 0) {
            return true;
        }
    }
    return false;
}

bool license_matches(const rdf::KnowledgeGraph& g, const Iri& node, const std::string& wanted) {
    std::optional<Iri> iri = Iri::parse(wanted);
    if (!iri) iri = ingest::normalize_license(wanted);
    if (!iri) return false;   // unknown SPDX id matches nothing
    return g.contains({node, rdf::dcterms("license"), *iri});
}

bool layer_matches(const rdf::KnowledgeGraph& g, const Iri& node, const std::string& name,
                   const vocab::Vocabulary& vocabulary) {
    const vocab::LayerClass* layer_class = vocabulary.resolve_layer_class(name);
    for (const rdf::Object& object : g.objects_of(node, rdf::nno("hasLayer"))) {
        const Iri* layer_node = rdf::object_iri(object);
        if (layer_node == nullptr) continue;
        if (layer_class != nullptr && is_typed(g, *layer_node, layer_class->term.iri)) {
            return true;
        }
        if (layer_class == nullptr && first_literal(g, *layer_node, rdf::rdfs("label")) == name) {
            return true;
        }
    }
    return false;
}

inference::IntendedUse use_of(const rdf::KnowledgeGraph& g, const Iri& node,
                              const vocab::Vocabulary& vocabulary) {
    for (const rdf::Object& object : g.objects_of(node, rdf::nno("hasLossFunction"))) {
        const Iri* loss_iri = rdf::object_iri(object);
        if (loss_iri == nullptr) continue;
        const vocab::VocabularyTerm* term = vocabulary.find(*loss_iri);
        if (term == nullptr || !term->parent) continue;
        if (*term->parent == rdf::nno("ClassificationLossFunction")) {
            return inference::IntendedUse::Classification;
        }
        if (*term->parent == rdf::nno("RegressionLossFunction")) {
            return inference::IntendedUse::Regression;
        }
    }
    return inference::IntendedUse::Unknown;
}

}  // namespace

std::vector<ResultRow> query_graph(const rdf::KnowledgeGraph& g, const QueryFilter& filter,
                                   const vocab::Vocabulary& vocabulary) {
    if (filter.empty()) throw std::invalid_argument("query requires at least one filter");

    std::set<Iri> candidates;
    for (inference::NetworkType type : {inference::NetworkType::FFNN,
                                        inference::NetworkType::CNN,
                                        inference::NetworkType::RNN}) {
        if (filter.type && *filter.type != type) continue;
        for (Iri& subject : g.subjects_of(rdf::rdf_type(), class_of(type))) {
            candidates.insert(std::move(subject));
        }
    }

    std::optional<Iri> creator_iri;
    if (filter.creator) {
        creator_iri = Iri::parse(*filter.creator);
        if (!creator_iri) return {};
    }

    std::vector<ResultRow> rows;
    for (const Iri& node : candidates) {
        if (filter.year_created && !year_matches(g, node, *filter.year_created)) continue;
        if (filter.license && !license_matches(g, node, *filter.license)) continue;
        if (filter.layer && !layer_matches(g, node, *filter.layer, vocabulary)) continue;
        if (creator_iri && !g.contains({node, rdf::dcterms("creator"), *creator_iri})) continue;
        if (filter.intended_use && use_of(g, node, vocabulary) != *filter.intended_use) continue;
        rows.push_back({node, first_literal(g, node, rdf::rdfs("label")), type_of(g, node),
                        first_literal(g, node, rdf::dcterms("created"))});
    }
    // candidates is an ordered set, so rows are already IRI-sorted
    return rows;
}

}  // namespace fairnets::query

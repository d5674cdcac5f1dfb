#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairnets/inference.hpp"
#include "fairnets/rdf.hpp"
#include "fairnets/vocab.hpp"

namespace fairnets::query {

/// Conjunctive network filter; at least one field must be set.
struct QueryFilter {
    std::optional<inference::NetworkType> type;
    std::optional<int> year_created;          // year component of dcterms:created
    std::optional<std::string> license;       // IRI or SPDX id
    std::optional<std::string> layer;         // layer class name, e.g. "LSTM"
    std::optional<std::string> creator;       // owner IRI
    std::optional<inference::IntendedUse> intended_use;

    bool empty() const {
        return !type && !year_created && !license && !layer && !creator && !intended_use;
    }
};

struct ResultRow {
    Iri iri;
    std::string label;
    inference::NetworkType type = inference::NetworkType::FFNN;
    std::string created;   // lexical form, may be empty

    bool operator==(const ResultRow&) const = default;
};

/// Network nodes satisfying every set filter, sorted by IRI. Throws
/// std::invalid_argument when no filter is set.
std::vector<ResultRow> query_graph(const rdf::KnowledgeGraph& g, const QueryFilter& filter,
                                   const vocab::Vocabulary& vocabulary);

}  // namespace fairnets::query

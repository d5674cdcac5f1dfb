#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairnets/extract.hpp"
#include "fairnets/inference.hpp"
#include "fairnets/ingest.hpp"
#include "fairnets/rdf.hpp"
#include "fairnets/vocab.hpp"

namespace fairnets::graph {

struct NetworkDescriptor {
    Iri iri;                                    // inside the data namespace
    ingest::RepositoryRecord record;
    extract::ExtractedModel model;
    inference::NetworkType network_type = inference::NetworkType::FFNN;
    std::vector<ingest::Reference> references;
    std::optional<Iri> dataset;                 // from a manual sidecar only
};

/// One model per repository keeps the bare repository identifier; several
/// models are disambiguated with the source file stem and model ordinal.
/// Characters outside the unreserved set (plus '/') are percent-encoded.
Iri mint_network_iri(std::string_view full_name, std::string_view file_stem, int model_ordinal,
                     int models_in_repo, std::string_view data_namespace = rdf::ns::nno_data);

/// Mints the IRI from the model's source file and binds everything together.
NetworkDescriptor assemble_descriptor(ingest::RepositoryRecord record,
                                      extract::ExtractedModel model,
                                      std::vector<ingest::Reference> references,
                                      int models_in_repo,
                                      std::string_view data_namespace = rdf::ns::nno_data);

/// Corpus-level uniqueness gate. Throws IriCollision naming both sources.
void verify_unique_iris(const std::vector<NetworkDescriptor>& descriptors);

/// Emission rules: type triple for the inferred network class, label,
/// one description literal per source, created/modified dateTimes, creator,
/// license, repository link, stars, topics as categories, references,
/// optimizer and loss individuals when known, and one node per layer
/// (`<networkIri>_layer_<position>`) carrying type, label, keyword rendering,
/// and positional parameters.
std::vector<rdf::Triple> descriptor_to_triples(const NetworkDescriptor& descriptor,
                                               const vocab::Vocabulary& vocabulary);

/// Full corpus graph with default prefixes.
rdf::KnowledgeGraph build_graph(const std::vector<NetworkDescriptor>& descriptors,
                                const vocab::Vocabulary& vocabulary);

const Iri& default_dataset_iri();

/// VoID description of `g` as Turtle: triple and distinct-subject counts,
/// CC BY 4.0 license, title, description, persistence policy, vocabulary
/// links.
std::string emit_void(const rdf::KnowledgeGraph& g, const Iri& dataset_iri);

}  // namespace fairnets::graph

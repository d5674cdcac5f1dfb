#include "fairnets/graph_build.hpp"

#include <filesystem>
#include <map>

#include "fairnets/errors.hpp"
#include "fairnets/turtle.hpp"

namespace fairnets::graph {

namespace {

Iri network_class_iri(inference::NetworkType type) {
    switch (type) {
        case inference::NetworkType::CNN: return rdf::nno("ConvolutionalNeuralNetwork");
        case inference::NetworkType::RNN: return rdf::nno("RecurrentNeuralNetwork");
        case inference::NetworkType::FFNN: break;
    }
    return rdf::nno("FeedForwardNeuralNetwork");
}

}  // namespace

Iri mint_network_iri(std::string_view full_name, std::string_view file_stem, int model_ordinal,
                     int models_in_repo, std::string_view data_namespace) {
    std::string local(full_name);
    if (models_in_repo != 1) {
        local += "_";
        local += file_stem;
        local += "_";
        local += std::to_string(model_ordinal);
    }
    return Iri::checked(std::string(data_namespace) + percent_encode_iri_part(local));
}

NetworkDescriptor assemble_descriptor(ingest::RepositoryRecord record,
                                      extract::ExtractedModel model,
                                      std::vector<ingest::Reference> references,
                                      int models_in_repo, std::string_view data_namespace) {
    NetworkDescriptor descriptor;
    std::string stem = std::filesystem::path(model.source_file).stem().string();
    descriptor.iri = mint_network_iri(record.full_name, stem, model.model_ordinal,
                                      models_in_repo, data_namespace);
    descriptor.network_type = inference::infer_network_type(model);
    descriptor.record = std::move(record);
    descriptor.model = std::move(model);
    descriptor.references = std::move(references);
    return descriptor;
}

void verify_unique_iris(const std::vector<NetworkDescriptor>& descriptors) {
    std::map<std::string, const NetworkDescriptor*> by_iri;
    for (const NetworkDescriptor& descriptor : descriptors) {
        auto [it, inserted] = by_iri.emplace(descriptor.iri.value(), &descriptor);
        if (!inserted) {
            const NetworkDescriptor& first = *it->second;
            throw IriCollision("IRI " + descriptor.iri.value() + " minted by both " +
                               first.record.full_name + " (" + first.model.source_file +
                               ", model " + std::to_string(first.model.model_ordinal) + ") and " +
                               descriptor.record.full_name + " (" +
                               descriptor.model.source_file + ", model " +
                               std::to_string(descriptor.model.model_ordinal) + ")");
        }
    }
}

std::vector<rdf::Triple> descriptor_to_triples(const NetworkDescriptor& descriptor,
                                               const vocab::Vocabulary& vocabulary) {
    std::vector<rdf::Triple> triples;
    const Iri& net = descriptor.iri;
    const ingest::RepositoryRecord& record = descriptor.record;
    auto emit = [&](Iri predicate, rdf::Object object) {
        triples.push_back({net, std::move(predicate), std::move(object)});
    };

    emit(rdf::rdf_type(), network_class_iri(descriptor.network_type));
    emit(rdf::rdfs("label"), rdf::Literal::plain(record.name));
    if (record.description) {
        emit(rdf::dcterms("description"), rdf::Literal::plain(*record.description));
    }
    if (record.readme) {
        emit(rdf::dcterms("description"), rdf::Literal::plain(*record.readme));
    }
    emit(rdf::dcterms("created"), rdf::Literal::date_time(record.created_at));
    emit(rdf::dcterms("modified"), rdf::Literal::date_time(record.updated_at));
    emit(rdf::dcterms("creator"), record.owner_url);
    if (record.license_iri) emit(rdf::dcterms("license"), *record.license_iri);
    emit(rdf::nno("hasRepositoryLink"), rdf::Literal::any_uri(record.html_url.value()));
    emit(rdf::nno("stars"), rdf::Literal::integer(record.watchers_count));
    for (const std::string& topic : record.topics) {
        emit(rdf::doap("category"), rdf::Literal::plain(topic));
    }
    for (const ingest::Reference& reference : descriptor.references) {
        if (reference.kind == ingest::Reference::Kind::Scholarly) {
            emit(rdf::dcterms("references"), reference.url);
        } else {
            emit(rdf::rdfs("seeAlso"), reference.url);
        }
    }
    if (descriptor.model.optimizer) {
        if (const vocab::OptimizerTerm* optimizer =
                vocabulary.resolve_optimizer(*descriptor.model.optimizer)) {
            emit(rdf::nno("hasOptimizer"), optimizer->term.iri);
        }
    }
    if (descriptor.model.loss_function) {
        if (const vocab::LossTerm* loss = vocabulary.resolve_loss(*descriptor.model.loss_function)) {
            emit(rdf::nno("hasLossFunction"), loss->term.iri);
        }
    }
    if (descriptor.dataset) {
        emit(rdf::nno("dataset"), rdf::Literal::any_uri(descriptor.dataset->value()));
    }

    for (const extract::ExtractedLayer& layer : descriptor.model.layers) {
        Iri layer_iri =
            Iri::checked(net.value() + "_layer_" + std::to_string(layer.position));
        emit(rdf::nno("hasLayer"), layer_iri);
        const Iri& layer_class =
            layer.layer_class ? layer.layer_class->term.iri : vocab::Vocabulary::root_layer_class();
        triples.push_back({layer_iri, rdf::rdf_type(), layer_class});
        triples.push_back({layer_iri, rdf::rdfs("label"), rdf::Literal::plain(layer.name)});
        triples.push_back({layer_iri, rdf::nno("hasLayerKeywords"),
                           rdf::Literal::plain(extract::render_keywords(layer.keywords))});
        for (const extract::LiteralValue& value : layer.positional_params) {
            triples.push_back({layer_iri, rdf::nno("hasLayerParameter"),
                               rdf::Literal::plain(extract::render_value(value))});
        }
    }
    return triples;
}

rdf::KnowledgeGraph build_graph(const std::vector<NetworkDescriptor>& descriptors,
                                const vocab::Vocabulary& vocabulary) {
    rdf::KnowledgeGraph graph = rdf::KnowledgeGraph::with_default_prefixes();
    for (const NetworkDescriptor& descriptor : descriptors) {
        for (rdf::Triple& triple : descriptor_to_triples(descriptor, vocabulary)) {
            graph.insert(std::move(triple));
        }
    }
    return graph;
}

const Iri& default_dataset_iri() {
    static const Iri iri = Iri::checked("https://w3id.org/nno/data");
    return iri;
}

std::string emit_void(const rdf::KnowledgeGraph& g, const Iri& dataset_iri) {
    rdf::KnowledgeGraph description = rdf::KnowledgeGraph::with_default_prefixes();
    const Iri& ds = dataset_iri;
    description.add(ds, rdf::rdf_type(), rdf::void_iri("Dataset"));
    description.add(ds, rdf::dcterms("title"), rdf::Literal::plain("FAIRnets Dataset"));
    description.add(ds, rdf::dcterms("description"),
                    rdf::Literal::plain("A knowledge graph of neural network architectures "
                                        "extracted from public repositories."));
    description.add(ds, Iri::checked("http://creativecommons.org/ns#license"),
                    Iri::checked("https://creativecommons.org/licenses/by/4.0/"));
    description.add(ds, rdf::void_iri("triples"),
                    rdf::Literal::integer(static_cast<std::int64_t>(g.size())));
    description.add(ds, rdf::void_iri("distinctSubjects"),
                    rdf::Literal::integer(static_cast<std::int64_t>(g.distinct_subject_count())));
    description.add(ds, Iri::checked(std::string(rdf::ns::doc) + "persistencePolicy"),
                    Iri::checked("https://w3id.org/nno/"));
    description.add(ds, rdf::void_iri("vocabulary"), Iri::checked(std::string(rdf::ns::nno)));
    description.add(ds, rdf::void_iri("vocabulary"), Iri::checked(std::string(rdf::ns::dcterms)));
    description.add(ds, rdf::void_iri("vocabulary"), Iri::checked(std::string(rdf::ns::doap)));
    description.add(ds, rdf::void_iri("vocabulary"), Iri::checked(std::string(rdf::ns::rdfs)));
    return rdf::serialize_turtle(description);
}

}  // namespace fairnets::graph

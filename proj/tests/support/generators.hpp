#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairnets/rdf.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

inline std::string random_iri_string(Rng& rng) {
    static const char* hosts[] = {"w3id.org/nno", "example.org", "github.com",
                                  "purl.org/dc", "arxiv.org"};
    static const char* segments[] = {"data",  "ontology", "abs",    "terms", "alpha",
                                     "beta",  "gamma",    "delta",  "n1",    "n2",
                                     "model", "layer",    "x%20y",  "caf%C3%A9"};
    std::string iri = (pick(rng, 2) == 0) ? "https://" : "http://";
    iri += hosts[pick(rng, 5)];
    std::size_t depth = pick(rng, 3);
    for (std::size_t i = 0; i < depth; ++i) {
        iri += '/';
        iri += segments[pick(rng, 14)];
    }
    if (pick(rng, 3) == 0) {
        iri += '#';
        iri += segments[pick(rng, 14)];
    }
    return iri;
}

inline std::string random_lexical(Rng& rng) {
    static const char* pieces[] = {
        "plain text", "line\nbreak",  "tab\tseparated", "quote \" inside",
        "back\\slash", "caf\xC3\xA9", "\xE4\xB8\xAD\xE6\x96\x87", "trailing space ",
        "", "0042", "a,b;c.d", "\x01 control", "~!@#$%^&*()"};
    std::string out = pieces[pick(rng, 13)];
    if (pick(rng, 4) == 0) out += pieces[pick(rng, 13)];
    return out;
}

inline fairnets::rdf::Literal random_literal(Rng& rng) {
    using fairnets::rdf::Literal;
    switch (pick(rng, 5)) {
        case 0: return Literal::plain(random_lexical(rng));
        case 1: return Literal::lang(random_lexical(rng), pick(rng, 2) ? "en" : "de-DE");
        case 2: return Literal::integer(static_cast<std::int64_t>(pick(rng, 2000)) - 1000);
        case 3: return Literal::date_time("2019-0" + std::to_string(1 + pick(rng, 9)) +
                                          "-11T08:15:00Z");
        default: return Literal::any_uri(random_iri_string(rng));
    }
}

/// Random graph over small IRI pools so duplicate triples and shared
/// subjects occur; exercises set semantics and canonical ordering.
inline fairnets::rdf::KnowledgeGraph random_graph(Rng& rng, std::size_t max_triples = 40) {
    namespace rdf = fairnets::rdf;
    rdf::KnowledgeGraph g = rdf::KnowledgeGraph::with_default_prefixes();
    std::vector<fairnets::Iri> subjects, predicates;
    std::size_t subject_count = 1 + pick(rng, 6);
    for (std::size_t i = 0; i < subject_count; ++i) {
        subjects.push_back(fairnets::Iri::checked(random_iri_string(rng)));
    }
    predicates.push_back(rdf::rdf_type());
    predicates.push_back(rdf::rdfs("label"));
    predicates.push_back(rdf::dcterms("created"));
    predicates.push_back(rdf::nno("hasLayer"));
    predicates.push_back(fairnets::Iri::checked(random_iri_string(rng)));
    std::size_t triple_count = pick(rng, max_triples + 1);
    for (std::size_t i = 0; i < triple_count; ++i) {
        rdf::Object object;
        if (pick(rng, 2) == 0) {
            object = fairnets::Iri::checked(random_iri_string(rng));
        } else {
            object = random_literal(rng);
        }
        g.add(subjects[pick(rng, subjects.size())], predicates[pick(rng, predicates.size())],
              std::move(object));
    }
    return g;
}

inline std::vector<std::string> random_layer_names(Rng& rng, std::size_t max_len) {
    static const char* names[] = {"Dense", "Conv2D", "LSTM", "Dropout", "Flatten", "GRU"};
    std::vector<std::string> out;
    std::size_t n = pick(rng, max_len + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(names[pick(rng, 6)]);
    return out;
}

/// Source-of-truth record for one generated network; the graph emitted from
/// it mirrors the production descriptor emission, so query results can be
/// checked against the records directly.
struct NetSpec {
    std::string iri;
    std::string type;  // "FFNN" | "CNN" | "RNN"
    int year = 2018;
    std::string license_spdx;  // empty = unlicensed
    std::vector<std::string> layer_names;
    std::string creator;
    std::string loss;  // vocabulary individual local name; empty = none
    std::string label;
    std::string created;
};

struct NetworkCorpus {
    fairnets::rdf::KnowledgeGraph graph;
    std::vector<NetSpec> specs;
};

inline NetworkCorpus random_network_corpus(Rng& rng, std::size_t max_networks = 12) {
    namespace rdf = fairnets::rdf;
    using fairnets::Iri;
    static const char* types[] = {"FFNN", "CNN", "RNN"};
    static const char* type_classes[] = {"FeedForwardNeuralNetwork", "ConvolutionalNeuralNetwork",
                                         "RecurrentNeuralNetwork"};
    static const char* licenses[] = {"", "MIT", "Apache-2.0"};
    static const char* creators[] = {"https://github.com/ada", "https://github.com/bob",
                                     "https://github.com/eve"};
    // Layer pool: vocabulary names plus one non-vocabulary name that falls
    // back to label matching.
    static const char* layers[] = {"Dense", "Conv2D", "LSTM", "Dropout", "FancyAttention"};
    static const char* vocab_layer_classes[] = {"Dense", "Conv2D", "LSTM", "Dropout", ""};
    static const char* losses[] = {"", "binary_crossentropy", "mean_squared_error"};

    NetworkCorpus corpus;
    corpus.graph = rdf::KnowledgeGraph::with_default_prefixes();
    std::size_t count = pick(rng, max_networks + 1);
    for (std::size_t i = 0; i < count; ++i) {
        NetSpec spec;
        spec.iri = "https://w3id.org/nno/data#user" + std::to_string(pick(rng, 4)) + "/net" +
                   std::to_string(i);
        std::size_t type_index = pick(rng, 3);
        spec.type = types[type_index];
        spec.year = 2015 + static_cast<int>(pick(rng, 6));
        spec.license_spdx = licenses[pick(rng, 3)];
        spec.creator = creators[pick(rng, 3)];
        spec.loss = losses[pick(rng, 3)];
        spec.label = "net-" + std::to_string(i);
        spec.created = std::to_string(spec.year) + "-06-01T10:00:00Z";
        std::size_t layer_count = pick(rng, 4);
        Iri net = Iri::checked(spec.iri);
        corpus.graph.add(net, rdf::rdf_type(), rdf::nno(type_classes[type_index]));
        corpus.graph.add(net, rdf::rdfs("label"), rdf::Literal::plain(spec.label));
        corpus.graph.add(net, rdf::dcterms("created"), rdf::Literal::date_time(spec.created));
        corpus.graph.add(net, rdf::dcterms("creator"), Iri::checked(spec.creator));
        if (!spec.license_spdx.empty()) {
            corpus.graph.add(net, rdf::dcterms("license"),
                             Iri::checked("https://spdx.org/licenses/" + spec.license_spdx));
        }
        if (!spec.loss.empty()) {
            corpus.graph.add(net, rdf::nno("hasLossFunction"), rdf::nno(spec.loss));
        }
        for (std::size_t l = 0; l < layer_count; ++l) {
            std::size_t layer_index = pick(rng, 5);
            spec.layer_names.push_back(layers[layer_index]);
            Iri layer_node = Iri::checked(spec.iri + "_layer_" + std::to_string(l));
            corpus.graph.add(net, rdf::nno("hasLayer"), layer_node);
            const char* layer_class = vocab_layer_classes[layer_index];
            corpus.graph.add(layer_node, rdf::rdf_type(),
                             *layer_class ? rdf::nno(layer_class) : rdf::nno("Layer"));
            corpus.graph.add(layer_node, rdf::rdfs("label"),
                             rdf::Literal::plain(layers[layer_index]));
        }
        corpus.specs.push_back(std::move(spec));
    }
    return corpus;
}

}  // namespace testsupport

#include "fairnets/audit.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "fairnets/errors.hpp"
#include "fairnets/ingest.hpp"
#include "fairnets/turtle.hpp"

namespace fairnets::audit {

namespace {

using nlohmann::json;

const std::vector<Iri>& network_classes() {
    static const std::vector<Iri> classes = {
        rdf::nno("FeedForwardNeuralNetwork"),
        rdf::nno("ConvolutionalNeuralNetwork"),
        rdf::nno("RecurrentNeuralNetwork"),
    };
    return classes;
}

std::vector<Iri> network_nodes(const rdf::KnowledgeGraph& g) {
    std::set<Iri> nodes;
    for (const Iri& type : network_classes()) {
        for (Iri& subject : g.subjects_of(rdf::rdf_type(), type)) {
            nodes.insert(std::move(subject));
        }
    }
    return {nodes.begin(), nodes.end()};
}

bool starts_with(std::string_view text, std::string_view prefix) {
    return text.substr(0, prefix.size()) == prefix;
}

std::string count_evidence(std::size_t violations, std::size_t total, const char* what) {
    if (violations == 0) {
        return std::to_string(total) + " " + what + " checked, no violations";
    }
    return std::to_string(violations) + " of " + std::to_string(total) + " " + what +
           " violate the check";
}

/// The dataset node of a VoID description; the first void:Dataset subject.
std::optional<Iri> dataset_node(const rdf::KnowledgeGraph& void_graph) {
    auto subjects = void_graph.subjects_of(rdf::rdf_type(), rdf::void_iri("Dataset"));
    if (subjects.empty()) return std::nullopt;
    return subjects.front();
}

bool has_any(const rdf::KnowledgeGraph& g, const Iri& subject, const Iri& predicate) {
    return !g.objects_of(subject, predicate).empty();
}

}  // namespace

// ---------------------------------------------------------------------------
// Ground-truth evaluation

ArchitectureManifest load_manifest(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("class_name") || !doc["class_name"].is_string()) {
        throw ManifestError("manifest lacks a top-level class_name");
    }
    if (!doc.contains("config") || !doc["config"].is_object() ||
        !doc["config"].contains("layers") || !doc["config"]["layers"].is_array()) {
        throw ManifestError("manifest lacks config.layers");
    }
    ArchitectureManifest manifest;
    for (const json& layer : doc["config"]["layers"]) {
        if (!layer.is_object() || !layer.contains("class_name") ||
            !layer["class_name"].is_string()) {
            throw ManifestError("layer entry lacks class_name");
        }
        std::string name = layer["class_name"].get<std::string>();
        if (name.empty()) throw ManifestError("layer class_name is empty");
        manifest.layer_class_names.push_back(std::move(name));
    }
    return manifest;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> previous(b.size() + 1, 0);
    std::vector<std::size_t> current(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            current[j] = a[i - 1] == b[j - 1] ? previous[j - 1] + 1
                                              : std::max(previous[j], current[j - 1]);
        }
        std::swap(previous, current);
    }
    return previous[b.size()];
}

ArchComparison compare_architecture(const extract::ExtractedModel& extracted,
                                    const ArchitectureManifest& manifest) {
    std::vector<std::string> extracted_names;
    extracted_names.reserve(extracted.layers.size());
    for (const extract::ExtractedLayer& layer : extracted.layers) {
        extracted_names.push_back(layer.name);
    }
    ArchComparison comparison;
    comparison.exact_match = extracted_names == manifest.layer_class_names;
    std::size_t longest = std::max(extracted_names.size(), manifest.layer_class_names.size());
    comparison.lcs_ratio =
        longest == 0 ? 1.0
                     : static_cast<double>(lcs_length(extracted_names,
                                                      manifest.layer_class_names)) /
                           static_cast<double>(longest);
    return comparison;
}

double corpus_accuracy(const std::vector<ArchComparison>& comparisons) {
    if (comparisons.empty()) throw EvalError("no comparisons to score");
    std::size_t matches = 0;
    for (const ArchComparison& comparison : comparisons) {
        if (comparison.exact_match) ++matches;
    }
    return static_cast<double>(matches) / static_cast<double>(comparisons.size());
}

// ---------------------------------------------------------------------------
// FAIR metrics

std::string_view to_string(MetricStatus status) {
    switch (status) {
        case MetricStatus::Pass: return "Pass";
        case MetricStatus::Fail: return "Fail";
        case MetricStatus::NotCheckableOffline: return "NotCheckableOffline";
    }
    return "Fail";
}

const MetricResult* FairReport::find(std::string_view id) const {
    for (const MetricResult& metric : metrics) {
        if (metric.id == id) return &metric;
    }
    return nullptr;
}

bool FairReport::all_offline_pass() const {
    return std::all_of(metrics.begin(), metrics.end(), [](const MetricResult& metric) {
        return metric.status != MetricStatus::Fail;
    });
}

FairReport fair_report(const rdf::KnowledgeGraph& g, const rdf::KnowledgeGraph* void_graph) {
    FairReport report;
    auto push = [&](const char* id, const char* name, MetricStatus status,
                    std::string evidence) {
        report.metrics.push_back({id, name, status, std::move(evidence)});
    };

    const std::vector<Iri> networks = network_nodes(g);
    const std::size_t n = networks.size();

    // F1A: one label / repository link / creation date per network node; a
    // double value means two networks were conflated under one IRI.
    {
        std::size_t violations = 0;
        std::string example;
        for (const Iri& node : networks) {
            bool unique = g.objects_of(node, rdf::rdfs("label")).size() <= 1 &&
                          g.objects_of(node, rdf::nno("hasRepositoryLink")).size() <= 1 &&
                          g.objects_of(node, rdf::dcterms("created")).size() <= 1;
            if (!unique) {
                ++violations;
                if (example.empty()) example = node.value();
            }
        }
        std::string evidence = count_evidence(violations, n, "network identifiers");
        if (!example.empty()) evidence += "; first: " + example;
        push("F1A", "Identifier Uniqueness",
             violations == 0 ? MetricStatus::Pass : MetricStatus::Fail, std::move(evidence));
    }

    // F1B: identifiers live in the persistent w3id namespace.
    {
        std::size_t violations = 0;
        std::string example;
        for (const Iri& node : networks) {
            if (!starts_with(node.view(), "https://w3id.org/nno/")) {
                ++violations;
                if (example.empty()) example = node.value();
            }
        }
        std::string evidence = count_evidence(violations, n, "identifiers");
        if (!example.empty()) evidence += "; first: " + example;
        push("F1B", "Identifier Persistence",
             violations == 0 ? MetricStatus::Pass : MetricStatus::Fail, std::move(evidence));
    }

    // Round-trip result is shared by F2 and I1.
    bool round_trips = false;
    std::string round_trip_evidence;
    try {
        rdf::KnowledgeGraph reparsed = rdf::parse_turtle(rdf::serialize_turtle(g));
        round_trips = reparsed == g;
        round_trip_evidence = round_trips ? "serialize/parse round-trip is the identity"
                                          : "round-trip produced a different triple set";
    } catch (const rdf::TurtleParseError& e) {
        round_trip_evidence = std::string("round-trip parse failed: ") + e.what();
    }

    // F2: machine-readable metadata — RDF round-trip plus a VoID description.
    {
        bool has_void = void_graph != nullptr && dataset_node(*void_graph).has_value();
        std::string evidence = round_trip_evidence;
        evidence += has_void ? "; VoID description present"
                             : "; no VoID description supplied";
        push("F2", "Machine-Readable Metadata",
             round_trips && has_void ? MetricStatus::Pass : MetricStatus::Fail,
             std::move(evidence));
    }

    // F3: the metadata names the resource it describes.
    {
        std::size_t violations = 0;
        std::string example;
        for (const Iri& node : networks) {
            if (!has_any(g, node, rdf::nno("hasRepositoryLink"))) {
                ++violations;
                if (example.empty()) example = node.value();
            }
        }
        std::string evidence = count_evidence(violations, n, "networks");
        if (!example.empty()) evidence += "; first: " + example;
        push("F3", "Resource Identifier in Metadata",
             violations == 0 ? MetricStatus::Pass : MetricStatus::Fail, std::move(evidence));
    }

    push("F4", "Indexed in a Searchable Resource", MetricStatus::NotCheckableOffline,
         "search-engine indexing cannot be probed offline");

    // A1.1: subjects resolvable over an open protocol (https proxy).
    {
        std::size_t violations = 0;
        std::size_t total = 0;
        for (const rdf::Triple& triple : g.triples()) {
            ++total;
            if (!starts_with(triple.subject.view(), "https://")) ++violations;
        }
        push("A1.1", "Access Protocol",
             violations == 0 ? MetricStatus::Pass : MetricStatus::Fail,
             count_evidence(violations, total, "subjects"));
    }

    // A1.2: linked resources resolvable over an open protocol (https proxy on
    // object IRIs and anyURI literal values).
    {
        std::size_t violations = 0;
        std::size_t total = 0;
        for (const rdf::Triple& triple : g.triples()) {
            if (const Iri* object = rdf::object_iri(triple.object)) {
                ++total;
                if (!starts_with(object->view(), "https://") &&
                    !starts_with(object->view(), "http://")) {
                    ++violations;
                }
            } else if (const rdf::Literal* literal = rdf::object_literal(triple.object)) {
                if (literal->is_any_uri_typed()) {
                    ++total;
                    if (!starts_with(literal->lexical, "https://")) ++violations;
                }
            }
        }
        push("A1.2", "Access Authorization",
             violations == 0 ? MetricStatus::Pass : MetricStatus::Fail,
             count_evidence(violations, total, "linked resources"));
    }

    // A2: persistence-policy statement (on the VoID dataset node).
    {
        Iri policy = Iri::checked(std::string(rdf::ns::doc) + "persistencePolicy");
        bool present = !g.subjects_with(policy).empty();
        if (!present && void_graph != nullptr) {
            present = !void_graph->subjects_with(policy).empty();
        }
        push("A2", "Metadata Longevity",
             present ? MetricStatus::Pass : MetricStatus::Fail,
             present ? "persistence-policy statement present"
                     : "no persistence-policy statement found");
    }

    push("I1", "Use a Knowledge Representation Language",
         round_trips ? MetricStatus::Pass : MetricStatus::Fail,
         std::string(round_trip_evidence));

    // I2: predicates drawn from the declared vocabularies.
    {
        static const std::vector<std::string_view> allowlist = {
            rdf::ns::nno,  rdf::ns::rdf, rdf::ns::rdfs,    rdf::ns::dcterms, rdf::ns::doap,
            rdf::ns::void_ns, rdf::ns::cc, rdf::ns::doc,   rdf::ns::xsd,
        };
        std::size_t violations = 0;
        std::string example;
        std::set<std::string> predicates;
        for (const rdf::Triple& triple : g.triples()) {
            predicates.insert(triple.predicate.value());
        }
        for (const std::string& predicate : predicates) {
            bool allowed = std::any_of(allowlist.begin(), allowlist.end(),
                                       [&](std::string_view ns) {
                                           return starts_with(predicate, ns);
                                       });
            if (!allowed) {
                ++violations;
                if (example.empty()) example = predicate;
            }
        }
        std::string evidence = count_evidence(violations, predicates.size(), "predicates");
        if (!example.empty()) evidence += "; first: " + example;
        push("I2", "Use FAIR Vocabularies",
             violations == 0 ? MetricStatus::Pass : MetricStatus::Fail, std::move(evidence));
    }

    // I3: qualified references — scholarly shapes only.
    {
        std::size_t violations = 0;
        std::size_t total = 0;
        std::string example;
        for (const rdf::Triple& triple : g.triples()) {
            if (triple.predicate != rdf::dcterms("references")) continue;
            ++total;
            const Iri* object = rdf::object_iri(triple.object);
            if (object == nullptr || !ingest::is_scholarly_url(object->view())) {
                ++violations;
                if (example.empty() && object != nullptr) example = object->value();
            }
        }
        std::string evidence = count_evidence(violations, total, "references");
        if (!example.empty()) evidence += "; first: " + example;
        push("I3", "Use Qualified References",
             violations == 0 ? MetricStatus::Pass : MetricStatus::Fail, std::move(evidence));
    }

    // R1.1: dataset-level license, with per-network coverage as evidence.
    {
        bool dataset_licensed = false;
        if (void_graph != nullptr) {
            if (auto ds = dataset_node(*void_graph)) {
                dataset_licensed =
                    has_any(*void_graph, *ds, Iri::checked(std::string(rdf::ns::cc) + "license")) ||
                    has_any(*void_graph, *ds, rdf::dcterms("license"));
            }
        }
        std::size_t licensed_networks = 0;
        for (const Iri& node : networks) {
            if (has_any(g, node, rdf::dcterms("license"))) ++licensed_networks;
        }
        std::string evidence = dataset_licensed ? "dataset license present"
                                                : "no dataset license statement";
        evidence += "; " + std::to_string(licensed_networks) + " of " + std::to_string(n) +
                    " networks carry a license";
        push("R1.1", "Accessible Usage License",
             dataset_licensed ? MetricStatus::Pass : MetricStatus::Fail, std::move(evidence));
    }

    // R1.2: provenance — creator and creation date on every network.
    {
        std::size_t violations = 0;
        std::string example;
        for (const Iri& node : networks) {
            if (!has_any(g, node, rdf::dcterms("creator")) ||
                !has_any(g, node, rdf::dcterms("created"))) {
                ++violations;
                if (example.empty()) example = node.value();
            }
        }
        std::string evidence = count_evidence(violations, n, "networks");
        if (!example.empty()) evidence += "; first: " + example;
        push("R1.2", "Detailed Provenance",
             violations == 0 ? MetricStatus::Pass : MetricStatus::Fail, std::move(evidence));
    }

    // R1.3: community standards — the dataset node is titled and described.
    {
        bool described = false;
        if (void_graph != nullptr) {
            if (auto ds = dataset_node(*void_graph)) {
                bool titled = has_any(*void_graph, *ds, rdf::dcterms("title")) ||
                              has_any(*void_graph, *ds, rdf::rdfs("label"));
                bool commented = has_any(*void_graph, *ds, rdf::dcterms("description")) ||
                                 has_any(*void_graph, *ds, rdf::rdfs("comment"));
                described = titled && commented;
            }
        }
        push("R1.3", "Meets Community Standards",
             described ? MetricStatus::Pass : MetricStatus::Fail,
             described ? "dataset node carries title and description"
                       : "dataset node lacks title or description");
    }

    return report;
}

// ---------------------------------------------------------------------------
// Corpus statistics

int half_up_percentage(std::size_t count, std::size_t total) {
    if (total == 0) return 0;
    return static_cast<int>((200 * count + total) / (2 * total));
}

StatsReport corpus_stats(const rdf::KnowledgeGraph& g) {
    StatsReport report;

    std::set<std::string> repository_links;
    std::set<std::string> creators;
    std::set<Iri> linked_subjects;
    for (const rdf::Triple& triple : g.triples()) {
        if (triple.predicate == rdf::nno("hasRepositoryLink")) {
            if (const rdf::Literal* literal = rdf::object_literal(triple.object)) {
                repository_links.insert(literal->lexical);
            } else if (const Iri* iri = rdf::object_iri(triple.object)) {
                repository_links.insert(iri->value());
            }
            linked_subjects.insert(triple.subject);
        }
        if (triple.predicate == rdf::dcterms("creator")) {
            if (const Iri* iri = rdf::object_iri(triple.object)) {
                creators.insert(iri->value());
            } else if (const rdf::Literal* literal = rdf::object_literal(triple.object)) {
                creators.insert(literal->lexical);
            }
        }
    }
    report.repositories = repository_links.size();
    report.unique_users = creators.size();

    const std::vector<std::pair<inference::NetworkType, Iri>> classes = {
        {inference::NetworkType::FFNN, rdf::nno("FeedForwardNeuralNetwork")},
        {inference::NetworkType::CNN, rdf::nno("ConvolutionalNeuralNetwork")},
        {inference::NetworkType::RNN, rdf::nno("RecurrentNeuralNetwork")},
    };
    std::set<Iri> typed;
    for (const auto& [type, class_iri] : classes) {
        auto subjects = g.subjects_of(rdf::rdf_type(), class_iri);
        report.per_type[type].count = subjects.size();
        for (Iri& subject : subjects) typed.insert(std::move(subject));
    }
    report.networks = typed.size();
    for (auto& [type, slice] : report.per_type) {
        slice.percentage = half_up_percentage(slice.count, report.networks);
    }
    for (const Iri& subject : linked_subjects) {
        if (!typed.count(subject)) ++report.untyped_with_repository_link;
    }
    return report;
}

}  // namespace fairnets::audit

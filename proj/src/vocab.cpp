#include "fairnets/vocab.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "vocabulary_manifest.inc"

namespace fairnets::vocab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t at = s.find(sep, start);
        if (at == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, at - start));
        start = at + 1;
    }
}

[[noreturn]] void manifest_fail(int line, const std::string& what) {
    throw ConfigError("vocabulary manifest, line " + std::to_string(line) + ": " + what);
}

Iri expand_iri(std::string_view field, int line) {
    std::string full;
    if (field.substr(0, 4) == "nno:") {
        full = std::string(rdf::ns::nno) + std::string(field.substr(4));
    } else {
        full = std::string(field);
    }
    auto iri = Iri::parse(full);
    if (!iri) manifest_fail(line, "not an IRI: '" + std::string(field) + "'");
    return *iri;
}

std::optional<LayerFamily> family_from(std::string_view name) {
    static constexpr std::array<std::pair<std::string_view, LayerFamily>, 9> table = {{
        {"Core", LayerFamily::Core},
        {"Convolutional", LayerFamily::Convolutional},
        {"Recurrent", LayerFamily::Recurrent},
        {"Pooling", LayerFamily::Pooling},
        {"Normalization", LayerFamily::Normalization},
        {"Embedding", LayerFamily::Embedding},
        {"Merge", LayerFamily::Merge},
        {"Activation", LayerFamily::Activation},
        {"Other", LayerFamily::Other},
    }};
    for (const auto& [key, value] : table) {
        if (key == name) return value;
    }
    return std::nullopt;
}

std::string_view family_superclass_local(LayerFamily family) {
    switch (family) {
        case LayerFamily::Core: return "CoreLayer";
        case LayerFamily::Convolutional: return "ConvolutionalLayer";
        case LayerFamily::Recurrent: return "RecurrentLayer";
        case LayerFamily::Pooling: return "PoolingLayer";
        case LayerFamily::Normalization: return "NormalizationLayer";
        case LayerFamily::Embedding: return "EmbeddingLayer";
        case LayerFamily::Merge: return "MergeLayer";
        case LayerFamily::Activation: return "ActivationLayer";
        case LayerFamily::Other: return "Layer";
    }
    return "Layer";
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(LayerFamily family) {
    switch (family) {
        case LayerFamily::Core: return "Core";
        case LayerFamily::Convolutional: return "Convolutional";
        case LayerFamily::Recurrent: return "Recurrent";
        case LayerFamily::Pooling: return "Pooling";
        case LayerFamily::Normalization: return "Normalization";
        case LayerFamily::Embedding: return "Embedding";
        case LayerFamily::Merge: return "Merge";
        case LayerFamily::Activation: return "Activation";
        case LayerFamily::Other: return "Other";
    }
    return "Other";
}

std::string_view to_string(LossCategory category) {
    return category == LossCategory::Classification ? "Classification" : "Regression";
}

std::string normalize_loss_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (char c : trim(name)) {
        if (c == '-' || c == '_') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

const VocabularyTerm* Vocabulary::find(const Iri& iri) const {
    auto it = term_by_iri_.find(iri.value());
    return it == term_by_iri_.end() ? nullptr : &terms_[it->second];
}

const LayerClass* Vocabulary::resolve_layer_class(std::string_view name) const {
    auto it = layer_by_name_.find(trim(name));
    return it == layer_by_name_.end() ? nullptr : &layers_[it->second];
}

const LossTerm* Vocabulary::resolve_loss(std::string_view name) const {
    auto it = loss_by_key_.find(normalize_loss_name(name));
    return it == loss_by_key_.end() ? nullptr : &losses_[it->second];
}

std::optional<LossCategory> Vocabulary::loss_category(std::string_view name) const {
    const LossTerm* loss = resolve_loss(name);
    if (!loss) return std::nullopt;
    return loss->category;
}

const OptimizerTerm* Vocabulary::resolve_optimizer(std::string_view name) const {
    auto it = optimizer_by_name_.find(lower(trim(name)));
    return it == optimizer_by_name_.end() ? nullptr : &optimizers_[it->second];
}

CardinalityReport Vocabulary::cardinality() const {
    CardinalityReport report;
    for (const VocabularyTerm& term : terms_) {
        switch (term.kind) {
            case TermKind::Class: ++report.classes; break;
            case TermKind::ObjectProperty: ++report.object_properties; break;
            case TermKind::DataProperty: ++report.data_properties; break;
            case TermKind::Individual: ++report.individuals; break;
        }
    }
    return report;
}

rdf::KnowledgeGraph Vocabulary::to_graph() const {
    rdf::KnowledgeGraph graph = rdf::KnowledgeGraph::with_default_prefixes();
    const Iri rdfs_class = rdf::rdfs("Class");
    const Iri rdf_property = Iri::checked(std::string(rdf::ns::rdf) + "Property");
    const Iri sub_class_of = rdf::rdfs("subClassOf");
    const Iri sub_property_of = rdf::rdfs("subPropertyOf");
    const Iri label = rdf::rdfs("label");
    const Iri comment = rdf::rdfs("comment");
    for (const VocabularyTerm& term : terms_) {
        switch (term.kind) {
            case TermKind::Class:
                graph.add(term.iri, rdf::rdf_type(), rdfs_class);
                if (term.parent) graph.add(term.iri, sub_class_of, *term.parent);
                break;
            case TermKind::ObjectProperty:
            case TermKind::DataProperty:
                graph.add(term.iri, rdf::rdf_type(), rdf_property);
                if (term.parent) graph.add(term.iri, sub_property_of, *term.parent);
                break;
            case TermKind::Individual:
                if (term.parent) graph.add(term.iri, rdf::rdf_type(), *term.parent);
                break;
        }
        graph.add(term.iri, label, rdf::Literal::lang(term.label, "en"));
        if (!term.comment.empty()) {
            graph.add(term.iri, comment, rdf::Literal::lang(term.comment, "en"));
        }
    }
    return graph;
}

const Iri& Vocabulary::root_layer_class() {
    static const Iri iri = rdf::nno("Layer");
    return iri;
}

Vocabulary parse_vocabulary_manifest(std::string_view text) {
    Vocabulary vocab;

    struct PendingParent {
        std::string iri;
        int line;
        bool must_be_class;
    };
    std::vector<PendingParent> pending;

    int line_no = 0;
    for (std::string_view raw_line : split(text, '\n')) {
        ++line_no;
        std::string_view line = trim(raw_line);
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string_view> fields = split(line, '|');
        if (fields.size() != 7) {
            manifest_fail(line_no, "expected 7 fields, got " + std::to_string(fields.size()));
        }
        for (auto& f : fields) f = trim(f);
        const std::string_view kind_field = fields[0];
        const std::string_view label_field = fields[2];
        const std::string_view parent_field = fields[3];
        const std::string_view slot1 = fields[4];
        const std::string_view slot2 = fields[5];
        const std::string_view comment_field = fields[6];

        if (label_field.empty()) manifest_fail(line_no, "empty label");
        Iri iri = expand_iri(fields[1], line_no);

        VocabularyTerm term;
        term.iri = iri;
        term.label = std::string(label_field);
        term.comment = std::string(comment_field);
        if (parent_field != "-") {
            term.parent = expand_iri(parent_field, line_no);
        }

        if (kind_field == "class") {
            term.kind = TermKind::Class;
            if (term.parent) pending.push_back({term.parent->value(), line_no, true});
        } else if (kind_field == "layer") {
            term.kind = TermKind::Class;
            auto family = family_from(slot1);
            if (!family) manifest_fail(line_no, "unknown layer family '" + std::string(slot1) + "'");
            if (slot2.empty() || slot2 == "-") manifest_fail(line_no, "layer needs a canonical name");
            if (!term.parent) manifest_fail(line_no, "layer needs a parent class");
            std::string expected_parent =
                std::string(rdf::ns::nno) + std::string(family_superclass_local(*family));
            if (term.parent->value() != expected_parent) {
                manifest_fail(line_no, "family " + std::string(slot1) + " requires parent <" +
                                           expected_parent + ">");
            }
            pending.push_back({term.parent->value(), line_no, true});
            LayerClass layer{term, *family, std::string(slot2)};
            if (!vocab.layer_by_name_.emplace(layer.canonical_name, vocab.layers_.size()).second) {
                manifest_fail(line_no, "duplicate layer name '" + layer.canonical_name + "'");
            }
            vocab.layers_.push_back(std::move(layer));
        } else if (kind_field == "loss") {
            term.kind = TermKind::Individual;
            if (slot1 != "Classification" && slot1 != "Regression") {
                manifest_fail(line_no, "unknown loss category '" + std::string(slot1) + "'");
            }
            LossCategory category = slot1 == "Classification" ? LossCategory::Classification
                                                              : LossCategory::Regression;
            std::string expected_parent = std::string(rdf::ns::nno) + std::string(slot1) +
                                          "LossFunction";
            if (!term.parent || term.parent->value() != expected_parent) {
                manifest_fail(line_no, "loss parent must be <" + expected_parent + ">");
            }
            pending.push_back({term.parent->value(), line_no, true});
            std::vector<std::string_view> names = split(slot2, ',');
            if (names.empty() || trim(names[0]).empty()) {
                manifest_fail(line_no, "loss needs a canonical name");
            }
            LossTerm loss;
            loss.term = term;
            loss.category = category;
            loss.canonical_name = std::string(trim(names[0]));
            for (std::size_t i = 1; i < names.size(); ++i) {
                loss.aliases.emplace_back(trim(names[i]));
            }
            std::vector<std::string> keys{normalize_loss_name(loss.canonical_name)};
            for (const std::string& alias : loss.aliases) keys.push_back(normalize_loss_name(alias));
            for (const std::string& key : keys) {
                if (key.empty()) manifest_fail(line_no, "empty loss name");
                if (!vocab.loss_by_key_.emplace(key, vocab.losses_.size()).second) {
                    manifest_fail(line_no, "loss key '" + key + "' already taken");
                }
            }
            vocab.losses_.push_back(std::move(loss));
        } else if (kind_field == "optimizer") {
            term.kind = TermKind::Individual;
            std::string expected_parent = std::string(rdf::ns::nno) + "Optimizer";
            if (!term.parent || term.parent->value() != expected_parent) {
                manifest_fail(line_no, "optimizer parent must be <" + expected_parent + ">");
            }
            pending.push_back({term.parent->value(), line_no, true});
            if (slot2.empty() || slot2 == "-") manifest_fail(line_no, "optimizer needs a name");
            std::string canonical(slot2);
            if (canonical != lower(canonical)) {
                manifest_fail(line_no, "optimizer name '" + canonical + "' must be lowercase");
            }
            if (!vocab.optimizer_by_name_.emplace(canonical, vocab.optimizers_.size()).second) {
                manifest_fail(line_no, "duplicate optimizer '" + canonical + "'");
            }
            vocab.optimizers_.push_back({term, std::move(canonical)});
        } else if (kind_field == "objprop" || kind_field == "dataprop") {
            term.kind = kind_field == "objprop" ? TermKind::ObjectProperty : TermKind::DataProperty;
            if (term.parent) pending.push_back({term.parent->value(), line_no, false});
        } else {
            manifest_fail(line_no, "unknown record kind '" + std::string(kind_field) + "'");
        }

        if (!vocab.term_by_iri_.emplace(term.iri.value(), vocab.terms_.size()).second) {
            manifest_fail(line_no, "duplicate term IRI <" + term.iri.value() + ">");
        }
        vocab.terms_.push_back(std::move(term));
    }

    for (const auto& p : pending) {
        auto it = vocab.term_by_iri_.find(p.iri);
        if (it == vocab.term_by_iri_.end()) {
            manifest_fail(p.line, "parent <" + p.iri + "> is not defined");
        }
        const VocabularyTerm& parent = vocab.terms_[it->second];
        if (p.must_be_class && parent.kind != TermKind::Class) {
            manifest_fail(p.line, "parent <" + p.iri + "> is not a class");
        }
        if (!p.must_be_class &&
            (parent.kind != TermKind::ObjectProperty && parent.kind != TermKind::DataProperty)) {
            manifest_fail(p.line, "parent <" + p.iri + "> is not a property");
        }
    }

    // The layer taxonomy must be a tree rooted at the layer root, at most
    // four subclass steps deep.
    const std::string root = Vocabulary::root_layer_class().value();
    for (const LayerClass& layer : vocab.layer_classes()) {
        std::string at = layer.term.iri.value();
        int steps = 0;
        while (at != root) {
            auto it = vocab.term_by_iri_.find(at);
            if (it == vocab.term_by_iri_.end()) {
                throw ConfigError("layer taxonomy chain leaves the manifest at <" + at + ">");
            }
            const VocabularyTerm& t = vocab.terms_[it->second];
            if (!t.parent || ++steps > 4) {
                throw ConfigError("layer class <" + layer.term.iri.value() +
                                  "> does not reach the layer root within 4 steps");
            }
            at = t.parent->value();
        }
    }

    return vocab;
}

const Vocabulary& builtin_vocabulary() {
    static const Vocabulary vocab = parse_vocabulary_manifest(kVocabularyManifestText);
    return vocab;
}

std::string_view builtin_manifest_text() { return kVocabularyManifestText; }

}  // namespace fairnets::vocab

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairnets/errors.hpp"
#include "fairnets/iri.hpp"
#include "fairnets/rdf.hpp"

namespace fairnets::vocab {

enum class TermKind { Class, ObjectProperty, DataProperty, Individual };

enum class LayerFamily {
    Core,
    Convolutional,
    Recurrent,
    Pooling,
    Normalization,
    Embedding,
    Merge,
    Activation,
    Other,
};

enum class LossCategory { Classification, Regression };

std::string_view to_string(LayerFamily family);
std::string_view to_string(LossCategory category);

struct VocabularyTerm {
    Iri iri;
    TermKind kind = TermKind::Class;
    std::string label;
    std::string comment;           // may be empty
    std::optional<Iri> parent;     // superclass, superproperty, or type of an individual
};

struct LayerClass {
    VocabularyTerm term;
    LayerFamily family = LayerFamily::Other;
    std::string canonical_name;    // constructor name as written in source
};

struct LossTerm {
    VocabularyTerm term;
    LossCategory category = LossCategory::Classification;
    std::string canonical_name;
    std::vector<std::string> aliases;
};

struct OptimizerTerm {
    VocabularyTerm term;
    std::string canonical_name;    // lowercase
};

struct CardinalityReport {
    std::size_t classes = 0;
    std::size_t object_properties = 0;
    std::size_t data_properties = 0;
    std::size_t individuals = 0;

    std::size_t total() const { return classes + object_properties + data_properties + individuals; }
};

// Loss-name normalization: lowercase, hyphens and underscores removed.
// "BinaryCrossentropy", "binary-crossentropy" and "binary_crossentropy" all
// collapse to the same key.
std::string normalize_loss_name(std::string_view name);

class Vocabulary {
  public:
    const std::vector<VocabularyTerm>& terms() const { return terms_; }
    const std::vector<LayerClass>& layer_classes() const { return layers_; }
    const std::vector<LossTerm>& losses() const { return losses_; }
    const std::vector<OptimizerTerm>& optimizers() const { return optimizers_; }

    const VocabularyTerm* find(const Iri& iri) const;

    // Exact match on the canonical constructor name (input trimmed of ASCII
    // whitespace). Returns nullptr for names outside the taxonomy.
    const LayerClass* resolve_layer_class(std::string_view name) const;

    const LossTerm* resolve_loss(std::string_view name) const;
    std::optional<LossCategory> loss_category(std::string_view name) const;

    // Case-insensitive match on the optimizer's canonical name.
    const OptimizerTerm* resolve_optimizer(std::string_view name) const;

    CardinalityReport cardinality() const;

    // Vocabulary terms as RDF: rdfs:Class / rdf:Property typing,
    // rdfs:subClassOf / rdfs:subPropertyOf hierarchy, labels, comments;
    // individuals typed to their parent class.
    rdf::KnowledgeGraph to_graph() const;

    static const Iri& root_layer_class();

  private:
    friend Vocabulary parse_vocabulary_manifest(std::string_view text);

    std::vector<VocabularyTerm> terms_;
    std::vector<LayerClass> layers_;
    std::vector<LossTerm> losses_;
    std::vector<OptimizerTerm> optimizers_;
    std::map<std::string, std::size_t, std::less<>> term_by_iri_;
    std::map<std::string, std::size_t, std::less<>> layer_by_name_;
    std::map<std::string, std::size_t, std::less<>> loss_by_key_;
    std::map<std::string, std::size_t, std::less<>> optimizer_by_name_;
};

// Parses manifest text. Throws ConfigError on malformed records, duplicate
// IRIs or names, dangling or inconsistent parents.
Vocabulary parse_vocabulary_manifest(std::string_view text);

// The manifest compiled into the binary.
const Vocabulary& builtin_vocabulary();
std::string_view builtin_manifest_text();

}  // namespace fairnets::vocab

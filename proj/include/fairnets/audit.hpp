#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairnets/extract.hpp"
#include "fairnets/inference.hpp"
#include "fairnets/rdf.hpp"

namespace fairnets::audit {

// ---------------------------------------------------------------------------
// Ground-truth evaluation

struct ArchitectureManifest {
    std::string source_model;                    // path of the exporting model file
    std::vector<std::string> layer_class_names;  // stored order
};

/// Parses framework model-config JSON (top-level class name plus an ordered
/// layer list whose entries each carry `class_name`). Throws ManifestError.
ArchitectureManifest load_manifest(std::string_view json_text);

struct ArchComparison {
    bool exact_match = false;
    double lcs_ratio = 0.0;   // LCS length / max sequence length; 1.0 for two empties
};

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Compares the ordered layer-class-name sequences.
ArchComparison compare_architecture(const extract::ExtractedModel& extracted,
                                    const ArchitectureManifest& manifest);

/// Fraction of exact matches. Throws EvalError on an empty list.
double corpus_accuracy(const std::vector<ArchComparison>& comparisons);

// ---------------------------------------------------------------------------
// FAIR metrics

enum class MetricStatus { Pass, Fail, NotCheckableOffline };

std::string_view to_string(MetricStatus status);

struct MetricResult {
    std::string id;         // e.g. "F1B"
    std::string name;
    MetricStatus status = MetricStatus::Pass;
    std::string evidence;   // counts or offending examples
};

struct FairReport {
    std::vector<MetricResult> metrics;   // fixed 14-entry order

    const MetricResult* find(std::string_view id) const;
    /// True when nothing fails (NotCheckableOffline entries do not count
    /// against the graph).
    bool all_offline_pass() const;
};

/// Scores the graph against the fourteen Generation2 metrics; dataset-level
/// checks (VoID existence, persistence policy, dataset license, dataset
/// label+comment) read the VoID graph when one is supplied.
FairReport fair_report(const rdf::KnowledgeGraph& g,
                       const rdf::KnowledgeGraph* void_graph = nullptr);

// ---------------------------------------------------------------------------
// Corpus statistics

struct TypeSlice {
    std::size_t count = 0;
    int percentage = 0;   // integer, rounded half-up
};

struct StatsReport {
    std::size_t repositories = 0;    // distinct repository links
    std::size_t unique_users = 0;    // distinct creators
    std::size_t networks = 0;        // nodes typed to a network class
    std::size_t untyped_with_repository_link = 0;   // excluded from perType
    std::map<inference::NetworkType, TypeSlice> per_type;
};

/// Integer percentage of count/total, rounded half-up; 0 when total is 0.
int half_up_percentage(std::size_t count, std::size_t total);

StatsReport corpus_stats(const rdf::KnowledgeGraph& g);

}  // namespace fairnets::audit

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairnets/config.hpp"
#include "fairnets/graph_build.hpp"
#include "fairnets/vocab.hpp"

namespace fairnets::pipeline {

/// Everything one corpus repository contributes.
struct RepoResult {
    std::string directory;   // "<owner>__<repo>"
    ingest::RepositoryRecord record;
    std::vector<graph::NetworkDescriptor> descriptors;
    std::vector<std::string> diagnostics;   // file-level notes, parse failures
};

/// Repository directories (those containing metadata.json), sorted by name.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& corpus_dir);

/// Loads metadata.json + README.md, extracts models from src/**/*.py in
/// sorted path order, assembles descriptors. Throws MappingError when
/// metadata.json is missing or unusable; source files that fail to parse are
/// skipped with a diagnostic.
RepoResult process_repository(const std::filesystem::path& repo_dir,
                              const vocab::Vocabulary& vocabulary,
                              const config::Config& config);

struct CorpusBuild {
    std::vector<graph::NetworkDescriptor> descriptors;
    std::vector<std::string> diagnostics;
    std::size_t repositories = 0;
};

/// Processes every repository, fanning out over `jobs` workers; results merge
/// in directory order, so output is independent of scheduling. Verifies
/// corpus-wide IRI uniqueness.
CorpusBuild build_corpus(const std::filesystem::path& corpus_dir, int jobs,
                         const vocab::Vocabulary& vocabulary, const config::Config& config);

nlohmann::json descriptor_to_json(const graph::NetworkDescriptor& descriptor);

/// Writes a fetched repository into the corpus layout
/// (<corpus>/<owner>__<repo>/metadata.json + README.md).
std::filesystem::path write_corpus_entry(const std::filesystem::path& corpus_dir,
                                         const ingest::RawRepoDocument& raw);

}  // namespace fairnets::pipeline

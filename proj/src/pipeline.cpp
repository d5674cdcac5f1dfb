#include "fairnets/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "fairnets/errors.hpp"
#include "fairnets/extract.hpp"

namespace fairnets::pipeline {

namespace {

using nlohmann::json;

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string diagnostic_line(const std::string& file, const extract::Diagnostic& d) {
    std::string severity = d.severity == extract::Diagnostic::Severity::Warning ? "warning" : "info";
    return file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ": " +
           severity + " [" + d.code + "] " + d.message;
}

json value_to_json(const extract::LiteralValue& value) {
    using Kind = extract::LiteralValue::Kind;
    switch (value.kind) {
        case Kind::Text:
        case Kind::Opaque:
            return value.text;
        case Kind::Integer:
            return value.integer;
        case Kind::Real:
            return value.real;
        case Kind::Boolean:
            return value.boolean;
        case Kind::None:
            return nullptr;
        case Kind::List: {
            json array = json::array();
            for (const extract::LiteralValue& item : value.items) {
                array.push_back(value_to_json(item));
            }
            return array;
        }
        case Kind::Map: {
            json object = json::object();
            for (std::size_t i = 0; i + 1 < value.items.size(); i += 2) {
                const extract::LiteralValue& key = value.items[i];
                std::string key_text = key.kind == Kind::Text ? key.text
                                                              : extract::render_value(key);
                object[key_text] = value_to_json(value.items[i + 1]);
            }
            return object;
        }
    }
    return nullptr;
}

json diagnostics_to_json(const std::vector<extract::Diagnostic>& diagnostics) {
    json array = json::array();
    for (const extract::Diagnostic& d : diagnostics) {
        array.push_back({
            {"severity",
             d.severity == extract::Diagnostic::Severity::Warning ? "warning" : "info"},
            {"code", d.code},
            {"message", d.message},
            {"line", d.span.line},
            {"col", d.span.col},
        });
    }
    return array;
}

}  // namespace

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& corpus_dir) {
    std::vector<std::filesystem::path> repos;
    if (!std::filesystem::is_directory(corpus_dir)) return repos;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "metadata.json")) {
            repos.push_back(entry.path());
        }
    }
    std::sort(repos.begin(), repos.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });
    return repos;
}

RepoResult process_repository(const std::filesystem::path& repo_dir,
                              const vocab::Vocabulary& vocabulary,
                              const config::Config& config) {
    RepoResult result;
    result.directory = repo_dir.filename().string();

    auto metadata_text = read_file(repo_dir / "metadata.json");
    if (!metadata_text) {
        throw MappingError("missing metadata.json in " + repo_dir.string());
    }
    ingest::RawRepoDocument raw;
    try {
        raw.metadata = json::parse(*metadata_text);
    } catch (const json::exception& e) {
        throw MappingError("unreadable metadata.json in " + repo_dir.string() + ": " + e.what());
    }
    if (auto readme = read_file(repo_dir / "README.md")) raw.readme = *readme;
    result.record = ingest::map_repository(raw);

    std::vector<ingest::Reference> references =
        ingest::extract_references(raw.readme, config.extra_badge_hosts);

    std::optional<Iri> dataset;
    if (auto sidecar = read_file(repo_dir / "dataset.txt")) {
        std::istringstream lines(*sidecar);
        std::string line;
        while (std::getline(lines, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty()) {
                dataset = Iri::parse(line);
                if (!dataset) {
                    result.diagnostics.push_back("dataset.txt: not an http(s) IRI: " + line);
                }
                break;
            }
        }
    }

    std::vector<std::filesystem::path> sources;
    if (std::filesystem::is_directory(repo_dir / "src")) {
        for (const auto& entry :
             std::filesystem::recursive_directory_iterator(repo_dir / "src")) {
            if (entry.is_regular_file() && entry.path().extension() == ".py") {
                sources.push_back(entry.path());
            }
        }
    }
    std::sort(sources.begin(), sources.end(), [](const auto& a, const auto& b) {
        return a.generic_string() < b.generic_string();
    });

    std::vector<extract::ExtractedModel> models;
    for (const std::filesystem::path& source : sources) {
        std::string relative =
            std::filesystem::relative(source, repo_dir).generic_string();
        auto text = read_file(source);
        if (!text) {
            result.diagnostics.push_back(relative + ": unreadable file");
            continue;
        }
        extract::FileExtraction extraction =
            extract::extract_models(*text, relative, vocabulary);
        if (extraction.parse_failure) {
            result.diagnostics.push_back(relative + ":" +
                                         std::to_string(extraction.parse_failure->line) + ":" +
                                         std::to_string(extraction.parse_failure->col) +
                                         ": parse error: " + extraction.parse_failure->message);
            continue;
        }
        for (const extract::Diagnostic& d : extraction.file_diagnostics) {
            result.diagnostics.push_back(diagnostic_line(relative, d));
        }
        for (extract::ExtractedModel& model : extraction.models) {
            models.push_back(std::move(model));
        }
    }

    int models_in_repo = static_cast<int>(models.size());
    for (extract::ExtractedModel& model : models) {
        graph::NetworkDescriptor descriptor =
            graph::assemble_descriptor(result.record, std::move(model), references,
                                       models_in_repo, config.data_namespace);
        descriptor.dataset = dataset;
        result.descriptors.push_back(std::move(descriptor));
    }
    return result;
}

CorpusBuild build_corpus(const std::filesystem::path& corpus_dir, int jobs,
                         const vocab::Vocabulary& vocabulary, const config::Config& config) {
    std::vector<std::filesystem::path> repos = list_corpus(corpus_dir);
    std::vector<RepoResult> results(repos.size());
    std::vector<std::exception_ptr> failures(repos.size());

    int worker_count = std::max(1, jobs);
    int repo_count = static_cast<int>(repos.size());
    if (repo_count > 0 && worker_count > repo_count) worker_count = repo_count;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t index = next.fetch_add(1);
            if (index >= repos.size()) return;
            try {
                results[index] = process_repository(repos[index], vocabulary, config);
            } catch (...) {
                failures[index] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(worker_count));
    for (int i = 0; i < worker_count; ++i) workers.emplace_back(worker);
    for (std::thread& thread : workers) thread.join();

    for (const std::exception_ptr& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    CorpusBuild build;
    build.repositories = repos.size();
    for (RepoResult& result : results) {
        for (std::string& diagnostic : result.diagnostics) {
            build.diagnostics.push_back(result.directory + "/" + diagnostic);
        }
        for (graph::NetworkDescriptor& descriptor : result.descriptors) {
            build.descriptors.push_back(std::move(descriptor));
        }
    }
    graph::verify_unique_iris(build.descriptors);
    return build;
}

nlohmann::json descriptor_to_json(const graph::NetworkDescriptor& descriptor) {
    json layers = json::array();
    for (const extract::ExtractedLayer& layer : descriptor.model.layers) {
        json parameters = json::array();
        for (const extract::LiteralValue& value : layer.positional_params) {
            parameters.push_back(value_to_json(value));
        }
        json keywords = json::object();
        for (const auto& [name, value] : layer.keywords) {
            keywords[name] = value_to_json(value);
        }
        layers.push_back({
            {"position", layer.position},
            {"name", layer.name},
            {"class_iri",
             layer.layer_class ? json(layer.layer_class->term.iri.value()) : json(nullptr)},
            {"family",
             layer.layer_class ? json(std::string(vocab::to_string(layer.layer_class->family)))
                               : json(nullptr)},
            {"parameters", std::move(parameters)},
            {"keywords", std::move(keywords)},
        });
    }
    json references = json::array();
    for (const ingest::Reference& reference : descriptor.references) {
        references.push_back({
            {"url", reference.url.value()},
            {"kind",
             reference.kind == ingest::Reference::Kind::Scholarly ? "Scholarly" : "SeeAlso"},
        });
    }
    return json{
        {"iri", descriptor.iri.value()},
        {"repository", descriptor.record.full_name},
        {"source_file", descriptor.model.source_file},
        {"model_ordinal", descriptor.model.model_ordinal},
        {"variable", descriptor.model.variable},
        {"network_type", inference::to_string(descriptor.network_type)},
        {"optimizer",
         descriptor.model.optimizer ? json(*descriptor.model.optimizer) : json(nullptr)},
        {"loss_function",
         descriptor.model.loss_function ? json(*descriptor.model.loss_function) : json(nullptr)},
        {"layers", std::move(layers)},
        {"references", std::move(references)},
        {"dataset", descriptor.dataset ? json(descriptor.dataset->value()) : json(nullptr)},
        {"diagnostics", diagnostics_to_json(descriptor.model.diagnostics)},
    };
}

std::filesystem::path write_corpus_entry(const std::filesystem::path& corpus_dir,
                                         const ingest::RawRepoDocument& raw) {
    if (!raw.metadata.is_object() || !raw.metadata.contains("full_name") ||
        !raw.metadata["full_name"].is_string()) {
        throw MappingError("fetched document lacks full_name");
    }
    std::string full_name = raw.metadata["full_name"].get<std::string>();
    std::string directory = full_name;
    std::replace(directory.begin(), directory.end(), '/', '_');
    std::size_t slash = full_name.find('/');
    if (slash != std::string::npos) {
        directory = full_name.substr(0, slash) + "__" + full_name.substr(slash + 1);
    }
    std::filesystem::path repo_dir = corpus_dir / directory;
    std::filesystem::create_directories(repo_dir / "src");

    json metadata = raw.metadata;
    if (!raw.topics.empty()) metadata["topics"] = raw.topics;

    std::ofstream meta(repo_dir / "metadata.json", std::ios::binary);
    meta << metadata.dump(2) << "\n";
    if (!raw.readme.empty()) {
        std::ofstream readme(repo_dir / "README.md", std::ios::binary);
        readme << raw.readme;
    }
    return repo_dir;
}

}  // namespace fairnets::pipeline

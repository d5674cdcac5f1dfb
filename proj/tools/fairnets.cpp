#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairnets/audit.hpp"
#include "fairnets/config.hpp"
#include "fairnets/errors.hpp"
#include "fairnets/github.hpp"
#include "fairnets/graph_build.hpp"
#include "fairnets/pipeline.hpp"
#include "fairnets/query.hpp"
#include "fairnets/turtle.hpp"
#include "fairnets/vocab.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace fairnets;

constexpr const char* kVersion =
    "fairnets 1.0.0 (python-3.8 subject grammar, keras-2.3.1 vocabulary)";

// Exit codes: 0 ok, 1 fair-check failure, 2 input error, 3 IRI collision,
// 4 strict-eval missing manifest, 5 fetch failure.

std::string read_file_or_fail(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

rdf::KnowledgeGraph load_graph(const fs::path& path) {
    return rdf::parse_turtle(read_file_or_fail(path));
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path.string());
    out << content;
}

void print_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c >= widths.size()) widths.push_back(0);
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) line += "  ";
            line += row[c];
            if (c + 1 < row.size()) line.append(widths[c] - row[c].size(), ' ');
        }
        std::cout << line << "\n";
    }
}

// ---------------------------------------------------------------------------

int cmd_extract(const fs::path& repo_dir, const std::string& format,
                const config::Config& config) {
    pipeline::RepoResult result =
        pipeline::process_repository(repo_dir, vocab::builtin_vocabulary(), config);
    if (format == "ttl") {
        rdf::KnowledgeGraph g =
            graph::build_graph(result.descriptors, vocab::builtin_vocabulary());
        std::cout << rdf::serialize_turtle(g);
    } else {
        for (const graph::NetworkDescriptor& descriptor : result.descriptors) {
            std::cout << pipeline::descriptor_to_json(descriptor).dump() << "\n";
        }
    }
    for (const std::string& diagnostic : result.diagnostics) {
        std::cerr << diagnostic << "\n";
    }
    return 0;
}

int cmd_build(const fs::path& corpus_dir, const fs::path& out_dir, int jobs,
              const config::Config& config) {
    pipeline::CorpusBuild build =
        pipeline::build_corpus(corpus_dir, jobs, vocab::builtin_vocabulary(), config);
    rdf::KnowledgeGraph g =
        graph::build_graph(build.descriptors, vocab::builtin_vocabulary());
    fs::create_directories(out_dir);
    write_file(out_dir / "fairnets.ttl", rdf::serialize_turtle(g));
    write_file(out_dir / "fairnets_void.ttl",
               graph::emit_void(g, graph::default_dataset_iri()));
    for (const std::string& diagnostic : build.diagnostics) {
        std::cerr << diagnostic << "\n";
    }
    std::cout << "repositories=" << build.repositories
              << " networks=" << build.descriptors.size() << " triples=" << g.size()
              << " out=" << out_dir.string() << "\n";
    return 0;
}

int cmd_query(const fs::path& graph_path, const query::QueryFilter& filter,
              const std::string& format) {
    rdf::KnowledgeGraph g = load_graph(graph_path);
    std::vector<query::ResultRow> rows =
        query::query_graph(g, filter, vocab::builtin_vocabulary());
    if (format == "json") {
        json out = json::array();
        for (const query::ResultRow& row : rows) {
            out.push_back({{"iri", row.iri.value()},
                           {"label", row.label},
                           {"type", inference::to_string(row.type)},
                           {"created", row.created}});
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::vector<std::vector<std::string>> table = {{"iri", "type", "created", "label"}};
        for (const query::ResultRow& row : rows) {
            table.push_back(
                {row.iri.value(), inference::to_string(row.type), row.created, row.label});
        }
        print_table(table);
        std::cout << rows.size() << " result(s)\n";
    }
    return 0;
}

int cmd_stats(const fs::path& graph_path, const std::string& format) {
    rdf::KnowledgeGraph g = load_graph(graph_path);
    audit::StatsReport report = audit::corpus_stats(g);
    auto slice = [&](inference::NetworkType type) -> const audit::TypeSlice& {
        return report.per_type.at(type);
    };
    if (format == "json") {
        json per_type = json::object();
        for (const auto& [type, s] : report.per_type) {
            per_type[inference::to_string(type)] = {{"count", s.count},
                                                    {"percentage", s.percentage}};
        }
        json out = {{"repositories", report.repositories},
                    {"unique_users", report.unique_users},
                    {"networks", report.networks},
                    {"untyped_with_repository_link", report.untyped_with_repository_link},
                    {"per_type", per_type}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::vector<std::vector<std::string>> table = {
            {"repositories", std::to_string(report.repositories), ""},
            {"unique users", std::to_string(report.unique_users), ""},
            {"neural networks", std::to_string(report.networks), ""},
        };
        for (inference::NetworkType type :
             {inference::NetworkType::FFNN, inference::NetworkType::CNN,
              inference::NetworkType::RNN}) {
            table.push_back({inference::to_string(type), std::to_string(slice(type).count),
                             std::to_string(slice(type).percentage) + "%"});
        }
        if (report.untyped_with_repository_link > 0) {
            table.push_back({"untyped (excluded)",
                             std::to_string(report.untyped_with_repository_link), ""});
        }
        print_table(table);
    }
    return 0;
}

int cmd_fair_check(const fs::path& graph_path, const std::optional<fs::path>& void_path,
                   const std::string& format) {
    rdf::KnowledgeGraph g = load_graph(graph_path);
    std::optional<rdf::KnowledgeGraph> void_graph;
    if (void_path) void_graph = load_graph(*void_path);
    audit::FairReport report =
        audit::fair_report(g, void_graph ? &*void_graph : nullptr);
    if (format == "json") {
        json metrics = json::array();
        for (const audit::MetricResult& metric : report.metrics) {
            metrics.push_back({{"id", metric.id},
                               {"name", metric.name},
                               {"status", std::string(audit::to_string(metric.status))},
                               {"evidence", metric.evidence}});
        }
        json out = {{"metrics", metrics}, {"all_offline_pass", report.all_offline_pass()}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::vector<std::vector<std::string>> table = {{"id", "status", "name", "evidence"}};
        for (const audit::MetricResult& metric : report.metrics) {
            table.push_back({metric.id, std::string(audit::to_string(metric.status)),
                             metric.name, metric.evidence});
        }
        print_table(table);
    }
    return report.all_offline_pass() ? 0 : 1;
}

int cmd_eval(const fs::path& corpus_dir, bool strict, const std::string& format,
             const config::Config& config) {
    struct EvalRow {
        std::string repo;
        std::string source;
        audit::ArchComparison comparison;
    };
    std::vector<EvalRow> rows;
    for (const fs::path& repo_dir : pipeline::list_corpus(corpus_dir)) {
        pipeline::RepoResult result =
            pipeline::process_repository(repo_dir, vocab::builtin_vocabulary(), config);
        for (const graph::NetworkDescriptor& descriptor : result.descriptors) {
            fs::path stem = fs::path(descriptor.model.source_file).stem();
            fs::path manifest_path =
                repo_dir / "manifests" / (stem.string() + ".model_config.json");
            if (!fs::exists(manifest_path)) {
                if (strict) {
                    std::cerr << "missing manifest for " << descriptor.model.source_file
                              << " in " << repo_dir.string() << "\n";
                    return 4;
                }
                continue;
            }
            audit::ArchitectureManifest manifest =
                audit::load_manifest(read_file_or_fail(manifest_path));
            manifest.source_model = manifest_path.string();
            rows.push_back({result.record.full_name, descriptor.model.source_file,
                            audit::compare_architecture(descriptor.model, manifest)});
        }
    }
    if (rows.empty()) throw EvalError("no model/manifest pairs found under " + corpus_dir.string());
    std::vector<audit::ArchComparison> comparisons;
    comparisons.reserve(rows.size());
    for (const EvalRow& row : rows) comparisons.push_back(row.comparison);
    double accuracy = audit::corpus_accuracy(comparisons);

    if (format == "json") {
        json out_rows = json::array();
        for (const EvalRow& row : rows) {
            out_rows.push_back({{"repository", row.repo},
                                {"source_file", row.source},
                                {"exact_match", row.comparison.exact_match},
                                {"lcs_ratio", row.comparison.lcs_ratio}});
        }
        json out = {{"models", out_rows}, {"accuracy", accuracy}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::vector<std::vector<std::string>> table = {
            {"repository", "source", "exact", "lcs"}};
        for (const EvalRow& row : rows) {
            std::ostringstream lcs;
            lcs.precision(4);
            lcs << row.comparison.lcs_ratio;
            table.push_back({row.repo, row.source, row.comparison.exact_match ? "yes" : "no",
                             lcs.str()});
        }
        print_table(table);
        std::ostringstream line;
        line.precision(4);
        line << "accuracy " << accuracy << " (" << rows.size() << " models)";
        std::cout << line.str() << "\n";
    }
    return 0;
}

int cmd_fetch(const std::string& full_name, const fs::path& out_dir, bool no_wait,
              const std::optional<fs::path>& fixtures) {
    std::unique_ptr<github::HttpTransport> transport;
    if (fixtures) {
        transport = std::make_unique<github::ReplayTransport>(*fixtures);
    } else {
        transport = std::make_unique<github::LiveTransport>();
    }
    github::FetchOptions options;
    options.allow_wait = !no_wait;
    if (fixtures) options.sleep = [](std::chrono::seconds) {};
    ingest::RawRepoDocument raw =
        github::fetch_repository(*transport, full_name, options);
    fs::path repo_dir = pipeline::write_corpus_entry(out_dir, raw);
    std::cout << "fetched " << full_name << " -> " << repo_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FAIRnets toolchain: extract neural-network architectures from source "
                 "corpora and publish them as a queryable RDF knowledge graph"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string format = "table";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "table", "ttl"}))
        ->capture_default_str();
    fs::path config_path = "fairnets.toml";
    app.add_option("--config", config_path, "Config file (key = value lines)");

    auto* extract_cmd = app.add_subcommand("extract", "Extract descriptors from one repository");
    fs::path repo_dir;
    extract_cmd->add_option("repo", repo_dir, "Repository directory (corpus layout)")
        ->required();

    auto* build_cmd = app.add_subcommand("build", "Build the knowledge graph from a corpus");
    fs::path corpus_dir, out_dir = "out";
    int jobs = 1;
    build_cmd->add_option("corpus", corpus_dir, "Corpus directory")->required();
    build_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    build_cmd->add_option("--jobs", jobs, "Worker count")->capture_default_str();

    auto* query_cmd = app.add_subcommand("query", "Query a built graph");
    fs::path query_graph_path;
    std::string type_name, use_name, license, layer, creator;
    int year = 0;
    bool year_set = false;
    query_cmd->add_option("--graph", query_graph_path, "Turtle file")->required();
    query_cmd->add_option("--type", type_name, "Network type (ffnn|cnn|rnn)");
    query_cmd->add_option("--year", year, "Creation year")->each([&](const std::string&) {
        year_set = true;
    });
    query_cmd->add_option("--license", license, "License IRI or SPDX id");
    query_cmd->add_option("--layer", layer, "Layer class name, e.g. LSTM");
    query_cmd->add_option("--creator", creator, "Creator IRI");
    query_cmd->add_option("--use", use_name, "Intended use (classification|regression|unknown)");

    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics of a built graph");
    fs::path stats_graph_path;
    stats_cmd->add_option("--graph", stats_graph_path, "Turtle file")->required();

    auto* fair_cmd = app.add_subcommand("fair-check", "FAIR-metrics report for a built graph");
    fs::path fair_graph_path;
    fs::path void_path;
    fair_cmd->add_option("--graph", fair_graph_path, "Turtle file")->required();
    fair_cmd->add_option("--void", void_path, "VoID Turtle file");

    auto* eval_cmd = app.add_subcommand("eval", "Compare extraction against ground-truth manifests");
    fs::path eval_corpus_dir;
    bool strict = false;
    eval_cmd->add_option("corpus", eval_corpus_dir, "Corpus directory")->required();
    eval_cmd->add_flag("--strict", strict, "Fail when a model lacks a manifest");

    auto* fetch_cmd = app.add_subcommand("fetch", "Fetch one repository into corpus layout");
    std::string full_name;
    fs::path fetch_out = "corpus";
    bool no_wait = false;
    fs::path fixtures_dir;
    fetch_cmd->add_option("full_name", full_name, "owner/repo")->required();
    fetch_cmd->add_option("--out", fetch_out, "Corpus directory")->capture_default_str();
    fetch_cmd->add_flag("--no-wait", no_wait, "Fail instead of sleeping through rate limits");
    fetch_cmd->add_option("--fixtures", fixtures_dir,
                          "Replay recorded responses from this directory instead of the network");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        config::Config config = config::load_config(config_path);

        if (*extract_cmd) return cmd_extract(repo_dir, format, config);
        if (*build_cmd) return cmd_build(corpus_dir, out_dir, jobs, config);
        if (*query_cmd) {
            query::QueryFilter filter;
            if (!type_name.empty()) {
                std::string t = type_name;
                std::transform(t.begin(), t.end(), t.begin(), ::tolower);
                if (t == "ffnn") filter.type = inference::NetworkType::FFNN;
                else if (t == "cnn") filter.type = inference::NetworkType::CNN;
                else if (t == "rnn") filter.type = inference::NetworkType::RNN;
                else throw std::invalid_argument("unknown network type: " + type_name);
            }
            if (year_set) filter.year_created = year;
            if (!license.empty()) filter.license = license;
            if (!layer.empty()) filter.layer = layer;
            if (!creator.empty()) filter.creator = creator;
            if (!use_name.empty()) {
                std::string u = use_name;
                std::transform(u.begin(), u.end(), u.begin(), ::tolower);
                if (u == "classification") filter.intended_use = inference::IntendedUse::Classification;
                else if (u == "regression") filter.intended_use = inference::IntendedUse::Regression;
                else if (u == "unknown") filter.intended_use = inference::IntendedUse::Unknown;
                else throw std::invalid_argument("unknown intended use: " + use_name);
            }
            return cmd_query(query_graph_path, filter, format);
        }
        if (*stats_cmd) return cmd_stats(stats_graph_path, format);
        if (*fair_cmd) {
            std::optional<fs::path> void_file;
            if (!void_path.empty()) void_file = void_path;
            return cmd_fair_check(fair_graph_path, void_file, format);
        }
        if (*eval_cmd) return cmd_eval(eval_corpus_dir, strict, format, config);
        if (*fetch_cmd) {
            std::optional<fs::path> fixtures;
            if (!fixtures_dir.empty()) fixtures = fixtures_dir;
            return cmd_fetch(full_name, fetch_out, no_wait, fixtures);
        }
    } catch (const IriCollision& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FetchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const rdf::TurtleParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

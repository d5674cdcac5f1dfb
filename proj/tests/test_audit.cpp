#include <doctest.h>

#include "fairnets/audit.hpp"
#include "fairnets/errors.hpp"
#include "fairnets/graph_build.hpp"
#include "fairnets/turtle.hpp"

using namespace fairnets;
using namespace fairnets::audit;
using namespace fairnets::rdf;

namespace {

extract::ExtractedModel model_named(std::initializer_list<const char*> names) {
    extract::ExtractedModel model;
    model.source_file = "src/train.py";
    model.variable = "model";
    int position = 0;
    for (const char* name : names) {
        extract::ExtractedLayer layer;
        layer.position = position++;
        layer.name = name;
        if (const auto* cls = vocab::builtin_vocabulary().resolve_layer_class(name)) {
            layer.layer_class = *cls;
        }
        model.layers.push_back(std::move(layer));
    }
    return model;
}

graph::NetworkDescriptor descriptor_for(const std::string& full_name,
                                        std::initializer_list<const char*> names,
                                        const std::string& created = "2018-05-04T12:00:00Z") {
    ingest::RepositoryRecord record;
    record.full_name = full_name;
    std::string owner = full_name.substr(0, full_name.find('/'));
    record.owner_url = Iri::checked("https://github.com/" + owner);
    record.html_url = Iri::checked("https://github.com/" + full_name);
    record.created_at = created;
    record.updated_at = created;
    record.license_iri = Iri::checked("https://spdx.org/licenses/MIT");
    record.name = full_name.substr(full_name.find('/') + 1);
    std::vector<ingest::Reference> refs{{Iri::checked("https://arxiv.org/abs/1801.00001"),
                                         ingest::Reference::Kind::Scholarly}};
    return graph::assemble_descriptor(std::move(record), model_named(names), std::move(refs), 1);
}

struct Fixture {
    KnowledgeGraph g;
    KnowledgeGraph void_graph;
};

Fixture passing_fixture() {
    std::vector<graph::NetworkDescriptor> descriptors;
    descriptors.push_back(descriptor_for("ada/dense-net", {"Dense", "Dropout", "Dense"}));
    descriptors.push_back(descriptor_for("bob/conv-net", {"Conv2D", "Flatten", "Dense"}));
    descriptors.push_back(descriptor_for("eve/gru-net", {"Embedding", "GRU"}));
    Fixture f;
    f.g = graph::build_graph(descriptors, vocab::builtin_vocabulary());
    f.void_graph = parse_turtle(graph::emit_void(f.g, graph::default_dataset_iri()));
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Manifests and architecture comparison

TEST_CASE("load_manifest reads the ordered layer list") {
    ArchitectureManifest manifest = load_manifest(
        R"({"class_name": "Sequential",
            "config": {"name": "seq", "layers": [
              {"class_name": "Conv2D", "config": {"filters": 32}},
              {"class_name": "Flatten"},
              {"class_name": "Dense"}]}})");
    CHECK(manifest.layer_class_names == std::vector<std::string>{"Conv2D", "Flatten", "Dense"});
}

TEST_CASE("load_manifest errors") {
    CHECK_THROWS_AS(load_manifest("not json"), ManifestError);
    CHECK_THROWS_AS(load_manifest(R"({"config": {"layers": []}})"), ManifestError);
    CHECK_THROWS_AS(load_manifest(R"({"class_name": "Sequential"})"), ManifestError);
    CHECK_THROWS_AS(load_manifest(
                        R"({"class_name": "Sequential", "config": {"layers": [{"x": 1}]}})"),
                    ManifestError);
    CHECK_THROWS_AS(
        load_manifest(
            R"({"class_name": "Sequential", "config": {"layers": [{"class_name": ""}]}})"),
        ManifestError);
}

TEST_CASE("lcs_length") {
    using V = std::vector<std::string>;
    CHECK(lcs_length(V{}, V{}) == 0);
    CHECK(lcs_length(V{"a"}, V{}) == 0);
    CHECK(lcs_length(V{"a", "b", "c"}, V{"a", "b", "c"}) == 3);
    CHECK(lcs_length(V{"a", "b", "c", "d"}, V{"b", "d"}) == 2);
    CHECK(lcs_length(V{"a", "x", "b"}, V{"y", "a", "b"}) == 2);
    CHECK(lcs_length(V{"a"}, V{"b"}) == 0);
}

TEST_CASE("compare_architecture") {
    ArchitectureManifest manifest;
    manifest.layer_class_names = {"Conv2D", "Flatten", "Dense"};

    ArchComparison same = compare_architecture(model_named({"Conv2D", "Flatten", "Dense"}), manifest);
    CHECK(same.exact_match);
    CHECK(same.lcs_ratio == doctest::Approx(1.0));

    ArchComparison shorter = compare_architecture(model_named({"Conv2D", "Dense"}), manifest);
    CHECK_FALSE(shorter.exact_match);
    CHECK(shorter.lcs_ratio == doctest::Approx(2.0 / 3.0));

    ArchComparison empty_both = compare_architecture(model_named({}), ArchitectureManifest{});
    CHECK(empty_both.exact_match);
    CHECK(empty_both.lcs_ratio == doctest::Approx(1.0));

    ArchComparison empty_one = compare_architecture(model_named({}), manifest);
    CHECK_FALSE(empty_one.exact_match);
    CHECK(empty_one.lcs_ratio == doctest::Approx(0.0));
}

TEST_CASE("corpus_accuracy") {
    std::vector<ArchComparison> comparisons(10);
    for (int i = 0; i < 7; ++i) comparisons[i].exact_match = true;
    CHECK(corpus_accuracy(comparisons) == doctest::Approx(0.7));
    CHECK_THROWS_AS(corpus_accuracy({}), EvalError);
}

// ---------------------------------------------------------------------------
// FAIR metrics

TEST_CASE("metric order and ids are fixed") {
    FairReport report = fair_report(passing_fixture().g);
    REQUIRE(report.metrics.size() == 14);
    const char* expected[] = {"F1A", "F1B", "F2",  "F3", "F4", "A1.1", "A1.2",
                              "A2",  "I1",  "I2", "I3", "R1.1", "R1.2", "R1.3"};
    for (std::size_t i = 0; i < 14; ++i) CHECK(report.metrics[i].id == expected[i]);
    CHECK(report.find("I2") == &report.metrics[9]);
    CHECK(report.find("nope") == nullptr);
}

TEST_CASE("well-formed graph with void passes everything checkable") {
    Fixture f = passing_fixture();
    FairReport report = fair_report(f.g, &f.void_graph);
    for (const MetricResult& metric : report.metrics) {
        INFO(metric.id, " ", metric.evidence);
        if (metric.id == "F4") {
            CHECK(metric.status == MetricStatus::NotCheckableOffline);
        } else {
            CHECK(metric.status == MetricStatus::Pass);
        }
    }
    CHECK(report.all_offline_pass());
}

TEST_CASE("dataset-level metrics fail without a void graph") {
    FairReport report = fair_report(passing_fixture().g);
    CHECK(report.find("F2")->status == MetricStatus::Fail);
    CHECK(report.find("A2")->status == MetricStatus::Fail);
    CHECK(report.find("R1.1")->status == MetricStatus::Fail);
    CHECK(report.find("R1.3")->status == MetricStatus::Fail);
    CHECK_FALSE(report.all_offline_pass());
}

TEST_CASE("duplicate label trips F1A only") {
    Fixture f = passing_fixture();
    Iri net = Iri::checked("https://w3id.org/nno/data#ada/dense-net");
    f.g.add(net, rdfs("label"), Literal::plain("a second label"));
    FairReport report = fair_report(f.g, &f.void_graph);
    CHECK(report.find("F1A")->status == MetricStatus::Fail);
    CHECK(report.find("F1A")->evidence.find("ada/dense-net") != std::string::npos);
    for (const MetricResult& metric : report.metrics) {
        if (metric.id != "F1A" && metric.id != "F4") CHECK(metric.status == MetricStatus::Pass);
    }
}

TEST_CASE("identifier outside the persistent namespace trips F1B") {
    Fixture f = passing_fixture();
    Iri stray = Iri::checked("https://example.org/models/77");
    f.g.add(stray, rdf_type(), nno("FeedForwardNeuralNetwork"));
    f.g.add(stray, rdfs("label"), Literal::plain("stray"));
    f.g.add(stray, dcterms("creator"), Iri::checked("https://github.com/x"));
    f.g.add(stray, dcterms("created"), Literal::date_time("2018-01-01T00:00:00Z"));
    f.g.add(stray, nno("hasRepositoryLink"), Literal::any_uri("https://github.com/x/y"));
    FairReport report = fair_report(f.g, &f.void_graph);
    CHECK(report.find("F1B")->status == MetricStatus::Fail);
}

TEST_CASE("missing repository link trips F3") {
    Fixture f = passing_fixture();
    KnowledgeGraph pruned;
    Iri victim = Iri::checked("https://w3id.org/nno/data#eve/gru-net");
    for (const Triple& t : f.g.triples()) {
        if (t.subject == victim && t.predicate == nno("hasRepositoryLink")) continue;
        pruned.insert(t);
    }
    FairReport report = fair_report(pruned, &f.void_graph);
    CHECK(report.find("F3")->status == MetricStatus::Fail);
    CHECK(report.find("F3")->evidence.find("eve/gru-net") != std::string::npos);
}

TEST_CASE("non-https subject trips A1.1") {
    Fixture f = passing_fixture();
    f.g.add(Iri::checked("http://w3id.org/nno/data#insecure"), rdfs("label"),
            Literal::plain("x"));
    FairReport report = fair_report(f.g, &f.void_graph);
    CHECK(report.find("A1.1")->status == MetricStatus::Fail);
}

TEST_CASE("non-https repository link trips A1.2") {
    Fixture f = passing_fixture();
    Iri net = Iri::checked("https://w3id.org/nno/data#ada/dense-net");
    f.g.add(net, nno("hasRepositoryLink"), Literal::any_uri("ftp://mirror.example/x"));
    FairReport report = fair_report(f.g, &f.void_graph);
    CHECK(report.find("A1.2")->status == MetricStatus::Fail);
}

TEST_CASE("foreign predicate trips I2 only") {
    Fixture f = passing_fixture();
    Iri net = Iri::checked("https://w3id.org/nno/data#ada/dense-net");
    f.g.add(net, Iri::checked("https://example.org/vocab#customScore"), Literal::integer(5));
    FairReport report = fair_report(f.g, &f.void_graph);
    CHECK(report.find("I2")->status == MetricStatus::Fail);
    CHECK(report.find("I2")->evidence.find("customScore") != std::string::npos);
    for (const MetricResult& metric : report.metrics) {
        if (metric.id != "I2" && metric.id != "F4") CHECK(metric.status == MetricStatus::Pass);
    }
}

TEST_CASE("non-scholarly reference trips I3") {
    Fixture f = passing_fixture();
    Iri net = Iri::checked("https://w3id.org/nno/data#ada/dense-net");
    f.g.add(net, dcterms("references"), Iri::checked("https://example.org/blog-post"));
    FairReport report = fair_report(f.g, &f.void_graph);
    CHECK(report.find("I3")->status == MetricStatus::Fail);
}

TEST_CASE("missing creator trips R1.2 only") {
    Fixture f = passing_fixture();
    KnowledgeGraph pruned;
    Iri victim = Iri::checked("https://w3id.org/nno/data#bob/conv-net");
    for (const Triple& t : f.g.triples()) {
        if (t.subject == victim && t.predicate == dcterms("creator")) continue;
        pruned.insert(t);
    }
    FairReport report = fair_report(pruned, &f.void_graph);
    CHECK(report.find("R1.2")->status == MetricStatus::Fail);
    CHECK(report.find("R1.2")->evidence.find("bob/conv-net") != std::string::npos);
    for (const MetricResult& metric : report.metrics) {
        if (metric.id != "R1.2" && metric.id != "F4") CHECK(metric.status == MetricStatus::Pass);
    }
}

// ---------------------------------------------------------------------------
// Corpus statistics

TEST_CASE("half-up percentage") {
    CHECK(half_up_percentage(12, 25) == 48);
    CHECK(half_up_percentage(9, 25) == 36);
    CHECK(half_up_percentage(4, 25) == 16);
    CHECK(half_up_percentage(1, 8) == 13);    // 12.5 rounds up
    CHECK(half_up_percentage(1, 3) == 33);    // 33.33 rounds down
    CHECK(half_up_percentage(2, 3) == 67);    // 66.67 rounds up
    CHECK(half_up_percentage(0, 10) == 0);
    CHECK(half_up_percentage(10, 10) == 100);
    CHECK(half_up_percentage(0, 0) == 0);
}

TEST_CASE("corpus stats over a built graph") {
    std::vector<graph::NetworkDescriptor> descriptors;
    descriptors.push_back(descriptor_for("ada/dense-net", {"Dense"}));
    descriptors.push_back(descriptor_for("ada/also-dense", {"Dense", "Dense"}));
    descriptors.push_back(descriptor_for("bob/conv-net", {"Conv2D"}));
    descriptors.push_back(descriptor_for("eve/gru-net", {"GRU"}));
    KnowledgeGraph g = graph::build_graph(descriptors, vocab::builtin_vocabulary());

    StatsReport stats = corpus_stats(g);
    CHECK(stats.repositories == 4);
    CHECK(stats.unique_users == 3);  // ada owns two repositories
    CHECK(stats.networks == 4);
    CHECK(stats.untyped_with_repository_link == 0);
    CHECK(stats.per_type.at(inference::NetworkType::FFNN).count == 2);
    CHECK(stats.per_type.at(inference::NetworkType::FFNN).percentage == 50);
    CHECK(stats.per_type.at(inference::NetworkType::CNN).count == 1);
    CHECK(stats.per_type.at(inference::NetworkType::CNN).percentage == 25);
    CHECK(stats.per_type.at(inference::NetworkType::RNN).count == 1);
}

TEST_CASE("untyped subjects with repository links are counted separately") {
    Fixture f = passing_fixture();
    Iri untyped = Iri::checked("https://w3id.org/nno/data#ada/untyped");
    f.g.add(untyped, nno("hasRepositoryLink"), Literal::any_uri("https://github.com/ada/untyped"));
    StatsReport stats = corpus_stats(f.g);
    CHECK(stats.networks == 3);
    CHECK(stats.untyped_with_repository_link == 1);
    CHECK(stats.repositories == 4);
}

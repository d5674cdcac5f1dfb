#include <doctest.h>

#include "fairnets/graph_build.hpp"
#include "fairnets/query.hpp"

using namespace fairnets;
using namespace fairnets::query;
using namespace fairnets::rdf;

namespace {

graph::NetworkDescriptor make_descriptor(const std::string& full_name,
                                         std::initializer_list<const char*> layers,
                                         const std::string& created, const char* license,
                                         const char* loss) {
    ingest::RepositoryRecord record;
    record.full_name = full_name;
    std::string owner = full_name.substr(0, full_name.find('/'));
    record.owner_url = Iri::checked("https://github.com/" + owner);
    record.html_url = Iri::checked("https://github.com/" + full_name);
    record.created_at = created;
    record.updated_at = created;
    if (license) record.license_iri = Iri::checked(std::string("https://spdx.org/licenses/") + license);
    record.name = full_name.substr(full_name.find('/') + 1);

    extract::ExtractedModel model;
    model.source_file = "src/train.py";
    model.variable = "model";
    int position = 0;
    for (const char* name : layers) {
        extract::ExtractedLayer layer;
        layer.position = position++;
        layer.name = name;
        if (const auto* cls = vocab::builtin_vocabulary().resolve_layer_class(name)) {
            layer.layer_class = *cls;
        }
        model.layers.push_back(std::move(layer));
    }
    if (loss) model.loss_function = loss;
    return graph::assemble_descriptor(std::move(record), std::move(model), {}, 1);
}

KnowledgeGraph sample_graph() {
    std::vector<graph::NetworkDescriptor> descriptors;
    descriptors.push_back(make_descriptor("ada/lstm-2018", {"Embedding", "LSTM", "Dense"},
                                          "2018-03-01T00:00:00Z", "MIT",
                                          "binary_crossentropy"));
    descriptors.push_back(make_descriptor("bob/lstm-2019", {"LSTM"},
                                          "2019-07-15T08:00:00Z", "Apache-2.0", nullptr));
    descriptors.push_back(make_descriptor("eve/conv-2018", {"Conv2D", "Flatten", "Dense"},
                                          "2018-11-11T11:11:11Z", "MIT",
                                          "mean_squared_error"));
    descriptors.push_back(make_descriptor("kim/dense-2018", {"Dense", "Dense"},
                                          "2018-01-05T00:00:00Z", nullptr,
                                          "categorical_crossentropy"));
    return graph::build_graph(descriptors, vocab::builtin_vocabulary());
}

std::vector<std::string> iris(const std::vector<ResultRow>& rows) {
    std::vector<std::string> out;
    for (const ResultRow& row : rows) out.push_back(row.iri.value());
    return out;
}

const std::string kData = "https://w3id.org/nno/data#";

}  // namespace

TEST_CASE("empty filter throws") {
    KnowledgeGraph g = sample_graph();
    CHECK_THROWS_AS(query_graph(g, QueryFilter{}, vocab::builtin_vocabulary()),
                    std::invalid_argument);
}

TEST_CASE("filter by type") {
    KnowledgeGraph g = sample_graph();
    QueryFilter filter;
    filter.type = inference::NetworkType::RNN;
    auto rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(iris(rows) ==
          std::vector<std::string>{kData + "ada/lstm-2018", kData + "bob/lstm-2019"});
    CHECK(rows[0].type == inference::NetworkType::RNN);
    CHECK(rows[0].label == "lstm-2018");
    CHECK(rows[0].created == "2018-03-01T00:00:00Z");
}

TEST_CASE("filter by year") {
    KnowledgeGraph g = sample_graph();
    QueryFilter filter;
    filter.year_created = 2018;
    auto rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(rows.size() == 3);

    filter.year_created = 2020;
    CHECK(query_graph(g, filter, vocab::builtin_vocabulary()).empty());
}

TEST_CASE("conjunction of type and year") {
    KnowledgeGraph g = sample_graph();
    QueryFilter filter;
    filter.type = inference::NetworkType::RNN;
    filter.year_created = 2018;
    auto rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(iris(rows) == std::vector<std::string>{kData + "ada/lstm-2018"});
}

TEST_CASE("filter by license accepts IRI or SPDX id") {
    KnowledgeGraph g = sample_graph();
    QueryFilter filter;
    filter.license = "MIT";
    auto rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(rows.size() == 2);

    filter.license = "https://spdx.org/licenses/Apache-2.0";
    rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(iris(rows) == std::vector<std::string>{kData + "bob/lstm-2019"});

    filter.license = "Unheard-Of-License";
    CHECK(query_graph(g, filter, vocab::builtin_vocabulary()).empty());
}

TEST_CASE("filter by layer class") {
    KnowledgeGraph g = sample_graph();
    QueryFilter filter;
    filter.layer = "LSTM";
    auto rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(rows.size() == 2);

    filter.layer = "Conv2D";
    rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(iris(rows) == std::vector<std::string>{kData + "eve/conv-2018"});

    filter.layer = "UnheardOfLayer";
    CHECK(query_graph(g, filter, vocab::builtin_vocabulary()).empty());
}

TEST_CASE("filter by creator") {
    KnowledgeGraph g = sample_graph();
    QueryFilter filter;
    filter.creator = "https://github.com/ada";
    auto rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(iris(rows) == std::vector<std::string>{kData + "ada/lstm-2018"});

    filter.creator = "not an iri";
    CHECK(query_graph(g, filter, vocab::builtin_vocabulary()).empty());
}

TEST_CASE("filter by intended use") {
    KnowledgeGraph g = sample_graph();
    QueryFilter filter;
    filter.intended_use = inference::IntendedUse::Classification;
    auto rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(rows.size() == 2);  // binary + categorical crossentropy

    filter.intended_use = inference::IntendedUse::Regression;
    rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(iris(rows) == std::vector<std::string>{kData + "eve/conv-2018"});

    filter.intended_use = inference::IntendedUse::Unknown;
    rows = query_graph(g, filter, vocab::builtin_vocabulary());
    CHECK(iris(rows) == std::vector<std::string>{kData + "bob/lstm-2019"});
}

TEST_CASE("results are sorted by IRI") {
    KnowledgeGraph g = sample_graph();
    QueryFilter filter;
    filter.year_created = 2018;
    auto rows = query_graph(g, filter, vocab::builtin_vocabulary());
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].iri < rows[i].iri);
}

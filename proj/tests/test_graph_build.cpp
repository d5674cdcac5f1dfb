#include <doctest.h>

#include "fairnets/errors.hpp"
#include "fairnets/graph_build.hpp"
#include "fairnets/turtle.hpp"

using namespace fairnets;
using namespace fairnets::graph;
using namespace fairnets::rdf;

namespace {

ingest::RepositoryRecord record_fixture() {
    ingest::RepositoryRecord record;
    record.full_name = "ada/mnist demo";   // space forces percent-encoding
    record.owner_url = Iri::checked("https://github.com/ada");
    record.html_url = Iri::checked("https://github.com/ada/mnist-demo");
    record.created_at = "2018-05-04T12:00:00Z";
    record.updated_at = "2019-01-02T03:04:05Z";
    record.description = "MNIST experiments";
    record.readme = "Longer README text";
    record.license_iri = Iri::checked("https://spdx.org/licenses/MIT");
    record.watchers_count = 17;
    record.topics = {"deep-learning", "keras"};
    record.name = "mnist-demo";
    return record;
}

extract::ExtractedModel model_fixture() {
    extract::ExtractedModel model;
    model.source_file = "src/train.py";
    model.model_ordinal = 0;
    model.variable = "model";
    extract::ExtractedLayer dense;
    dense.position = 0;
    dense.layer_class = *vocab::builtin_vocabulary().resolve_layer_class("Dense");
    dense.name = "Dense";
    dense.positional_params = {extract::LiteralValue::make_integer(10)};
    dense.keywords = {{"activation", extract::LiteralValue::make_text("softmax")}};
    model.layers.push_back(std::move(dense));
    model.optimizer = "adam";
    model.loss_function = "categorical_crossentropy";
    return model;
}

}  // namespace

TEST_CASE("iri minting") {
    CHECK(mint_network_iri("ada/net", "train", 0, 1).view() == "https://w3id.org/nno/data#ada/net");
    CHECK(mint_network_iri("ada/net", "train", 0, 2).view() ==
          "https://w3id.org/nno/data#ada/net_train_0");
    CHECK(mint_network_iri("ada/net", "train", 1, 2).view() ==
          "https://w3id.org/nno/data#ada/net_train_1");
    // Percent-encoding outside unreserved + '/'.
    CHECK(mint_network_iri("ada/my net", "a b", 0, 2).view() ==
          "https://w3id.org/nno/data#ada/my%20net_a%20b_0");
    // Alternate namespace.
    CHECK(mint_network_iri("ada/net", "train", 0, 1, "https://example.org/data#").view() ==
          "https://example.org/data#ada/net");
}

TEST_CASE("assemble_descriptor derives the stem from the source path") {
    NetworkDescriptor d = assemble_descriptor(record_fixture(), model_fixture(), {}, 2);
    CHECK(d.iri.view() == "https://w3id.org/nno/data#ada/mnist%20demo_train_0");
    CHECK(d.network_type == inference::NetworkType::FFNN);
}

TEST_CASE("verify_unique_iris names both sources") {
    NetworkDescriptor a = assemble_descriptor(record_fixture(), model_fixture(), {}, 1);
    NetworkDescriptor b = a;
    b.model.source_file = "src/other.py";
    try {
        verify_unique_iris({a, b});
        FAIL("expected IriCollision");
    } catch (const IriCollision& e) {
        std::string message = e.what();
        CHECK(message.find("src/train.py") != std::string::npos);
        CHECK(message.find("src/other.py") != std::string::npos);
    }
    CHECK_NOTHROW(verify_unique_iris({a}));
}

TEST_CASE("descriptor emission") {
    ingest::Reference scholarly{Iri::checked("https://arxiv.org/abs/1801.00001"),
                                ingest::Reference::Kind::Scholarly};
    ingest::Reference see_also{Iri::checked("https://keras.io/guides"),
                               ingest::Reference::Kind::SeeAlso};
    NetworkDescriptor d =
        assemble_descriptor(record_fixture(), model_fixture(), {scholarly, see_also}, 1);
    d.dataset = Iri::checked("https://example.org/datasets/mnist");

    KnowledgeGraph g;
    for (Triple& t : descriptor_to_triples(d, vocab::builtin_vocabulary())) g.insert(std::move(t));

    const Iri net = d.iri;
    CHECK(g.contains({net, rdf_type(), nno("FeedForwardNeuralNetwork")}));
    CHECK(g.contains({net, rdfs("label"), Literal::plain("mnist-demo")}));
    CHECK(g.contains({net, dcterms("description"), Literal::plain("MNIST experiments")}));
    CHECK(g.contains({net, dcterms("description"), Literal::plain("Longer README text")}));
    CHECK(g.contains({net, dcterms("created"), Literal::date_time("2018-05-04T12:00:00Z")}));
    CHECK(g.contains({net, dcterms("modified"), Literal::date_time("2019-01-02T03:04:05Z")}));
    CHECK(g.contains({net, dcterms("creator"), Iri::checked("https://github.com/ada")}));
    CHECK(g.contains({net, dcterms("license"), Iri::checked("https://spdx.org/licenses/MIT")}));
    CHECK(g.contains(
        {net, nno("hasRepositoryLink"), Literal::any_uri("https://github.com/ada/mnist-demo")}));
    CHECK(g.contains({net, nno("stars"), Literal::integer(17)}));
    CHECK(g.contains({net, doap("category"), Literal::plain("deep-learning")}));
    CHECK(g.contains({net, doap("category"), Literal::plain("keras")}));
    CHECK(g.contains(
        {net, dcterms("references"), Iri::checked("https://arxiv.org/abs/1801.00001")}));
    CHECK(g.contains({net, rdfs("seeAlso"), Iri::checked("https://keras.io/guides")}));
    CHECK(g.contains({net, nno("hasOptimizer"), nno("adam")}));
    CHECK(g.contains({net, nno("hasLossFunction"), nno("categorical_crossentropy")}));
    CHECK(g.contains(
        {net, nno("dataset"), Literal::any_uri("https://example.org/datasets/mnist")}));

    const Iri layer = Iri::checked(net.value() + "_layer_0");
    CHECK(g.contains({net, nno("hasLayer"), layer}));
    CHECK(g.contains({layer, rdf_type(), nno("Dense")}));
    CHECK(g.contains({layer, rdfs("label"), Literal::plain("Dense")}));
    CHECK(g.contains(
        {layer, nno("hasLayerKeywords"), Literal::plain("{\"activation\": \"softmax\"}")}));
    CHECK(g.contains({layer, nno("hasLayerParameter"), Literal::plain("10")}));
}

TEST_CASE("absent fields emit nothing") {
    ingest::RepositoryRecord record = record_fixture();
    record.description.reset();
    record.readme.reset();
    record.license_iri.reset();
    record.topics.clear();
    extract::ExtractedModel model = model_fixture();
    model.optimizer = "homegrown";          // not in the vocabulary → no triple
    model.loss_function.reset();
    model.layers.clear();
    NetworkDescriptor d = assemble_descriptor(std::move(record), std::move(model), {}, 1);

    KnowledgeGraph g;
    for (Triple& t : descriptor_to_triples(d, vocab::builtin_vocabulary())) g.insert(std::move(t));
    CHECK(g.objects_of(d.iri, dcterms("description")).empty());
    CHECK(g.objects_of(d.iri, dcterms("license")).empty());
    CHECK(g.objects_of(d.iri, doap("category")).empty());
    CHECK(g.objects_of(d.iri, nno("hasOptimizer")).empty());
    CHECK(g.objects_of(d.iri, nno("hasLossFunction")).empty());
    CHECK(g.objects_of(d.iri, nno("hasLayer")).empty());
}

TEST_CASE("unknown layers are typed to the root layer class") {
    extract::ExtractedModel model = model_fixture();
    model.layers[0].layer_class.reset();
    model.layers[0].name = "FancyAttention";
    NetworkDescriptor d = assemble_descriptor(record_fixture(), std::move(model), {}, 1);
    KnowledgeGraph g;
    for (Triple& t : descriptor_to_triples(d, vocab::builtin_vocabulary())) g.insert(std::move(t));
    const Iri layer = Iri::checked(d.iri.value() + "_layer_0");
    CHECK(g.contains({layer, rdf_type(), nno("Layer")}));
    CHECK(g.contains({layer, rdfs("label"), Literal::plain("FancyAttention")}));
}

TEST_CASE("build_graph declares the default prefixes") {
    NetworkDescriptor d = assemble_descriptor(record_fixture(), model_fixture(), {}, 1);
    KnowledgeGraph g = build_graph({d}, vocab::builtin_vocabulary());
    CHECK(g.prefixes().size() == 7);
    CHECK(g.size() > 10);
}

TEST_CASE("void description") {
    NetworkDescriptor d = assemble_descriptor(record_fixture(), model_fixture(), {}, 1);
    KnowledgeGraph g = build_graph({d}, vocab::builtin_vocabulary());
    KnowledgeGraph void_graph = parse_turtle(emit_void(g, default_dataset_iri()));

    const Iri dataset = default_dataset_iri();
    CHECK(dataset.view() == "https://w3id.org/nno/data");
    CHECK(void_graph.contains({dataset, rdf_type(), void_iri("Dataset")}));
    CHECK(void_graph.contains({dataset, dcterms("title"), Literal::plain("FAIRnets Dataset")}));
    CHECK(void_graph.contains({dataset, void_iri("triples"),
                               Literal::integer(static_cast<std::int64_t>(g.size()))}));
    CHECK(void_graph.contains(
        {dataset, void_iri("distinctSubjects"),
         Literal::integer(static_cast<std::int64_t>(g.distinct_subject_count()))}));
    CHECK(void_graph.contains(
        {dataset, Iri::checked("http://creativecommons.org/ns#license"),
         Iri::checked("https://creativecommons.org/licenses/by/4.0/")}));
    CHECK(void_graph.contains(
        {dataset, Iri::checked("http://www.w3.org/2000/10/swap/pim/doc#persistencePolicy"),
         Iri::checked("https://w3id.org/nno/")}));
    CHECK(void_graph.objects_of(dataset, void_iri("vocabulary")).size() == 4);
}

#include <doctest.h>

#include "fairnets/inference.hpp"

using namespace fairnets;
using namespace fairnets::extract;
using namespace fairnets::inference;

namespace {
ExtractedModel model_with(std::initializer_list<const char*> layer_names) {
    ExtractedModel model;
    int position = 0;
    for (const char* name : layer_names) {
        ExtractedLayer layer;
        layer.position = position++;
        layer.name = name;
        if (const vocab::LayerClass* cls = vocab::builtin_vocabulary().resolve_layer_class(name)) {
            layer.layer_class = *cls;
        }
        model.layers.push_back(std::move(layer));
    }
    return model;
}
}  // namespace

TEST_CASE("network type inference") {
    CHECK(infer_network_type(model_with({"Dense", "Dropout", "Dense"})) == NetworkType::FFNN);
    CHECK(infer_network_type(model_with({})) == NetworkType::FFNN);
    CHECK(infer_network_type(model_with({"Conv2D", "Flatten", "Dense"})) == NetworkType::CNN);
    CHECK(infer_network_type(model_with({"Embedding", "LSTM", "Dense"})) == NetworkType::RNN);
    CHECK(infer_network_type(model_with({"GRU"})) == NetworkType::RNN);
    // Convolutional wins over recurrent, in either order.
    CHECK(infer_network_type(model_with({"LSTM", "Conv1D"})) == NetworkType::CNN);
    CHECK(infer_network_type(model_with({"Conv1D", "LSTM"})) == NetworkType::CNN);
    // Unknown layers contribute nothing.
    CHECK(infer_network_type(model_with({"MysteryLayer", "Dense"})) == NetworkType::FFNN);
}

TEST_CASE("intended use follows the loss category") {
    const vocab::Vocabulary& v = vocab::builtin_vocabulary();
    ExtractedModel model = model_with({"Dense"});

    model.loss_function = "categorical_crossentropy";
    CHECK(infer_intended_use(model, v) == IntendedUse::Classification);

    model.loss_function = "mean_absolute_error";
    CHECK(infer_intended_use(model, v) == IntendedUse::Regression);

    model.loss_function = "my_custom_loss";
    CHECK(infer_intended_use(model, v) == IntendedUse::Unknown);

    model.loss_function.reset();
    CHECK(infer_intended_use(model, v) == IntendedUse::Unknown);
}

TEST_CASE("string forms") {
    CHECK(to_string(NetworkType::FFNN) == "FFNN");
    CHECK(to_string(NetworkType::CNN) == "CNN");
    CHECK(to_string(NetworkType::RNN) == "RNN");
    CHECK(to_string(IntendedUse::Classification) == "Classification");
    CHECK(to_string(IntendedUse::Regression) == "Regression");
    CHECK(to_string(IntendedUse::Unknown) == "Unknown");
}

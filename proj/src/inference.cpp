#include "fairnets/inference.hpp"

namespace fairnets::inference {

std::string to_string(NetworkType type) {
    switch (type) {
        case NetworkType::FFNN: return "FFNN";
        case NetworkType::CNN: return "CNN";
        case NetworkType::RNN: return "RNN";
    }
    return "FFNN";
}

std::string to_string(IntendedUse use) {
    switch (use) {
        case IntendedUse::Classification: return "Classification";
        case IntendedUse::Regression: return "Regression";
        case IntendedUse::Unknown: return "Unknown";
    }
    return "Unknown";
}

NetworkType infer_network_type(const extract::ExtractedModel& model) {
    bool recurrent = false;
    for (const extract::ExtractedLayer& layer : model.layers) {
        if (!layer.layer_class) continue;
        if (layer.layer_class->family == vocab::LayerFamily::Convolutional) {
            return NetworkType::CNN;   // convolutional wins over recurrent
        }
        if (layer.layer_class->family == vocab::LayerFamily::Recurrent) recurrent = true;
    }
    return recurrent ? NetworkType::RNN : NetworkType::FFNN;
}

IntendedUse infer_intended_use(const extract::ExtractedModel& model,
                               const vocab::Vocabulary& vocabulary) {
    if (!model.loss_function) return IntendedUse::Unknown;
    auto category = vocabulary.loss_category(*model.loss_function);
    if (!category) return IntendedUse::Unknown;
    return *category == vocab::LossCategory::Classification ? IntendedUse::Classification
                                                            : IntendedUse::Regression;
}

}  // namespace fairnets::inference

#pragma once

#include <string>

#include "fairnets/extract.hpp"
#include "fairnets/vocab.hpp"

namespace fairnets::inference {

enum class NetworkType { FFNN, CNN, RNN };
enum class IntendedUse { Classification, Regression, Unknown };

std::string to_string(NetworkType type);
std::string to_string(IntendedUse use);

/// Any convolutional-family layer → CNN; else any recurrent-family layer →
/// RNN; else FFNN. Unknown layers contribute nothing.
NetworkType infer_network_type(const extract::ExtractedModel& model);

/// Lifts the loss function's vocabulary category; absent or unlisted loss →
/// Unknown.
IntendedUse infer_intended_use(const extract::ExtractedModel& model,
                               const vocab::Vocabulary& vocabulary);

}  // namespace fairnets::inference

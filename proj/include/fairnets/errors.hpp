#pragma once

#include <stdexcept>
#include <string>

namespace fairnets {

// Malformed configuration or embedded vocabulary data. Fatal.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// Repository metadata that violates the ingest contract. Fatal per record.
struct MappingError : std::runtime_error {
    explicit MappingError(const std::string& message) : std::runtime_error(message) {}
};

// Ground-truth manifest problems during evaluation.
struct ManifestError : std::runtime_error {
    explicit ManifestError(const std::string& message) : std::runtime_error(message) {}
};

// Evaluation over an empty or unusable comparison set.
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& message) : std::runtime_error(message) {}
};

// Two distinct networks minted the same IRI.
struct IriCollision : std::runtime_error {
    explicit IriCollision(const std::string& message) : std::runtime_error(message) {}
};

// Remote-fetch failures.
struct FetchError : std::runtime_error {
    explicit FetchError(const std::string& message) : std::runtime_error(message) {}
};

struct RepoNotFound : FetchError {
    explicit RepoNotFound(const std::string& message) : FetchError(message) {}
};

struct RateLimited : FetchError {
    explicit RateLimited(const std::string& message) : FetchError(message) {}
};

struct TransportError : FetchError {
    explicit TransportError(const std::string& message) : FetchError(message) {}
};

}  // namespace fairnets

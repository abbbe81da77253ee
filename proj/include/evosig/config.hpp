#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evosig/evolution.hpp"
#include "evosig/kernels.hpp"
#include "evosig/signature.hpp"
#include "evosig/simulator.hpp"

namespace evosig {

/// Invalid configuration; `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct SignatureSettings {
    std::size_t samples = 1000;
    Window window = kSignatureWindow;
};

struct DamageSettings {
    std::vector<std::string> scenarios{"S1", "S2", "S3"};
    std::size_t generations = 500;
};

struct ExperimentConfig {
    std::string preset;          // informational; values below are already resolved
    EvolutionConfig evolution;   // carries encoding, seed, mutation
    std::size_t checkpoint_interval = 50;
    HexapodConfig robot;
    SimulationOptions simulation;
    SignatureSettings signature;
    DamageSettings damage;
    std::string output_dir = "run";

    /// Fully resolved document; output_dir is excluded so it does not affect the hash.
    nlohmann::json canonical_json() const;
    /// FNV-1a over the canonical dump, 16 hex digits.
    std::string config_hash() const;
    /// "<encoding>-s<seed>-<first 8 hash digits>".
    std::string run_id() const;
    /// "run_id=... config_hash=..." for embedding in outputs.
    std::string provenance() const;
};

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown preset.
ExperimentConfig preset(std::string_view name);

/// Parses a config document; a "preset" key selects the base values that the
/// remaining keys override. Unknown keys and invalid values raise ConfigError
/// with the line of the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical document plus output_dir, suitable for parse_config.
nlohmann::json config_to_json(const ExperimentConfig& config);

std::string fnv1a_hex(std::string_view data);

} // namespace evosig

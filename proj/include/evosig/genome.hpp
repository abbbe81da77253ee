#pragma once

#include <memory>
#include <variant>

#include <json.hpp>

#include "evosig/controllers.hpp"
#include "evosig/cppn.hpp"
#include "evosig/rng.hpp"

namespace evosig {

/// Encoding tag plus either the 23 direct genes or a CPPN.
struct Genome {
    Encoding encoding = Encoding::Direct;
    std::variant<DirectGenome, CppnGenome> body = DirectGenome{};

    const DirectGenome& direct() const { return std::get<DirectGenome>(body); }
    const CppnGenome& cppn() const { return std::get<CppnGenome>(body); }

    friend bool operator==(const Genome&, const Genome&) = default;
};

/// Direct genes U[0,1]; CPPNs shaped for the encoding.
Genome random_genome(Encoding encoding, Rng& rng);

/// Direct genes: each gene perturbed with probability weight_mutation_rate by
/// N(0, gene_step_sigma), clamped to [0, 1]. CPPNs use the graph operator.
Genome mutate(const Genome& genome, const MutationConfig& config, Rng& rng);

std::unique_ptr<Controller> decode(const Genome& genome);

nlohmann::json cppn_to_json(const CppnGenome& cppn);
CppnGenome cppn_from_json(const nlohmann::json& j);

/// {"encoding": ..., "genes": [...]} or {"encoding": ..., "cppn": {...}}.
nlohmann::json genome_to_json(const Genome& genome);
Genome genome_from_json(const nlohmann::json& j);

} // namespace evosig

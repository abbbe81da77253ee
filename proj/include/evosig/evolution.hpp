#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evosig/diversity.hpp"
#include "evosig/genome.hpp"
#include "evosig/nsga2.hpp"
#include "evosig/simulator.hpp"

namespace evosig {

/// Population the diversity objective is averaged over.
enum class DiversityReference { Merged, Parents };

std::string_view to_string(DiversityReference r);
DiversityReference diversity_reference_from_string(std::string_view name);

struct EvolutionConfig {
    std::size_t population_size = 32;
    std::size_t generations = 300;
    Encoding encoding = Encoding::Supg;
    MutationConfig mutation;
    std::uint64_t seed = 1;
    DiversityReference diversity_reference = DiversityReference::Merged;

    /// Throws std::invalid_argument unless N is even and >= 2.
    void validate() const;
};

struct Individual {
    Genome genome;
    EvalResult eval;
    BehaviorVector behavior;
    Objectives objectives{};
    std::size_t rank = 0;
    double crowding = 0.0;
};

/// Objectives (-F, -|Theta|, mean Hamming distance to `reference`), self included when present.
Objectives objectives_of(const EvalResult& eval, double mean_diversity);

struct GenerationStats {
    std::size_t generation = 0;
    double best_P = 0.0;       // max P over the population
    double median_P = 0.0;
    double best_F = 0.0;       // min F over the population
    double best_Theta = 0.0;   // Theta of the individual with min F
    double front0_best_P = 0.0;
    double front0_best_negF = 0.0;
};

void write_stats_csv(std::ostream& out, std::span<const GenerationStats> stats, std::string_view comment = {});

/// Highest -F among individuals with |Theta| <= 1 degree; max P when none qualifies.
/// Ties go to the lower index.
std::size_t best_individual(std::span<const Individual> population);

struct RunArtifacts {
    std::vector<GenerationStats> stats;
    std::vector<Individual> population;
    std::size_t best_index = 0;

    const Individual& best() const { return population.at(best_index); }
};

struct Checkpoint {
    std::size_t generation = 0;
    std::uint64_t seed = 0;
    std::vector<Genome> population;
    std::vector<GenerationStats> stats;
};

nlohmann::json checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

struct EvolveHooks {
    /// Called after every generation (0 included) with the surviving population.
    std::function<void(std::size_t generation, const std::vector<Individual>& population,
                       const std::vector<GenerationStats>& stats)>
        on_generation;
};

RunArtifacts evolve(const EvolutionConfig& config, const HexapodConfig& robot, const SimulationOptions& sim = {},
                    const EvolveHooks& hooks = {});

/// Evolution starting from a given generation-0 population (size N).
RunArtifacts evolve_from(const EvolutionConfig& config, std::vector<Genome> initial, const HexapodConfig& robot,
                         const SimulationOptions& sim = {}, const EvolveHooks& hooks = {});

/// Continues a run from a checkpoint; the result matches an uninterrupted run.
RunArtifacts resume(const EvolutionConfig& config, const Checkpoint& checkpoint, const HexapodConfig& robot,
                    const SimulationOptions& sim = {}, const EvolveHooks& hooks = {});

Checkpoint make_checkpoint(const EvolutionConfig& config, std::size_t generation,
                           const std::vector<Individual>& population, const std::vector<GenerationStats>& stats);

// ---------------------------------------------------------------------------
// Damage recovery

struct DamageScenario {
    std::string name;
    std::vector<std::size_t> removed_legs;

    std::array<bool, kLegs> mask() const;
    /// "S1" -> {1}, "S2" -> {1, 4}, "S3" -> {1, 3}. Throws std::invalid_argument otherwise.
    static DamageScenario named(std::string_view name);
};

inline constexpr double kRecoveryTarget = 0.85;

struct RecoveryPoint {
    std::size_t generation;
    double best_P;
    double proportion_restored;
};

struct RecoveryArtifacts {
    DamageScenario scenario;
    double original_P = 0.0;
    std::vector<RecoveryPoint> curve;
    std::size_t generations_to_target = 0; // budget when unreached
    bool capped = false;
    RunArtifacts run;
};

/// Seeds N mutants of `best`, then evolves them on the damaged robot.
/// Throws std::invalid_argument when the intact P of `best` is not positive.
RecoveryArtifacts recovery_experiment(const Individual& best, const DamageScenario& scenario,
                                      const EvolutionConfig& config, const HexapodConfig& robot,
                                      const SimulationOptions& sim = {}, const EvolveHooks& hooks = {});

void write_recovery_csv(std::ostream& out, std::span<const RecoveryPoint> curve, std::string_view comment = {});

} // namespace evosig

#include "evosig/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "evosig/kernels.hpp"

namespace evosig {

namespace {

void put_double(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

double median_of(std::vector<double> v) {
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<Individual> evaluate_all(std::vector<Genome> genomes, const HexapodConfig& robot,
                                     SimulationOptions sim) {
    sim.record_trajectory = false;
    auto evals = evaluate_batch(genomes, robot, sim);
    std::vector<Individual> out(genomes.size());
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        out[i].genome = std::move(genomes[i]);
        out[i].behavior = behavior_vector(evals[i].gait);
        out[i].eval = std::move(evals[i]);
    }
    return out;
}

/// Objective 3 against the first `reference_count` members, then rank and crowding.
void assign_objectives(std::vector<Individual>& pop, std::size_t reference_count) {
    std::vector<BehaviorVector> behaviors;
    behaviors.reserve(pop.size());
    for (const auto& ind : pop)
        behaviors.push_back(ind.behavior);

    std::vector<double> diversity;
    if (reference_count == pop.size()) {
        diversity = mean_hamming(behaviors);
    } else {
        diversity.resize(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) {
            std::size_t total = 0;
            for (std::size_t j = 0; j < reference_count; ++j)
                total += hamming(behaviors[i], behaviors[j]);
            diversity[i] = static_cast<double>(total) / static_cast<double>(reference_count);
        }
    }
    std::vector<Objectives> objs(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i)
        objs[i] = pop[i].objectives = objectives_of(pop[i].eval, diversity[i]);
    const auto info = rank_and_crowd(objs);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        pop[i].rank = info[i].rank;
        pop[i].crowding = info[i].crowding;
    }
}

GenerationStats stats_of(std::size_t generation, const std::vector<Individual>& pop) {
    GenerationStats s;
    s.generation = generation;
    s.best_P = -std::numeric_limits<double>::infinity();
    s.best_F = std::numeric_limits<double>::infinity();
    s.front0_best_P = -std::numeric_limits<double>::infinity();
    s.front0_best_negF = -std::numeric_limits<double>::infinity();
    std::vector<double> ps;
    for (const auto& ind : pop) {
        const auto& e = ind.eval;
        ps.push_back(e.forward_displacement);
        s.best_P = std::max(s.best_P, e.forward_displacement);
        if (e.goal_distance < s.best_F) {
            s.best_F = e.goal_distance;
            s.best_Theta = e.heading_deg;
        }
        if (ind.rank == 0) {
            s.front0_best_P = std::max(s.front0_best_P, e.forward_displacement);
            s.front0_best_negF = std::max(s.front0_best_negF, -e.goal_distance);
        }
    }
    s.median_P = median_of(ps);
    return s;
}

RunArtifacts run_loop(const EvolutionConfig& config, std::vector<Individual> pop, std::size_t start,
                      std::vector<GenerationStats> stats, const HexapodConfig& robot, const SimulationOptions& sim,
                      const EvolveHooks& hooks) {
    const std::size_t n = config.population_size;
    for (std::size_t g = start + 1; g <= config.generations; ++g) {
        std::vector<RankInfo> info(n);
        for (std::size_t i = 0; i < n; ++i)
            info[i] = {pop[i].rank, pop[i].crowding};

        std::vector<Genome> children;
        children.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            Rng select = make_stream(config.seed, "select", g, i);
            const std::size_t a = pick_index(select, n);
            const std::size_t b = pick_index(select, n);
            Rng rng = make_stream(config.seed, "mutate", g, i);
            children.push_back(mutate(pop[tournament(info, a, b)].genome, config.mutation, rng));
        }

        std::vector<Individual> merged = std::move(pop);
        for (auto& child : evaluate_all(std::move(children), robot, sim))
            merged.push_back(std::move(child));
        assign_objectives(merged, config.diversity_reference == DiversityReference::Merged ? merged.size() : n);

        std::vector<Objectives> objs(merged.size());
        for (std::size_t i = 0; i < merged.size(); ++i)
            objs[i] = merged[i].objectives;
        pop.clear();
        for (std::size_t idx : truncate_population(objs, n))
            pop.push_back(std::move(merged[idx]));
        assign_objectives(pop, pop.size());

        stats.push_back(stats_of(g, pop));
        if (hooks.on_generation)
            hooks.on_generation(g, pop, stats);
    }
    RunArtifacts out;
    out.best_index = best_individual(pop);
    out.population = std::move(pop);
    out.stats = std::move(stats);
    return out;
}

} // namespace

std::string_view to_string(DiversityReference r) {
    return r == DiversityReference::Merged ? "merged" : "parents";
}

DiversityReference diversity_reference_from_string(std::string_view name) {
    if (name == "merged")
        return DiversityReference::Merged;
    if (name == "parents")
        return DiversityReference::Parents;
    throw std::invalid_argument("diversity reference must be 'merged' or 'parents'");
}

void EvolutionConfig::validate() const {
    if (population_size < 2 || population_size % 2 != 0)
        throw std::invalid_argument("population size must be even and at least 2");
    mutation.validate();
}

Objectives objectives_of(const EvalResult& eval, double mean_diversity) {
    return {-eval.goal_distance, -std::abs(eval.heading_deg), mean_diversity};
}

void write_stats_csv(std::ostream& out, std::span<const GenerationStats> stats, std::string_view comment) {
    if (!comment.empty())
        out << "# " << comment << '\n';
    out << "generation,best_P,median_P,best_F,best_Theta,front0_best_P\n";
    for (const auto& s : stats) {
        out << s.generation;
        for (double v : {s.best_P, s.median_P, s.best_F, s.best_Theta, s.front0_best_P}) {
            out << ',';
            put_double(out, v);
        }
        out << '\n';
    }
}

std::size_t best_individual(std::span<const Individual> population) {
    if (population.empty())
        throw std::invalid_argument("empty population");
    std::optional<std::size_t> gated;
    std::size_t by_p = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const auto& e = population[i].eval;
        if (std::abs(e.heading_deg) <= 1.0 &&
            (!gated || e.goal_distance < population[*gated].eval.goal_distance))
            gated = i;
        if (e.forward_displacement > population[by_p].eval.forward_displacement)
            by_p = i;
    }
    return gated ? *gated : by_p;
}

nlohmann::json checkpoint_to_json(const Checkpoint& c) {
    nlohmann::json j;
    j["generation"] = c.generation;
    j["seed"] = c.seed;
    j["rng"] = {{"kind", "named-streams"}, {"seed", c.seed}, {"next_generation", c.generation + 1}};
    j["population"] = nlohmann::json::array();
    for (const auto& g : c.population)
        j["population"].push_back(genome_to_json(g));
    j["stats"] = nlohmann::json::array();
    for (const auto& s : c.stats)
        j["stats"].push_back({{"generation", s.generation},
                              {"best_P", s.best_P},
                              {"median_P", s.median_P},
                              {"best_F", s.best_F},
                              {"best_Theta", s.best_Theta},
                              {"front0_best_P", s.front0_best_P},
                              {"front0_best_negF", s.front0_best_negF}});
    return j;
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    Checkpoint c;
    c.generation = j.at("generation").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& g : j.at("population"))
        c.population.push_back(genome_from_json(g));
    for (const auto& s : j.at("stats")) {
        GenerationStats st;
        st.generation = s.at("generation").get<std::size_t>();
        st.best_P = s.at("best_P").get<double>();
        st.median_P = s.at("median_P").get<double>();
        st.best_F = s.at("best_F").get<double>();
        st.best_Theta = s.at("best_Theta").get<double>();
        st.front0_best_P = s.at("front0_best_P").get<double>();
        st.front0_best_negF = s.at("front0_best_negF").get<double>();
        c.stats.push_back(st);
    }
    if (c.stats.size() != c.generation + 1)
        throw std::invalid_argument("checkpoint stats do not cover generations 0.." + std::to_string(c.generation));
    return c;
}

Checkpoint make_checkpoint(const EvolutionConfig& config, std::size_t generation,
                           const std::vector<Individual>& population, const std::vector<GenerationStats>& stats) {
    Checkpoint c;
    c.generation = generation;
    c.seed = config.seed;
    for (const auto& ind : population)
        c.population.push_back(ind.genome);
    c.stats = stats;
    return c;
}

RunArtifacts evolve_from(const EvolutionConfig& config, std::vector<Genome> initial, const HexapodConfig& robot,
                         const SimulationOptions& sim, const EvolveHooks& hooks) {
    config.validate();
    robot.validate();
    if (initial.size() != config.population_size)
        throw std::invalid_argument("initial population size differs from the configured size");
    for (const auto& g : initial)
        if (g.encoding != config.encoding)
            throw std::invalid_argument("initial genome has the wrong encoding");
    auto pop = evaluate_all(std::move(initial), robot, sim);
    assign_objectives(pop, pop.size());
    std::vector<GenerationStats> stats{stats_of(0, pop)};
    if (hooks.on_generation)
        hooks.on_generation(0, pop, stats);
    return run_loop(config, std::move(pop), 0, std::move(stats), robot, sim, hooks);
}

RunArtifacts evolve(const EvolutionConfig& config, const HexapodConfig& robot, const SimulationOptions& sim,
                    const EvolveHooks& hooks) {
    config.validate();
    std::vector<Genome> initial;
    initial.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
        Rng rng = make_stream(config.seed, "init", i);
        initial.push_back(random_genome(config.encoding, rng));
    }
    return evolve_from(config, std::move(initial), robot, sim, hooks);
}

RunArtifacts resume(const EvolutionConfig& config, const Checkpoint& checkpoint, const HexapodConfig& robot,
                    const SimulationOptions& sim, const EvolveHooks& hooks) {
    config.validate();
    robot.validate();
    if (checkpoint.seed != config.seed)
        throw std::invalid_argument("checkpoint seed differs from the configured seed");
    if (checkpoint.population.size() != config.population_size)
        throw std::invalid_argument("checkpoint population size differs from the configured size");
    if (checkpoint.generation > config.generations)
        throw std::invalid_argument("checkpoint is past the configured generation budget");
    auto pop = evaluate_all(checkpoint.population, robot, sim);
    assign_objectives(pop, pop.size());
    return run_loop(config, std::move(pop), checkpoint.generation, checkpoint.stats, robot, sim, hooks);
}

// --- damage recovery ----------------------------------------------------------

std::array<bool, kLegs> DamageScenario::mask() const {
    std::array<bool, kLegs> m{};
    for (std::size_t leg : removed_legs) {
        if (leg >= kLegs)
            throw std::invalid_argument("leg index out of range");
        m[leg] = true;
    }
    return m;
}

DamageScenario DamageScenario::named(std::string_view name) {
    if (name == "S1")
        return {"S1", {1}};
    if (name == "S2")
        return {"S2", {1, 4}};
    if (name == "S3")
        return {"S3", {1, 3}};
    throw std::invalid_argument("unknown damage scenario '" + std::string(name) + "' (expected S1, S2 or S3)");
}

RecoveryArtifacts recovery_experiment(const Individual& best, const DamageScenario& scenario,
                                      const EvolutionConfig& config, const HexapodConfig& robot,
                                      const SimulationOptions& sim, const EvolveHooks& hooks) {
    config.validate();
    RecoveryArtifacts out;
    out.scenario = scenario;

    HexapodConfig intact = robot;
    intact.damage_mask = {};
    {
        auto controller = decode(best.genome);
        SimulationOptions quiet = sim;
        quiet.record_trajectory = false;
        out.original_P = simulate(*controller, intact, quiet).forward_displacement;
    }
    if (!(out.original_P > 0.0))
        throw std::invalid_argument("the intact individual does not move forward; proportion restored is undefined");

    std::vector<Genome> seeds;
    seeds.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
        Rng rng = make_stream(config.seed, "recovery-seed/" + scenario.name, i);
        seeds.push_back(mutate(best.genome, config.mutation, rng));
    }

    EvolutionConfig damaged_cfg = config;
    damaged_cfg.encoding = best.genome.encoding;
    damaged_cfg.seed = stream_seed(config.seed, "recovery/" + scenario.name);
    HexapodConfig damaged = robot;
    damaged.damage_mask = scenario.mask();

    out.run = evolve_from(damaged_cfg, std::move(seeds), damaged, sim, hooks);
    out.generations_to_target = config.generations;
    out.capped = true;
    for (const auto& s : out.run.stats) {
        const double prop = s.best_P / out.original_P;
        out.curve.push_back({s.generation, s.best_P, prop});
        if (out.capped && prop >= kRecoveryTarget) {
            out.generations_to_target = s.generation;
            out.capped = false;
        }
    }
    return out;
}

void write_recovery_csv(std::ostream& out, std::span<const RecoveryPoint> curve, std::string_view comment) {
    if (!comment.empty())
        out << "# " << comment << '\n';
    out << "generation,best_P,proportion_restored\n";
    for (const auto& p : curve) {
        out << p.generation << ',';
        put_double(out, p.best_P);
        out << ',';
        put_double(out, p.proportion_restored);
        out << '\n';
    }
}

} // namespace evosig

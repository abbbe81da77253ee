#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evosig/config.hpp"
#include "evosig/evolution.hpp"
#include "evosig/genome.hpp"
#include "evosig/io.hpp"
#include "evosig/kernels.hpp"
#include "evosig/signature.hpp"
#include "evosig/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace evosig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream ss;
    fn(ss);
    return ss.str();
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

ExperimentConfig run_config(const fs::path& run_dir) {
    const fs::path path = run_dir / "config.json";
    if (!fs::exists(path))
        throw std::runtime_error("no config.json in " + run_dir.string());
    json j = json::parse(read_text_file(path));
    j.erase("provenance");
    return parse_config(j.dump(2));
}

void write_config(const fs::path& dir, const ExperimentConfig& cfg) {
    json j = config_to_json(cfg);
    j["provenance"] = cfg.provenance();
    write_text_file(dir / "config.json", dump(j));
}

std::string checkpoint_name(std::size_t generation) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "gen_%06zu.json", generation);
    return buf;
}

std::optional<fs::path> latest_checkpoint(const fs::path& run_dir) {
    const fs::path dir = run_dir / "checkpoints";
    if (!fs::exists(dir))
        return std::nullopt;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json")
            files.push_back(e.path());
    if (files.empty())
        return std::nullopt;
    std::sort(files.begin(), files.end());
    return files.back();
}

json eval_summary(const EvalResult& e) {
    return {{"P", e.forward_displacement}, {"F", e.goal_distance}, {"Theta", e.heading_deg}, {"failed", e.failed}};
}

/// Gait, trajectory and phenotype of one genome, written next to `stem`.
void write_individual_outputs(const fs::path& dir, const std::string& stem, const Genome& genome,
                              const HexapodConfig& robot, const SimulationOptions& sim, const std::string& prov) {
    auto controller = decode(genome);
    json phen = controller->phenotype_json();
    const EvalResult e = simulate(*controller, robot, sim);
    write_text_file(dir / (stem + "_gait.pbm"), render([&](std::ostream& o) { write_gait_pbm(o, e.gait, prov); }));
    write_text_file(dir / (stem + "_gait.svg"), render([&](std::ostream& o) { write_gait_svg(o, e.gait, prov); }));
    write_text_file(dir / (stem + "_trajectory.csv"),
                    render([&](std::ostream& o) { write_trajectory_csv(o, e.trajectory, prov); }));
    phen["provenance"] = prov;
    write_text_file(dir / (stem + "_phenotype.json"), dump(phen));
}

json load_best(const fs::path& run_dir) {
    const fs::path path = run_dir / "best_genome.json";
    if (!fs::exists(path))
        throw std::runtime_error("no best_genome.json in " + run_dir.string() + " (run evolve first)");
    return json::parse(read_text_file(path));
}

// --- evolve -------------------------------------------------------------------

struct EvolveArgs {
    std::string config;
    std::string out;
    bool force = false;
    bool resume = false;
};

void run_evolve(const EvolveArgs& args) {
    ExperimentConfig cfg = load_config(args.config);
    if (!args.out.empty())
        cfg.output_dir = args.out;
    const fs::path dir = cfg.output_dir;
    const std::string prov = cfg.provenance();

    std::optional<Checkpoint> from;
    if (args.resume) {
        if (const auto ck = latest_checkpoint(dir)) {
            from = checkpoint_from_json(json::parse(read_text_file(*ck)));
            if (run_config(dir).config_hash() != cfg.config_hash())
                throw std::runtime_error("run directory was created with a different configuration");
        }
    } else if (fs::exists(dir) && !fs::is_empty(dir)) {
        if (!args.force)
            throw UsageError("run directory " + dir.string() + " exists; pass --force to overwrite");
        fs::remove_all(dir);
    }
    fs::create_directories(dir);
    write_config(dir, cfg);

    EvolveHooks hooks;
    hooks.on_generation = [&](std::size_t g, const std::vector<Individual>& pop,
                              const std::vector<GenerationStats>& stats) {
        const bool due = cfg.checkpoint_interval > 0 && g % cfg.checkpoint_interval == 0;
        if (!due && g != cfg.evolution.generations)
            return;
        json j = checkpoint_to_json(make_checkpoint(cfg.evolution, g, pop, stats));
        j["provenance"] = prov;
        write_text_file(dir / "checkpoints" / checkpoint_name(g), dump(j));
        std::cerr << "generation " << g << ": best P " << stats.back().best_P << " m\n";
    };

    const RunArtifacts run = from ? resume(cfg.evolution, *from, cfg.robot, cfg.simulation, hooks)
                                  : evolve(cfg.evolution, cfg.robot, cfg.simulation, hooks);

    write_text_file(dir / "stats.csv", render([&](std::ostream& o) { write_stats_csv(o, run.stats, prov); }));
    const Individual& best = run.best();
    json bj;
    bj["provenance"] = prov;
    bj["generation"] = cfg.evolution.generations;
    bj["eval"] = eval_summary(best.eval);
    bj["genome"] = genome_to_json(best.genome);
    write_text_file(dir / "best_genome.json", dump(bj));
    write_individual_outputs(dir, "best", best.genome, cfg.robot, cfg.simulation, prov);
    std::cout << dir.string() << '\n';
}

// --- signature ----------------------------------------------------------------

struct SignatureArgs {
    std::string run;
    bool sweep = false;
    std::string intensity = "medium";
    std::size_t samples = 0;
};

void write_signature_set(const fs::path& dir, const std::string& level, const std::vector<SignatureSample>& samples,
                         const ExperimentConfig& cfg, const std::string& prov) {
    const DensityGrid grid = signature_grid(samples, cfg.signature.window);
    write_text_file(dir / ("samples_" + level + ".csv"),
                    render([&](std::ostream& o) { write_samples_csv(o, samples, prov); }));
    write_text_file(dir / ("grid_" + level + ".csv"), render([&](std::ostream& o) { write_grid_csv(o, grid, prov); }));
    write_text_file(dir / ("heatmap_" + level + ".svg"),
                    render([&](std::ostream& o) { write_heatmap_svg(o, grid, prov); }));
    std::cout << level << ": median f1 " << median(f1_values(samples)) << ", median f2 " << median(f2_values(samples))
              << ", beneficial " << beneficial_proportion(samples) << ", strict "
              << beneficial_proportion(samples, kStrictFloor) << '\n';
}

void run_signature(const SignatureArgs& args) {
    const fs::path run_dir = args.run;
    const ExperimentConfig cfg = run_config(run_dir);
    const std::string prov = cfg.provenance();
    const Genome genome = genome_from_json(load_best(run_dir).at("genome"));
    const std::size_t n = args.samples ? args.samples : cfg.signature.samples;

    const SignatureParent parent = prepare_parent(genome, cfg.robot, cfg.simulation);
    if (!(parent.P > 0.0))
        throw std::runtime_error("best individual has P <= 0; the signature is undefined");
    const fs::path dir = run_dir / "signature";
    if (args.sweep) {
        const IntensitySweep s =
            intensity_sweep(parent, n, cfg.evolution.mutation, cfg.evolution.seed, cfg.robot, cfg.simulation);
        write_signature_set(dir, "low", s.low, cfg, prov);
        write_signature_set(dir, "medium", s.medium, cfg, prov);
        write_signature_set(dir, "high", s.high, cfg, prov);
        return;
    }
    const auto& levels = intensity_levels();
    const auto it = std::find_if(levels.begin(), levels.end(), [&](const auto& l) { return l.name == args.intensity; });
    if (it == levels.end())
        throw UsageError("--intensity must be low, medium or high");
    const auto samples = sample_signature(parent, n, cfg.evolution.mutation.with_intensity(it->multiplier),
                                          cfg.evolution.seed, it->name, cfg.robot, cfg.simulation);
    write_signature_set(dir, it->name, samples, cfg, prov);
}

// --- damage -------------------------------------------------------------------

struct DamageArgs {
    std::string run;
    std::vector<std::string> scenarios;
    std::optional<std::size_t> generations;
};

void run_damage(const DamageArgs& args) {
    const fs::path run_dir = args.run;
    const ExperimentConfig cfg = run_config(run_dir);
    const std::string prov = cfg.provenance();
    const json bj = load_best(run_dir);

    std::vector<DamageScenario> scenarios;
    for (const auto& name : args.scenarios.empty() ? cfg.damage.scenarios : args.scenarios) {
        try {
            scenarios.push_back(DamageScenario::named(name));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }

    Individual best;
    best.genome = genome_from_json(bj.at("genome"));
    EvolutionConfig ec = cfg.evolution;
    ec.generations = args.generations.value_or(cfg.damage.generations);

    for (const auto& sc : scenarios) {
        const RecoveryArtifacts rec = recovery_experiment(best, sc, ec, cfg.robot, cfg.simulation);
        const fs::path dir = run_dir / "damage" / sc.name;
        write_text_file(dir / "recovery.csv", render([&](std::ostream& o) { write_recovery_csv(o, rec.curve, prov); }));
        json legs = json::array();
        for (auto l : sc.removed_legs)
            legs.push_back(l);
        json summary{{"provenance", prov},
                     {"scenario", sc.name},
                     {"removed_legs", legs},
                     {"generations", ec.generations},
                     {"original_P", rec.original_P},
                     {"initial_proportion_restored", rec.curve.front().proportion_restored},
                     {"final_proportion_restored", rec.curve.back().proportion_restored},
                     {"target", kRecoveryTarget},
                     {"generations_to_target", rec.generations_to_target},
                     {"capped", rec.capped}};
        write_text_file(dir / "summary.json", dump(summary));
        HexapodConfig damaged = cfg.robot;
        damaged.damage_mask = sc.mask();
        write_individual_outputs(dir, "best", rec.run.best().genome, damaged, cfg.simulation, prov);
        std::cout << sc.name << ": restored " << rec.curve.front().proportion_restored << " -> "
                  << rec.curve.back().proportion_restored << ", generations to 85% " << rec.generations_to_target
                  << (rec.capped ? " (capped)" : "") << '\n';
    }
}

// --- render -------------------------------------------------------------------

struct RenderArgs {
    std::string run;
    std::string genome;
    std::string out;
    std::string scenario;
    bool trace = false;
};

/// Records the oscillator state after every tick of a CPG controller.
class TracingController final : public Controller {
public:
    explicit TracingController(std::unique_ptr<Controller> inner) : inner_(std::move(inner)) {
        cpg_ = dynamic_cast<CpgController*>(inner_.get());
    }
    Encoding kind() const override { return inner_->kind(); }
    JointCommand tick(const SensorFrame& s, double t) override {
        JointCommand c = inner_->tick(s, t);
        if (cpg_)
            rows.push_back({t, cpg_->network().state()});
        return c;
    }
    bool failed() const override { return inner_->failed(); }
    json phenotype_json() const override { return inner_->phenotype_json(); }
    bool has_oscillators() const { return cpg_ != nullptr; }

    std::vector<TraceRow> rows;

private:
    std::unique_ptr<Controller> inner_;
    CpgController* cpg_ = nullptr;
};

void run_render(const RenderArgs& args) {
    if (args.run.empty() == args.genome.empty())
        throw UsageError("give exactly one of --run or --genome");
    ExperimentConfig cfg;
    Genome genome;
    std::string prov;
    fs::path out = args.out;
    if (!args.run.empty()) {
        cfg = run_config(args.run);
        prov = cfg.provenance();
        genome = genome_from_json(load_best(args.run).at("genome"));
        if (out.empty())
            out = fs::path(args.run) / "render";
    } else {
        json j = json::parse(read_text_file(args.genome));
        genome = genome_from_json(j.contains("genome") ? j.at("genome") : j);
        prov = "genome_hash=" + fnv1a_hex(genome_to_json(genome).dump());
        if (out.empty())
            out = "render";
    }
    HexapodConfig robot = cfg.robot;
    if (!args.scenario.empty()) {
        try {
            robot.damage_mask = DamageScenario::named(args.scenario).mask();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    write_individual_outputs(out, "render", genome, robot, cfg.simulation, prov);
    if (args.trace) {
        TracingController tc(decode(genome));
        if (!tc.has_oscillators())
            throw UsageError("--trace needs an oscillator-based genome (direct, cpg, cpg-fb)");
        simulate(tc, robot, cfg.simulation);
        write_text_file(out / "render_trace.csv", render([&](std::ostream& o) { write_trace_csv(o, tc.rows); }));
    }
    std::cout << out.string() << '\n';
}

// --- verify -------------------------------------------------------------------

struct VerifyArgs {
    std::string run;
    bool rerun = false;
};

bool run_verify(const VerifyArgs& args) {
    const fs::path run_dir = args.run;
    const ExperimentConfig cfg = run_config(run_dir);
    const std::string expect_id = cfg.run_id();
    const std::string expect_hash = cfg.config_hash();
    bool ok = true;
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(run_dir))
        if (e.is_regular_file())
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        if (f.filename() == "render_trace.csv")
            continue;
        const auto p = find_provenance(read_text_file(f));
        const bool match = p && p->run_id == expect_id && p->config_hash == expect_hash;
        ok = ok && match;
        std::cout << (match ? "ok       " : "MISMATCH ") << fs::relative(f, run_dir).string() << '\n';
    }
    if (args.rerun) {
        const fs::path tmp = fs::temp_directory_path() / ("evosig-verify-" + expect_hash);
        fs::remove_all(tmp);
        ExperimentConfig again = cfg;
        again.output_dir = tmp.string();
        const auto cfg_path = tmp.string() + ".json";
        write_text_file(cfg_path, dump(config_to_json(again)));
        run_evolve({cfg_path, tmp.string(), true, false});
        for (const char* name : {"stats.csv", "best_genome.json"}) {
            const bool same = read_text_file(run_dir / name) == read_text_file(tmp / name);
            ok = ok && same;
            std::cout << (same ? "rerun ok       " : "rerun MISMATCH ") << name << '\n';
        }
        fs::remove_all(tmp);
        fs::remove(cfg_path);
    }
    std::cout << (ok ? "verified" : "verification FAILED") << '\n';
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolve hexapod gait controllers and measure their evolvability signatures"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads for evaluation (0 = all logical cores)")
        ->check(CLI::NonNegativeNumber);

    EvolveArgs ev;
    auto* evolve_cmd = app.add_subcommand("evolve", "Run NSGA-II evolution from a JSON config");
    evolve_cmd->add_option("-c,--config", ev.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    evolve_cmd->add_option("-o,--out", ev.out, "Run directory (overrides output_dir)");
    evolve_cmd->add_flag("--force", ev.force, "Overwrite an existing run directory");
    evolve_cmd->add_flag("--resume", ev.resume, "Continue from the latest checkpoint in the run directory");

    SignatureArgs sg;
    auto* sig_cmd = app.add_subcommand("signature", "Sample the evolvability signature of a run's best individual");
    sig_cmd->add_option("-r,--run", sg.run, "Run directory")->required()->check(CLI::ExistingDirectory);
    sig_cmd->add_flag("--sweep", sg.sweep, "Sample low, medium and high intensities");
    sig_cmd->add_option("--intensity", sg.intensity, "low, medium or high")
        ->check(CLI::IsMember({"low", "medium", "high"}));
    sig_cmd->add_option("-n,--samples", sg.samples, "Mutants per set (default from config)");

    DamageArgs dm;
    auto* dmg_cmd = app.add_subcommand("damage", "Recovery experiments on a damaged robot");
    dmg_cmd->add_option("-r,--run", dm.run, "Run directory")->required()->check(CLI::ExistingDirectory);
    dmg_cmd->add_option("-s,--scenario", dm.scenarios, "S1, S2 or S3 (repeatable; default from config)");
    dmg_cmd->add_option("-g,--generations", dm.generations, "Recovery generation budget");

    RenderArgs rd;
    auto* render_cmd = app.add_subcommand("render", "Gait diagram, trajectory and phenotype of a genome");
    render_cmd->add_option("-r,--run", rd.run, "Run directory (renders best_genome.json)");
    render_cmd->add_option("-g,--genome", rd.genome, "Genome JSON file")->check(CLI::ExistingFile);
    render_cmd->add_option("-o,--out", rd.out, "Output directory");
    render_cmd->add_option("-s,--scenario", rd.scenario, "Apply damage scenario S1, S2 or S3");
    render_cmd->add_flag("--trace", rd.trace, "Also dump the oscillator trace CSV");

    VerifyArgs vf;
    auto* verify_cmd = app.add_subcommand("verify", "Check embedded run IDs and config hashes");
    verify_cmd->add_option("-r,--run", vf.run, "Run directory")->required()->check(CLI::ExistingDirectory);
    verify_cmd->add_flag("--rerun", vf.rerun, "Re-run evolution and compare outputs byte for byte");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        set_worker_threads(threads);
        if (*evolve_cmd)
            run_evolve(ev);
        else if (*sig_cmd)
            run_signature(sg);
        else if (*dmg_cmd)
            run_damage(dm);
        else if (*render_cmd)
            run_render(rd);
        else if (*verify_cmd)
            return run_verify(vf) ? kExitOk : kExitRuntime;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed run file: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

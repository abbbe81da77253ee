// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "evosig/cpg.hpp"
#include "evosig/diversity.hpp"
#include "evosig/evolution.hpp"
#include "evosig/kernels.hpp"
#include "evosig/nsga2.hpp"
#include "evosig/signature.hpp"
#include "oracles.hpp"

using namespace evosig;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

EvolutionConfig desk(Encoding e, std::uint64_t seed, std::size_t generations = 300) {
    EvolutionConfig c;
    c.population_size = 32;
    c.generations = generations;
    c.encoding = e;
    c.seed = seed;
    return c;
}

// Desk-scale runs shared between criteria, keyed by (encoding, seed).
std::map<std::pair<Encoding, std::uint64_t>, RunArtifacts>& run_cache() {
    static std::map<std::pair<Encoding, std::uint64_t>, RunArtifacts> cache;
    return cache;
}

const RunArtifacts& desk_run(Encoding e, std::uint64_t seed) {
    auto& cache = run_cache();
    const auto key = std::make_pair(e, seed);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, evolve(desk(e, seed), HexapodConfig{})).first;
    return it->second;
}

// The run's best individual by the selection rule; the fastest walker when that one does not move forward.
const Individual& signature_parent(const RunArtifacts& run) {
    const Individual& best = run.best();
    if (best.eval.forward_displacement > 0.0)
        return best;
    return *std::max_element(run.population.begin(), run.population.end(), [](const auto& a, const auto& b) {
        return a.eval.forward_displacement < b.eval.forward_displacement;
    });
}

std::vector<Objectives> random_points(Rng& rng, std::size_t n) {
    std::vector<Objectives> pts(n);
    const std::size_t levels = 2 + pick_index(rng, 20);
    for (auto& p : pts)
        for (auto& v : p)
            v = static_cast<double>(pick_index(rng, levels));
    return pts;
}

std::string random_bits(Rng& rng, std::size_t n) {
    std::string s(n, '0');
    for (auto& c : s)
        c = bernoulli(rng, 0.5) ? '1' : '0';
    return s;
}

// --- criteria -------------------------------------------------------------------

Outcome nsga_oracle() {
    Rng rng(20240601);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = random_points(rng, 1 + pick_index(rng, 32));
        mismatches += fast_nondominated_sort(pts) != oracle::peel_fronts(pts);
    }
    return {mismatches == 0, std::to_string(200 - mismatches) + "/200 populations match"};
}

Outcome cpg_limit_cycle() {
    OscillatorParams single;
    single.amplitudes = {0.6};
    OscillatorNetwork one(single, CouplingGraph(1));
    one.advance(2.0);
    const double amp_err = std::abs(one.state().alpha[0] - 0.6);

    OscillatorParams pair;
    pair.amplitudes = {0.5, 0.5};
    CouplingGraph g(2);
    g.couple(0, 1, kPi / 2);
    OscillatorNetwork two(pair, g);
    two.advance(5.0);
    const double phase_err =
        std::abs(std::remainder(two.state().theta[1] - two.state().theta[0] - kPi / 2, 2 * kPi));
    return {amp_err < 1e-3 && phase_err < 0.05,
            "|alpha-A| at 2 s = " + fmt("%.2e", amp_err) + ", phase error at 5 s = " + fmt("%.2e", phase_err) +
                " rad"};
}

Outcome loop_closure() {
    // Independent loops written out as oscillator cycles.
    const std::vector<std::vector<std::size_t>> loops{
        {1, 0, 3, 4}, {1, 2, 5, 4}, {6, 3, 4, 7}, {8, 5, 4, 7}, {9, 10, 7, 6}, {11, 10, 7, 8}};
    Rng rng(77);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::array<double, kFreeBiases> free{};
        for (auto& b : free)
            b = uniform(rng, 0, 2 * kPi);
        const CouplingGraph g = complete_loop_biases(free);
        for (const auto& loop : loops) {
            double s = 0.0;
            for (std::size_t k = 0; k < loop.size(); ++k)
                s += g.phase_bias(loop[k], loop[(k + 1) % loop.size()]);
            worst = std::max(worst, std::abs(std::remainder(s, 2 * kPi)));
        }
    }
    return {worst < 1e-9, "worst loop residual " + fmt("%.2e", worst) + " rad over 1000 vectors"};
}

Outcome diversity_metric() {
    Rng rng(4242);
    bool self_zero = true;
    for (int i = 0; i < 100; ++i) {
        const auto b = BehaviorVector::from_string(random_bits(rng, 2004));
        self_zero = self_zero && nmi_distance(b, b) == 0.0;
    }
    double asym = 0.0;
    std::vector<double> f2;
    for (int i = 0; i < 1000; ++i) {
        const auto a = BehaviorVector::from_string(random_bits(rng, 2004));
        const auto b = BehaviorVector::from_string(random_bits(rng, 2004));
        const double ab = nmi_distance(a, b);
        asym = std::max(asym, std::abs(ab - nmi_distance(b, a)));
        f2.push_back(ab);
    }
    const double med = median(f2);
    double sum = 0.0, oracle_sum = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::string s = random_bits(rng, 2004);
        sum += entropy_corrected(BehaviorVector::from_string(s)).corrected();
        oracle_sum += oracle::corrected_entropy(s);
    }
    const double mean_h = sum / 1000.0, oracle_h = oracle_sum / 1000.0;
    const bool pass = self_zero && asym <= 1e-12 && med > 0.9 && std::abs(mean_h - 1.0005) < 0.01 &&
                      std::abs(mean_h - oracle_h) < 1e-12;
    return {pass, std::string("self-distance ") + (self_zero ? "0" : "nonzero") + ", asymmetry " +
                      fmt("%.1e", asym) + ", median f2 " + fmt("%.4f", med) + ", mean corrected entropy " +
                      fmt("%.5f", mean_h) + " (oracle " + fmt("%.5f", oracle_h) + ")"};
}

Outcome evolution_improves() {
    const auto t0 = std::chrono::steady_clock::now();
    const RunArtifacts& run = desk_run(Encoding::Supg, 7);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double first = run.stats.front().best_P, last = run.stats.back().best_P;
    bool elitist = true;
    for (std::size_t g = 1; g < run.stats.size(); ++g)
        elitist = elitist && run.stats[g].front0_best_P >= run.stats[g - 1].front0_best_P;
    const bool pass = last >= 3.0 * first && first > 0.0 && elitist && secs < 300.0;
    return {pass, "best P " + fmt("%.3f", first) + " -> " + fmt("%.3f", last) + " m (" + fmt("%.1f", last / first) +
                      "x), front-0 best P " + (elitist ? "non-decreasing" : "DECREASED") + ", run " +
                      fmt("%.1f", secs) + " s"};
}

Outcome signature_ordering() {
    int wins = 0;
    std::string per;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        double med[2];
        const Encoding encs[2] = {Encoding::Direct, Encoding::Supg};
        for (int k = 0; k < 2; ++k) {
            const Individual& parent = signature_parent(desk_run(encs[k], seed));
            const SignatureParent sp = prepare_parent(parent.genome, HexapodConfig{});
            med[k] = median(f2_values(sample_signature(sp, 200, MutationConfig{}, seed, "medium", HexapodConfig{})));
        }
        wins += med[1] > med[0];
        per += (per.empty() ? "" : "; ") + std::string("seed ") + std::to_string(seed) + " direct " +
               fmt("%.3f", med[0]) + " supg " + fmt("%.3f", med[1]);
    }
    return {wins >= 4, std::to_string(wins) + "/5 SUPG > Direct (" + per + ")"};
}

Outcome intensity_monotonicity() {
    bool pass = true;
    std::string per;
    for (auto e : kEncodings) {
        const Individual& parent = signature_parent(desk_run(e, 1));
        const SignatureParent sp = prepare_parent(parent.genome, HexapodConfig{});
        if (!(sp.P > 0.0)) {
            pass = false;
            per += (per.empty() ? "" : "; ") + std::string(to_string(e)) + " parent does not walk";
            continue;
        }
        const IntensitySweep sw = intensity_sweep(sp, 200, MutationConfig{}, 1, HexapodConfig{});
        const double f2_low = median(f2_values(sw.low)), f2_high = median(f2_values(sw.high));
        const double f1_low = median(f1_values(sw.low)), f1_high = median(f1_values(sw.high));
        const bool ok = f2_high >= f2_low && f1_high <= f1_low;
        pass = pass && ok;
        per += (per.empty() ? "" : "; ") + std::string(to_string(e)) + (ok ? " ok" : " VIOLATED") + " f2 " +
               fmt("%.3f", f2_low) + "->" + fmt("%.3f", f2_high) + " f1 " + fmt("%.3f", f1_low) + "->" +
               fmt("%.3f", f1_high);
    }
    return {pass, per};
}

Outcome damage_semantics() {
    bool masked = true;
    std::size_t checked = 0;
    auto check_pop = [&](const std::array<bool, kLegs>& mask, const std::vector<Individual>& pop) {
        for (const auto& ind : pop)
            for (std::size_t l = 0; l < kLegs; ++l)
                if (mask[l]) {
                    masked = masked && ind.eval.gait.leg_contacts(l) == 0;
                    ++checked;
                }
    };

    const Individual& best = desk_run(Encoding::Supg, 7).best();
    for (const char* name : {"S1", "S2", "S3"}) {
        const DamageScenario sc = DamageScenario::named(name);
        HexapodConfig robot;
        robot.damage_mask = sc.mask();
        // Random genomes of every encoding on the damaged robot.
        Rng rng(stream_seed(3, name));
        std::vector<Genome> genomes;
        for (auto e : kEncodings)
            for (int i = 0; i < 10; ++i)
                genomes.push_back(random_genome(e, rng));
        std::vector<Individual> pop(genomes.size());
        const auto evals = evaluate_batch(genomes, robot);
        for (std::size_t i = 0; i < evals.size(); ++i)
            pop[i].eval = evals[i];
        check_pop(robot.damage_mask, pop);
        // Every surviving population of a short recovery run.
        EvolveHooks hooks;
        hooks.on_generation = [&](std::size_t, const std::vector<Individual>& p, const auto&) {
            check_pop(robot.damage_mask, p);
        };
        recovery_experiment(best, sc, desk(Encoding::Supg, 7, 5), HexapodConfig{}, {}, hooks);
    }

    EvolveHooks hooks;
    const auto s1 = DamageScenario::named("S1").mask();
    hooks.on_generation = [&](std::size_t, const std::vector<Individual>& p, const auto&) { check_pop(s1, p); };
    const RecoveryArtifacts r =
        recovery_experiment(best, DamageScenario::named("S1"), desk(Encoding::Supg, 7, 500), HexapodConfig{}, {}, hooks);
    const double start = r.curve.front().proportion_restored, end = r.curve.back().proportion_restored;
    return {masked && end > start, std::string("masked rows ") + (masked ? "all zero" : "NONZERO") + " (" +
                                       std::to_string(checked) + " leg rows checked); S1 restored " +
                                       fmt("%.3f", start) + " -> " + fmt("%.3f", end) + " over 500 generations"};
}

Outcome kde_correctness() {
    Rng rng(99);
    std::vector<double> xs, ys;
    const double mx = 0.5, my = -1.0, sx = 0.08, sy = 0.3;
    for (int i = 0; i < 10000; ++i) {
        xs.push_back(mx + gaussian(rng, sx));
        ys.push_back(my + gaussian(rng, sy));
    }
    const DensityGrid g = kde_grid(xs, ys, kSignatureWindow);
    const double peak = *std::max_element(g.density.begin(), g.density.end());
    const double truth = oracle::gaussian_pdf_2d(mx, my, mx, my, sx, sy);
    const double rel = std::abs(peak - truth) / truth;
    const double mass_err = std::abs(g.mass() - 1.0);
    return {mass_err <= 1e-6 && rel < 0.1,
            "mass error " + fmt("%.2e", mass_err) + ", mode density off by " + fmt("%.1f", 100 * rel) + "%"};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(EVOSIG_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv") {
            std::ifstream in(e.path(), std::ios::binary);
            std::stringstream s;
            s << in.rdbuf();
            out[fs::relative(e.path(), dir).string()] = s.str();
        }
    return out;
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("evosig_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path cfg = root / "config.json";
    std::ofstream(cfg) << R"({"preset": "desk-supg", "seed": 11, "evolution": {"generations": 60},
        "damage": {"generations": 20}})";

    const std::vector<std::pair<std::string, std::string>> variants{
        {"serial-a", "--threads 1"}, {"serial-b", "--threads 1"}, {"parallel", "--threads 4"}, {"default", ""}};
    std::vector<std::map<std::string, std::string>> outputs;
    bool ran = true;
    for (const auto& [name, threads] : variants) {
        const fs::path dir = root / name;
        ran = ran && run_cli(threads + " evolve -c " + cfg.string() + " -o " + dir.string()) == 0;
        ran = ran && run_cli(threads + " signature -r " + dir.string() + " --sweep") == 0;
        ran = ran && run_cli(threads + " damage -r " + dir.string()) == 0;
        outputs.push_back(csv_files(dir));
    }
    bool same = ran;
    std::size_t files = outputs.front().size();
    for (std::size_t k = 1; k < outputs.size(); ++k)
        same = same && outputs[k] == outputs.front();
    fs::remove_all(root);
    return {same && files >= 10, std::to_string(files) + " CSV files per run, " +
                                     (ran ? (same ? "byte-identical" : "DIFFER") : std::string("a command FAILED")) +
                                     " across two serial, one 4-thread and one default-pool run"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"NSGA-II fronts match brute-force oracle", nsga_oracle},
        {"CPG limit cycle and phase locking", cpg_limit_cycle},
        {"phase-bias loop closure", loop_closure},
        {"diversity metric properties", diversity_metric},
        {"desk-scale SUPG evolution improves", evolution_improves},
        {"SUPG mutants more diverse than Direct", signature_ordering},
        {"intensity monotonicity for every encoding", intensity_monotonicity},
        {"damage masks and S1 recovery", damage_semantics},
        {"KDE mass and analytic mode", kde_correctness},
        {"end-to-end determinism", determinism},
    };
    // Per-criterion wall-clock budgets in seconds; 0 = none.
    const std::array<double, 10> budget{5, 1, 1, 10, 0, 1800, 0, 0, 0, 0};

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget[i] > 0 && secs >= budget[i]) {
            o.pass = false;
            o.detail += "; over the " + fmt("%.0f", budget[i]) + " s budget";
        }
        failed += !o.pass;
        std::printf("%s %2zu %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}

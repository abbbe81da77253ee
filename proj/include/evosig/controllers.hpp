#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evosig/cpg.hpp"
#include "evosig/cppn.hpp"
#include "evosig/layout.hpp"

namespace evosig {

enum class Encoding { Direct, Cpg, CpgFeedback, Ann, Supg };

inline constexpr std::array<Encoding, 5> kEncodings{Encoding::Direct, Encoding::Cpg, Encoding::CpgFeedback,
                                                   Encoding::Ann, Encoding::Supg};

std::string_view to_string(Encoding e);
Encoding encoding_from_string(std::string_view name);

inline constexpr double kControlPeriod = 0.015;   // s
inline constexpr double kPseudoStep = 0.00375;    // s, ANN pseudo-position spacing
inline constexpr double kSupgPeriod = 1.0;        // s
inline constexpr double kSupgMaxOffset = 1.0;     // s
inline constexpr double kAnnWeightRange = 3.0;

struct JointCommand {
    std::array<double, kLegs> s1{};
    std::array<double, kLegs> s2{};

    static JointCommand from_actuators(std::span<const double> values);
    double actuator(std::size_t k) const;
    JointCommand clamped() const;
    friend bool operator==(const JointCommand&, const JointCommand&) = default;
};

/// What a controller may sense at a control tick: the current contact set and
/// the legs whose foot touched down since the previous tick.
struct SensorFrame {
    std::array<bool, kLegs> contact{};
    std::array<bool, kLegs> landed{};
};

class Controller {
public:
    virtual ~Controller() = default;
    virtual Encoding kind() const = 0;
    /// Called once per control tick with non-decreasing t.
    virtual JointCommand tick(const SensorFrame& sensors, double t) = 0;
    virtual bool failed() const { return false; }
    virtual nlohmann::json phenotype_json() const = 0;
};

// ---------------------------------------------------------------------------
// Oscillator-based controllers (Direct, CPG, CPG-f/b)

inline constexpr std::size_t kDirectGenes = kActuators + kFreeBiases;

struct DirectGenome {
    std::array<double, kDirectGenes> genes{};
    friend bool operator==(const DirectGenome&, const DirectGenome&) = default;
};

struct CpgPhenotype {
    std::array<double, kActuators> amplitudes{};
    std::array<double, kFreeBiases> free_biases{};
};

CpgPhenotype decode_direct_phenotype(const DirectGenome& genome);

/// 4-input (x_i, y_i, x_j, y_j), 1-output CPPN queried for amplitudes with
/// (x_i, y_i, 0, 0) and once per free edge for phase biases.
CpgPhenotype decode_cpg_phenotype(const CppnGenome& cppn);

class CpgController final : public Controller {
public:
    CpgController(Encoding kind, const CpgPhenotype& phenotype, bool feedback, AepConfig aep = {});

    Encoding kind() const override { return kind_; }
    JointCommand tick(const SensorFrame& sensors, double t) override;
    bool failed() const override { return network_.failed(); }
    nlohmann::json phenotype_json() const override;

    const OscillatorNetwork& network() const { return network_; }
    const CpgPhenotype& phenotype() const { return phenotype_; }

private:
    Encoding kind_;
    CpgPhenotype phenotype_;
    OscillatorNetwork network_;
    bool feedback_;
    AepConfig aep_;
    std::optional<double> last_t_;
};

std::unique_ptr<CpgController> decode_direct(const DirectGenome& genome);
std::unique_ptr<CpgController> decode_cpg(const CppnGenome& cppn);
std::unique_ptr<CpgController> decode_cpg_fb(const CppnGenome& cppn);

// ---------------------------------------------------------------------------
// CPPN -> ANN (minimal HyperNEAT)

inline constexpr std::size_t kAnnInputs = kActuators + 2;
inline constexpr std::size_t kAnnHidden = 12;
inline constexpr std::size_t kAnnOutputs = kActuators;

struct NeuronPosition {
    double x;
    double y;
};

/// Input grid: the 12 actuator positions, then sine at (0, +0.5) and cosine at (0, -0.5).
std::array<NeuronPosition, kAnnInputs> ann_input_grid();
/// Hidden grid: actuator rows pulled inward (|x| 0.5 -> 0.25, 1.0 -> 0.75).
std::array<NeuronPosition, kAnnHidden> ann_hidden_grid();
/// Output grid: the 12 actuator positions.
std::array<NeuronPosition, kAnnOutputs> ann_output_grid();

struct AnnPhenotype {
    // Row-major [target][source].
    std::vector<double> input_hidden = std::vector<double>(kAnnHidden * kAnnInputs, 0.0);
    std::vector<double> hidden_output = std::vector<double>(kAnnOutputs * kAnnHidden, 0.0);
    std::size_t queries = 0;

    std::array<double, kAnnOutputs> forward(std::span<const double, kAnnInputs> inputs) const;
};

/// 5-input (x1, y1, x2, y2, bias=1), 1-output CPPN; weight = output * weight_range.
AnnPhenotype decode_ann_phenotype(const CppnGenome& cppn, double weight_range = kAnnWeightRange);

/// Averages the network response over the four pseudo-times t, t+3.75 ms,
/// t+7.5 ms and t+11.25 ms. `net` maps 14 inputs to 12 outputs in [-1, 1].
template <class Network>
std::array<double, kAnnOutputs> average_pseudo_outputs(const std::array<double, kActuators>& previous_normalized,
                                                       double t, Network&& net) {
    std::array<double, kAnnOutputs> sum{};
    std::array<double, kAnnInputs> in{};
    for (std::size_t k = 0; k < kActuators; ++k)
        in[k] = previous_normalized[k];
    for (int p = 0; p < 4; ++p) {
        const double tp = t + p * kPseudoStep;
        in[kActuators] = std::sin(2.0 * std::numbers::pi * tp);
        in[kActuators + 1] = std::cos(2.0 * std::numbers::pi * tp);
        const std::array<double, kAnnOutputs> out = net(std::span<const double, kAnnInputs>(in));
        for (std::size_t k = 0; k < kAnnOutputs; ++k)
            sum[k] += out[k];
    }
    for (auto& v : sum)
        v /= 4.0;
    return sum;
}

class AnnController final : public Controller {
public:
    explicit AnnController(AnnPhenotype phenotype) : phenotype_(std::move(phenotype)) {}

    Encoding kind() const override { return Encoding::Ann; }
    JointCommand tick(const SensorFrame& sensors, double t) override;
    nlohmann::json phenotype_json() const override;

    const AnnPhenotype& phenotype() const { return phenotype_; }
    const JointCommand& previous() const { return previous_; }

private:
    AnnPhenotype phenotype_;
    JointCommand previous_{};
};

std::unique_ptr<AnnController> decode_ann(const CppnGenome& cppn);

// ---------------------------------------------------------------------------
// SUPG

/// Per-leg trigger timers shared by the leg's s1 and s2 SUPGs.
class SupgTimers {
public:
    explicit SupgTimers(const std::array<double, kLegs>& offsets, double period = kSupgPeriod)
        : offsets_(offsets), period_(period) {}

    /// Applies first triggers due at t and re-triggers on landings.
    void update(const std::array<bool, kLegs>& landed, double t);
    bool triggered(std::size_t leg) const { return trigger_time_[leg].has_value(); }
    /// Timer in [0, 1]; only meaningful once triggered.
    double value(std::size_t leg, double t) const;

private:
    std::array<double, kLegs> offsets_;
    double period_;
    std::array<std::optional<double>, kLegs> trigger_time_{};
};

class SupgController final : public Controller {
public:
    /// 3-input (x, y, time), 2-output (signal, offset) CPPN.
    explicit SupgController(CppnGenome cppn);

    Encoding kind() const override { return Encoding::Supg; }
    JointCommand tick(const SensorFrame& sensors, double t) override;
    nlohmann::json phenotype_json() const override;

    const std::array<double, kLegs>& offsets() const { return offsets_; }
    const SupgTimers& timers() const { return timers_; }

private:
    CppnGenome cppn_;
    std::array<double, kLegs> offsets_{};
    SupgTimers timers_;
    std::vector<double> scratch_;
};

std::array<double, kLegs> decode_supg_offsets(const CppnGenome& cppn);
std::unique_ptr<SupgController> decode_supg(const CppnGenome& cppn);

/// CPPN input/output counts used by each generative encoding.
struct CppnShape {
    int inputs;
    int outputs;
};
CppnShape cppn_shape(Encoding e);

} // namespace evosig

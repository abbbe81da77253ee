#include "evosig/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace evosig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::array<double, kActuators> normalized(const JointCommand& cmd) {
    std::array<double, kActuators> out{};
    for (std::size_t k = 0; k < kActuators; ++k)
        out[k] = cmd.actuator(k) / actuator_range(k);
    return out;
}

void require_shape(const CppnGenome& cppn, Encoding e) {
    const CppnShape shape = cppn_shape(e);
    if (cppn.input_count() != shape.inputs || cppn.output_count() != shape.outputs)
        throw std::invalid_argument("CPPN shape does not match the " + std::string(to_string(e)) +
                                    " encoding");
}

} // namespace

std::string_view to_string(Encoding e) {
    switch (e) {
    case Encoding::Direct:
        return "direct";
    case Encoding::Cpg:
        return "cpg";
    case Encoding::CpgFeedback:
        return "cpg-fb";
    case Encoding::Ann:
        return "ann";
    case Encoding::Supg:
        return "supg";
    }
    return "?";
}

Encoding encoding_from_string(std::string_view name) {
    for (auto e : kEncodings)
        if (to_string(e) == name)
            return e;
    throw std::invalid_argument("unknown encoding '" + std::string(name) + "'");
}

CppnShape cppn_shape(Encoding e) {
    switch (e) {
    case Encoding::Cpg:
    case Encoding::CpgFeedback:
        return {4, 1};
    case Encoding::Ann:
        return {5, 1};
    case Encoding::Supg:
        return {3, 2};
    case Encoding::Direct:
        break;
    }
    throw std::invalid_argument("the direct encoding has no CPPN");
}

JointCommand JointCommand::from_actuators(std::span<const double> values) {
    if (values.size() != kActuators)
        throw std::invalid_argument("expected 12 actuator values");
    JointCommand cmd;
    for (std::size_t k = 0; k < kActuators; ++k) {
        const auto& info = kActuatorTable[k];
        (info.servo == Servo::S1 ? cmd.s1 : cmd.s2)[info.leg] = values[k];
    }
    return cmd;
}

double JointCommand::actuator(std::size_t k) const {
    const auto& info = kActuatorTable[k];
    return (info.servo == Servo::S1 ? s1 : s2)[info.leg];
}

JointCommand JointCommand::clamped() const {
    JointCommand c = *this;
    for (std::size_t l = 0; l < kLegs; ++l) {
        c.s1[l] = std::clamp(c.s1[l], -kS1Range, kS1Range);
        c.s2[l] = std::clamp(c.s2[l], -kS2Range, kS2Range);
    }
    return c;
}

// --- oscillator controllers -------------------------------------------------

CpgPhenotype decode_direct_phenotype(const DirectGenome& genome) {
    // Largest double below 2*pi: a gene of 1 must not wrap to 0.
    static const double kBiasTop = std::nextafter(kTwoPi, 0.0);
    CpgPhenotype p;
    for (std::size_t k = 0; k < kActuators; ++k)
        p.amplitudes[k] = std::clamp(genome.genes[k], 0.0, 1.0) * actuator_range(k);
    for (std::size_t e = 0; e < kFreeBiases; ++e)
        p.free_biases[e] = std::min(std::clamp(genome.genes[kActuators + e], 0.0, 1.0) * kTwoPi, kBiasTop);
    return p;
}

CpgPhenotype decode_cpg_phenotype(const CppnGenome& cppn) {
    if (cppn.input_count() != 4 || cppn.output_count() != 1)
        throw std::invalid_argument("CPG decoding needs a 4-input, 1-output CPPN");
    CpgPhenotype p;
    std::vector<double> scratch;
    std::array<double, 1> out{};
    for (std::size_t k = 0; k < kActuators; ++k) {
        const auto& a = kActuatorTable[k];
        const std::array<double, 4> in{a.x, a.y, 0.0, 0.0};
        cppn.evaluate(in, out, scratch);
        p.amplitudes[k] = (out[0] + 1.0) / 2.0 * actuator_range(k);
    }
    for (std::size_t e = 0; e < kFreeBiases; ++e) {
        const auto& src = kActuatorTable[kFreeEdges[e].a];
        const auto& dst = kActuatorTable[kFreeEdges[e].b];
        const std::array<double, 4> in{src.x, src.y, dst.x, dst.y};
        cppn.evaluate(in, out, scratch);
        p.free_biases[e] = (out[0] + 1.0) * std::numbers::pi;
    }
    return p;
}

namespace {

OscillatorParams params_of(const CpgPhenotype& p) {
    OscillatorParams params;
    params.amplitudes.assign(p.amplitudes.begin(), p.amplitudes.end());
    return params;
}

} // namespace

CpgController::CpgController(Encoding kind, const CpgPhenotype& phenotype, bool feedback, AepConfig aep)
    : kind_(kind), phenotype_(phenotype),
      network_(params_of(phenotype), complete_loop_biases(phenotype.free_biases)), feedback_(feedback),
      aep_(aep) {}

JointCommand CpgController::tick(const SensorFrame& sensors, double t) {
    if (last_t_)
        network_.advance(t - *last_t_);
    last_t_ = t;
    if (feedback_)
        network_.reset_phases(sensors.landed, aep_);
    if (network_.failed())
        return {};
    return JointCommand::from_actuators(network_.outputs());
}

nlohmann::json CpgController::phenotype_json() const {
    nlohmann::json j;
    j["kind"] = std::string(to_string(kind_));
    j["feedback"] = feedback_;
    j["amplitudes"] = phenotype_.amplitudes;
    j["free_biases"] = phenotype_.free_biases;
    std::vector<double> derived;
    for (const auto& e : kDerivedEdges)
        derived.push_back(network_.graph().phase_bias(e.a, e.b));
    j["derived_biases"] = derived;
    if (feedback_)
        j["theta_aep"] = aep_.theta_aep();
    return j;
}

std::unique_ptr<CpgController> decode_direct(const DirectGenome& genome) {
    return std::make_unique<CpgController>(Encoding::Direct, decode_direct_phenotype(genome), false);
}

std::unique_ptr<CpgController> decode_cpg(const CppnGenome& cppn) {
    return std::make_unique<CpgController>(Encoding::Cpg, decode_cpg_phenotype(cppn), false);
}

std::unique_ptr<CpgController> decode_cpg_fb(const CppnGenome& cppn) {
    return std::make_unique<CpgController>(Encoding::CpgFeedback, decode_cpg_phenotype(cppn), true);
}

// --- ANN ---------------------------------------------------------------------

std::array<NeuronPosition, kAnnInputs> ann_input_grid() {
    std::array<NeuronPosition, kAnnInputs> g{};
    for (std::size_t k = 0; k < kActuators; ++k)
        g[k] = {kActuatorTable[k].x, kActuatorTable[k].y};
    g[kActuators] = {0.0, 0.5};
    g[kActuators + 1] = {0.0, -0.5};
    return g;
}

std::array<NeuronPosition, kAnnHidden> ann_hidden_grid() {
    std::array<NeuronPosition, kAnnHidden> g{};
    for (std::size_t k = 0; k < kAnnHidden; ++k) {
        const double x = kActuatorTable[k].x;
        g[k] = {x - std::copysign(0.25, x), kActuatorTable[k].y};
    }
    return g;
}

std::array<NeuronPosition, kAnnOutputs> ann_output_grid() {
    std::array<NeuronPosition, kAnnOutputs> g{};
    for (std::size_t k = 0; k < kActuators; ++k)
        g[k] = {kActuatorTable[k].x, kActuatorTable[k].y};
    return g;
}

AnnPhenotype decode_ann_phenotype(const CppnGenome& cppn, double weight_range) {
    if (cppn.input_count() != 5 || cppn.output_count() != 1)
        throw std::invalid_argument("ANN decoding needs a 5-input, 1-output CPPN");
    AnnPhenotype p;
    std::vector<double> scratch;
    std::array<double, 1> out{};
    const auto in_grid = ann_input_grid();
    const auto hid_grid = ann_hidden_grid();
    const auto out_grid = ann_output_grid();
    for (std::size_t h = 0; h < kAnnHidden; ++h)
        for (std::size_t i = 0; i < kAnnInputs; ++i) {
            const std::array<double, 5> q{in_grid[i].x, in_grid[i].y, hid_grid[h].x, hid_grid[h].y, 1.0};
            cppn.evaluate(q, out, scratch);
            p.input_hidden[h * kAnnInputs + i] = out[0] * weight_range;
            ++p.queries;
        }
    for (std::size_t o = 0; o < kAnnOutputs; ++o)
        for (std::size_t h = 0; h < kAnnHidden; ++h) {
            const std::array<double, 5> q{hid_grid[h].x, hid_grid[h].y, out_grid[o].x, out_grid[o].y, 1.0};
            cppn.evaluate(q, out, scratch);
            p.hidden_output[o * kAnnHidden + h] = out[0] * weight_range;
            ++p.queries;
        }
    return p;
}

std::array<double, kAnnOutputs> AnnPhenotype::forward(std::span<const double, kAnnInputs> inputs) const {
    std::array<double, kAnnHidden> hidden{};
    for (std::size_t h = 0; h < kAnnHidden; ++h) {
        double s = 0.0;
        for (std::size_t i = 0; i < kAnnInputs; ++i)
            s += input_hidden[h * kAnnInputs + i] * inputs[i];
        hidden[h] = activate(ActivationKind::Sigmoid, s);
    }
    std::array<double, kAnnOutputs> out{};
    for (std::size_t o = 0; o < kAnnOutputs; ++o) {
        double s = 0.0;
        for (std::size_t h = 0; h < kAnnHidden; ++h)
            s += hidden_output[o * kAnnHidden + h] * hidden[h];
        out[o] = activate(ActivationKind::Sigmoid, s);
    }
    return out;
}

JointCommand AnnController::tick(const SensorFrame&, double t) {
    const auto avg = average_pseudo_outputs(normalized(previous_), t, [this](std::span<const double, kAnnInputs> in) {
        return phenotype_.forward(in);
    });
    std::array<double, kActuators> angles{};
    for (std::size_t k = 0; k < kActuators; ++k)
        angles[k] = avg[k] * actuator_range(k);
    previous_ = JointCommand::from_actuators(angles).clamped();
    return previous_;
}

nlohmann::json AnnController::phenotype_json() const {
    nlohmann::json j;
    j["kind"] = "ann";
    j["inputs"] = kAnnInputs;
    j["hidden"] = kAnnHidden;
    j["outputs"] = kAnnOutputs;
    j["input_hidden"] = phenotype_.input_hidden;
    j["hidden_output"] = phenotype_.hidden_output;
    return j;
}

std::unique_ptr<AnnController> decode_ann(const CppnGenome& cppn) {
    return std::make_unique<AnnController>(decode_ann_phenotype(cppn));
}

// --- SUPG --------------------------------------------------------------------

void SupgTimers::update(const std::array<bool, kLegs>& landed, double t) {
    for (std::size_t leg = 0; leg < kLegs; ++leg) {
        if (!trigger_time_[leg]) {
            if (t + 1e-12 >= offsets_[leg])
                trigger_time_[leg] = offsets_[leg];
        } else if (landed[leg]) {
            trigger_time_[leg] = t;
        }
    }
}

double SupgTimers::value(std::size_t leg, double t) const {
    if (!trigger_time_[leg])
        return 0.0;
    return std::clamp((t - *trigger_time_[leg]) / period_, 0.0, 1.0);
}

std::array<double, kLegs> decode_supg_offsets(const CppnGenome& cppn) {
    require_shape(cppn, Encoding::Supg);
    std::array<double, kLegs> offsets{};
    std::vector<double> scratch;
    std::array<double, 2> out{};
    for (std::size_t leg = 0; leg < kLegs; ++leg) {
        const auto& a = kActuatorTable[kLegS1[leg]];
        const std::array<double, 3> in{a.x, a.y, 0.0};
        cppn.evaluate(in, out, scratch);
        offsets[leg] = (out[1] + 1.0) / 2.0 * kSupgMaxOffset;
    }
    return offsets;
}

SupgController::SupgController(CppnGenome cppn)
    : cppn_(std::move(cppn)), offsets_(decode_supg_offsets(cppn_)), timers_(offsets_) {}

JointCommand SupgController::tick(const SensorFrame& sensors, double t) {
    timers_.update(sensors.landed, t);
    std::array<double, kActuators> angles{};
    std::array<double, 2> out{};
    for (std::size_t k = 0; k < kActuators; ++k) {
        const auto& a = kActuatorTable[k];
        if (!timers_.triggered(a.leg))
            continue;
        const std::array<double, 3> in{a.x, a.y, timers_.value(a.leg, t)};
        cppn_.evaluate(in, out, scratch_);
        angles[k] = out[0] * actuator_range(k);
    }
    return JointCommand::from_actuators(angles).clamped();
}

nlohmann::json SupgController::phenotype_json() const {
    nlohmann::json j;
    j["kind"] = "supg";
    j["period"] = kSupgPeriod;
    j["offsets"] = offsets_;
    return j;
}

std::unique_ptr<SupgController> decode_supg(const CppnGenome& cppn) {
    return std::make_unique<SupgController>(cppn);
}

} // namespace evosig

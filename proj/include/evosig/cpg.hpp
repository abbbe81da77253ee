#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include "evosig/layout.hpp"

namespace evosig {

inline constexpr std::size_t kOscillators = 12;
inline constexpr std::size_t kFreeBiases = 11;
inline constexpr std::size_t kCouplingEdges = 17;

inline constexpr double kIntrinsicFrequency = 1.0; // Hz
inline constexpr double kAmplitudeGain = 10.0;     // rad/s
inline constexpr double kCouplingWeight = 20.0;
inline constexpr double kEulerSubstep = 0.005;     // s; divides the 15 ms control tick
inline constexpr double kBlowUpLimit = 1e6;

/// An undirected adjacency between two oscillators (0-based indices). For free
/// edges `a < b`; for derived edges (a, b) is the direction in which the bias
/// is computed.
struct OscillatorEdge {
    std::size_t a;
    std::size_t b;
};

/// The eleven free edges, in gene / CPPN-query order. They form a spanning tree.
inline constexpr std::array<OscillatorEdge, kFreeBiases> kFreeEdges{{
    {0, 3}, {1, 4}, {2, 5}, {6, 9}, {7, 10}, {8, 11}, // s2-s1 pair of each leg
    {3, 4}, {4, 5}, {6, 7}, {7, 8},                   // s1 chains
    {4, 7},                                           // middle rung
}};

/// The six loop-closing edges: phi(2,1), phi(2,3), phi(7,4), phi(9,6),
/// phi(10,11), phi(12,11) in 1-based numbering.
inline constexpr std::array<OscillatorEdge, 6> kDerivedEdges{{
    {1, 0}, {1, 2}, {6, 3}, {8, 5}, {9, 10}, {11, 10},
}};

/// Antisymmetric phase biases over an arbitrary oscillator count. The
/// hexapod graph is built with complete_loop_biases().
class CouplingGraph {
public:
    explicit CouplingGraph(std::size_t oscillators);

    std::size_t size() const { return n_; }

    /// Sets phi(i, j) = bias and phi(j, i) = -bias.
    void couple(std::size_t i, std::size_t j, double bias, double weight = kCouplingWeight);

    bool adjacent(std::size_t i, std::size_t j) const { return weight_[i * n_ + j] != 0.0; }
    double weight(std::size_t i, std::size_t j) const { return weight_[i * n_ + j]; }
    /// Throws std::out_of_range when i and j are not coupled.
    double phase_bias(std::size_t i, std::size_t j) const;
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }
    std::size_t edge_count() const;

private:
    std::size_t n_;
    std::vector<double> phi_;
    std::vector<double> weight_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

/// Fills the 17-edge hexapod coupling from the 11 free biases (kFreeEdges
/// order); each derived bias is chosen so its loop sums to 0 mod 2*pi, and is
/// reported in [0, 2*pi).
CouplingGraph complete_loop_biases(std::span<const double> free_biases);

/// The free biases a graph was built from, recovered in kFreeEdges order.
std::array<double, kFreeBiases> free_biases_of(const CouplingGraph& graph);

struct OscillatorParams {
    std::vector<double> amplitudes; // A_i, radians
    double frequency = kIntrinsicFrequency;
    double gain = kAmplitudeGain;
};

struct OscillatorState {
    std::vector<double> theta;
    std::vector<double> alpha;
    std::vector<double> alpha_dot;

    static OscillatorState zero(std::size_t n) {
        return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    }
    bool within(double limit) const;
};

/// One explicit Euler step of the amplitude-controlled phase oscillators.
OscillatorState step(const OscillatorState& state, const OscillatorParams& params,
                     const CouplingGraph& graph, double dt);

/// gamma_i = alpha_i cos(theta_i)
std::vector<double> oscillator_outputs(const OscillatorState& state);

struct AepConfig {
    double duty_ratio = 0.5;
    double theta_aep() const { return 2.0 * std::numbers::pi * (1.0 - duty_ratio); }
};

/// Sets theta := theta_AEP on the s1 oscillator of every landed leg.
OscillatorState phase_reset(const OscillatorState& state, const std::array<bool, kLegs>& landed,
                            const AepConfig& aep = {});

/// Rising edges of a per-leg contact signal.
class ContactEdges {
public:
    explicit ContactEdges(const std::array<bool, kLegs>& initial = {}) : previous_(initial) {}
    std::array<bool, kLegs> update(const std::array<bool, kLegs>& contact);

private:
    std::array<bool, kLegs> previous_;
};

struct TraceRow {
    double t;
    OscillatorState state;
};

/// CSV with columns t, theta_1..n, alpha_1..n, gamma_1..n.
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);

/// A running oscillator network integrated with fixed Euler substeps.
class OscillatorNetwork {
public:
    OscillatorNetwork(OscillatorParams params, CouplingGraph graph,
                      double substep = kEulerSubstep);

    const OscillatorState& state() const { return state_; }
    const OscillatorParams& params() const { return params_; }
    const CouplingGraph& graph() const { return graph_; }
    bool failed() const { return failed_; }

    /// Integrates for `duration` seconds (rounded to whole substeps).
    void advance(double duration);
    void reset_phases(const std::array<bool, kLegs>& landed, const AepConfig& aep);
    std::vector<double> outputs() const { return oscillator_outputs(state_); }

private:
    OscillatorParams params_;
    CouplingGraph graph_;
    OscillatorState state_;
    double substep_;
    bool failed_ = false;
};

} // namespace evosig

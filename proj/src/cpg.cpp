#include "evosig/cpg.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace evosig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    return r >= kTwoPi ? 0.0 : r;
}

} // namespace

CouplingGraph::CouplingGraph(std::size_t oscillators)
    : n_(oscillators), phi_(oscillators * oscillators, 0.0), weight_(oscillators * oscillators, 0.0),
      neighbors_(oscillators) {}

void CouplingGraph::couple(std::size_t i, std::size_t j, double bias, double weight) {
    if (i >= n_ || j >= n_ || i == j)
        throw std::invalid_argument("invalid oscillator pair");
    if (!(weight > 0.0))
        throw std::invalid_argument("coupling weight must be positive");
    if (!adjacent(i, j)) {
        neighbors_[i].push_back(j);
        neighbors_[j].push_back(i);
    }
    phi_[i * n_ + j] = bias;
    phi_[j * n_ + i] = -bias;
    weight_[i * n_ + j] = weight;
    weight_[j * n_ + i] = weight;
}

double CouplingGraph::phase_bias(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_ || !adjacent(i, j))
        throw std::out_of_range("oscillators are not coupled");
    return phi_[i * n_ + j];
}

std::size_t CouplingGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nb : neighbors_)
        twice += nb.size();
    return twice / 2;
}

CouplingGraph complete_loop_biases(std::span<const double> free_biases) {
    if (free_biases.size() != kFreeBiases)
        throw std::invalid_argument("expected 11 free phase biases");
    for (double b : free_biases)
        if (!std::isfinite(b))
            throw std::invalid_argument("phase bias is not finite");

    CouplingGraph graph(kOscillators);
    for (std::size_t e = 0; e < kFreeBiases; ++e)
        graph.couple(kFreeEdges[e].a, kFreeEdges[e].b, free_biases[e]);

    // Phase potentials along the spanning tree: psi_b = psi_a + phi(a, b).
    std::array<double, kOscillators> psi{};
    std::array<bool, kOscillators> seen{};
    std::queue<std::size_t> queue;
    queue.push(0);
    seen[0] = true;
    while (!queue.empty()) {
        std::size_t a = queue.front();
        queue.pop();
        for (std::size_t b : graph.neighbors(a)) {
            if (seen[b])
                continue;
            seen[b] = true;
            psi[b] = psi[a] + graph.phase_bias(a, b);
            queue.push(b);
        }
    }

    for (const auto& e : kDerivedEdges)
        graph.couple(e.a, e.b, wrap_2pi(psi[e.b] - psi[e.a]));
    return graph;
}

std::array<double, kFreeBiases> free_biases_of(const CouplingGraph& graph) {
    std::array<double, kFreeBiases> out{};
    for (std::size_t e = 0; e < kFreeBiases; ++e)
        out[e] = graph.phase_bias(kFreeEdges[e].a, kFreeEdges[e].b);
    return out;
}

bool OscillatorState::within(double limit) const {
    for (const auto* v : {&theta, &alpha, &alpha_dot})
        for (double x : *v)
            if (!std::isfinite(x) || std::abs(x) > limit)
                return false;
    return true;
}

OscillatorState step(const OscillatorState& state, const OscillatorParams& params,
                     const CouplingGraph& graph, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("integration step must be positive");
    const std::size_t n = graph.size();
    if (state.theta.size() != n || state.alpha.size() != n || state.alpha_dot.size() != n ||
        params.amplitudes.size() != n)
        throw std::invalid_argument("oscillator state size mismatch");

    OscillatorState next = state;
    const double b = params.gain;
    for (std::size_t i = 0; i < n; ++i) {
        double theta_dot = 2.0 * std::numbers::pi * params.frequency;
        for (std::size_t j : graph.neighbors(i))
            theta_dot += state.alpha[j] * graph.weight(i, j) *
                         std::sin(state.theta[j] - state.theta[i] - graph.phase_bias(i, j));
        const double alpha_ddot =
            b * (b / 4.0 * (params.amplitudes[i] - state.alpha[i]) - state.alpha_dot[i]);
        next.theta[i] = state.theta[i] + dt * theta_dot;
        next.alpha[i] = state.alpha[i] + dt * state.alpha_dot[i];
        next.alpha_dot[i] = state.alpha_dot[i] + dt * alpha_ddot;
    }
    return next;
}

std::vector<double> oscillator_outputs(const OscillatorState& state) {
    std::vector<double> gamma(state.theta.size());
    for (std::size_t i = 0; i < gamma.size(); ++i)
        gamma[i] = state.alpha[i] * std::cos(state.theta[i]);
    return gamma;
}

OscillatorState phase_reset(const OscillatorState& state, const std::array<bool, kLegs>& landed,
                            const AepConfig& aep) {
    if (!(aep.duty_ratio > 0.0 && aep.duty_ratio < 1.0))
        throw std::invalid_argument("duty ratio must lie in (0, 1)");
    if (state.theta.size() != kOscillators)
        throw std::invalid_argument("phase reset applies to the 12-oscillator hexapod network");
    OscillatorState next = state;
    for (std::size_t leg = 0; leg < kLegs; ++leg)
        if (landed[leg])
            next.theta[kLegS1[leg]] = aep.theta_aep();
    return next;
}

std::array<bool, kLegs> ContactEdges::update(const std::array<bool, kLegs>& contact) {
    std::array<bool, kLegs> rising{};
    for (std::size_t l = 0; l < kLegs; ++l)
        rising[l] = contact[l] && !previous_[l];
    previous_ = contact;
    return rising;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
    const std::size_t n = rows.empty() ? kOscillators : rows.front().state.theta.size();
    out << "t";
    for (const char* name : {"theta", "alpha", "gamma"})
        for (std::size_t i = 1; i <= n; ++i)
            out << ',' << name << '_' << i;
    out << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << ',' << buf;
    };
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", row.t);
        out << buf;
        for (double v : row.state.theta)
            put(v);
        for (double v : row.state.alpha)
            put(v);
        for (double v : oscillator_outputs(row.state))
            put(v);
        out << '\n';
    }
}

OscillatorNetwork::OscillatorNetwork(OscillatorParams params, CouplingGraph graph, double substep)
    : params_(std::move(params)), graph_(std::move(graph)), state_(OscillatorState::zero(graph_.size())),
      substep_(substep) {
    if (params_.amplitudes.size() != graph_.size())
        throw std::invalid_argument("amplitude count does not match the coupling graph");
    if (!(substep_ > 0.0))
        throw std::invalid_argument("substep must be positive");
}

void OscillatorNetwork::advance(double duration) {
    if (failed_)
        return;
    const auto steps = static_cast<long>(std::llround(duration / substep_));
    for (long s = 0; s < steps; ++s) {
        state_ = step(state_, params_, graph_, substep_);
        if (!state_.within(kBlowUpLimit)) {
            failed_ = true;
            return;
        }
    }
}

void OscillatorNetwork::reset_phases(const std::array<bool, kLegs>& landed, const AepConfig& aep) {
    if (!failed_)
        state_ = phase_reset(state_, landed, aep);
}

} // namespace evosig

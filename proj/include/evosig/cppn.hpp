#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "evosig/rng.hpp"

namespace evosig {

enum class ActivationKind { Sine, Gaussian, Sigmoid, Linear };

inline constexpr std::array<ActivationKind, 4> kActivationKinds{
    ActivationKind::Sine, ActivationKind::Gaussian, ActivationKind::Sigmoid, ActivationKind::Linear};

/// sine(x) = sin(pi x), gaussian(x) = exp(-x^2), sigmoid(x) = 2/(1+e^-x) - 1,
/// linear(x) = x. Linear is clamped to [-1, 1] only at output nodes.
double activate(ActivationKind kind, double x);

std::string_view to_string(ActivationKind kind);
ActivationKind activation_from_string(std::string_view name);

struct CppnNode {
    int id;
    ActivationKind kind;
    friend bool operator==(const CppnNode&, const CppnNode&) = default;
};

struct CppnConnection {
    int source;
    int target;
    double weight;
    friend bool operator==(const CppnConnection&, const CppnConnection&) = default;
};

struct MutationConfig {
    double weight_mutation_rate = 0.1;
    double weight_step_sigma = 0.5;
    double node_add_rate = 0.05;
    double node_remove_rate = 0.05;
    double node_type_change_rate = 0.05;
    double connection_add_rate = 0.05;
    double connection_remove_rate = 0.05;
    // Per-gene Gaussian step for the 23-gene direct genome (genes live in [0,1]).
    double gene_step_sigma = 0.1;
    double intensity_multiplier = 1.0;

    /// rate * intensity, clamped to [0, 1]
    double effective_rate(double rate) const;
    double effective_sigma(double sigma) const { return sigma * intensity_multiplier; }

    MutationConfig with_intensity(double multiplier) const {
        MutationConfig c = *this;
        c.intensity_multiplier = multiplier;
        return c;
    }

    void validate() const;
};

/// Feedforward CPPN. Node list layout is positional: the first input_count
/// nodes are inputs (pass-through), the next output_count are outputs, the
/// rest are hidden. The graph is checked for cycles and dangling references at
/// construction, so every constructed genome can be evaluated.
class CppnGenome {
public:
    CppnGenome(int input_count, int output_count, std::vector<CppnNode> nodes,
               std::vector<CppnConnection> connections);

    int input_count() const { return input_count_; }
    int output_count() const { return output_count_; }
    const std::vector<CppnNode>& nodes() const { return nodes_; }
    const std::vector<CppnConnection>& connections() const { return connections_; }
    std::size_t hidden_count() const { return nodes_.size() - input_count_ - output_count_; }

    bool is_input_index(std::size_t idx) const { return idx < static_cast<std::size_t>(input_count_); }
    bool is_output_index(std::size_t idx) const {
        return idx >= static_cast<std::size_t>(input_count_) &&
               idx < static_cast<std::size_t>(input_count_ + output_count_);
    }

    /// Throws std::invalid_argument on a length mismatch or non-finite input.
    std::vector<double> evaluate(std::span<const double> inputs) const;

    /// Allocation-free variant; `scratch` is resized as needed.
    void evaluate(std::span<const double> inputs, std::span<double> outputs,
                  std::vector<double>& scratch) const;

    std::size_t index_of(int id) const;

    friend bool operator==(const CppnGenome& a, const CppnGenome& b) {
        return a.input_count_ == b.input_count_ && a.output_count_ == b.output_count_ &&
               a.nodes_ == b.nodes_ && a.connections_ == b.connections_;
    }

private:
    struct Incoming {
        std::size_t source;
        double weight;
    };

    void compile();

    int input_count_;
    int output_count_;
    std::vector<CppnNode> nodes_;
    std::vector<CppnConnection> connections_;

    std::vector<std::size_t> order_;              // non-input node indices, topological
    std::vector<std::size_t> incoming_offset_;    // CSR layout, size nodes+1
    std::vector<Incoming> incoming_;
};

/// Inputs fully connected to outputs, weights U[-1,1], output kinds uniform.
CppnGenome random_cppn(Rng& rng, int input_count, int output_count);

CppnGenome mutate(const CppnGenome& genome, const MutationConfig& config, Rng& rng);

} // namespace evosig

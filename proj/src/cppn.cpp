#include "evosig/cppn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace evosig {

double activate(ActivationKind kind, double x) {
    switch (kind) {
    case ActivationKind::Sine:
        return std::sin(std::numbers::pi * x);
    case ActivationKind::Gaussian:
        return std::exp(-x * x);
    case ActivationKind::Sigmoid:
        return 2.0 / (1.0 + std::exp(-x)) - 1.0;
    case ActivationKind::Linear:
        return x;
    }
    return 0.0;
}

std::string_view to_string(ActivationKind kind) {
    switch (kind) {
    case ActivationKind::Sine:
        return "sine";
    case ActivationKind::Gaussian:
        return "gaussian";
    case ActivationKind::Sigmoid:
        return "sigmoid";
    case ActivationKind::Linear:
        return "linear";
    }
    return "?";
}

ActivationKind activation_from_string(std::string_view name) {
    for (auto k : kActivationKinds)
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown activation kind '" + std::string(name) + "'");
}

double MutationConfig::effective_rate(double rate) const {
    return std::clamp(rate * intensity_multiplier, 0.0, 1.0);
}

void MutationConfig::validate() const {
    for (double r : {weight_mutation_rate, node_add_rate, node_remove_rate, node_type_change_rate,
                     connection_add_rate, connection_remove_rate}) {
        if (!(r >= 0.0 && r <= 1.0))
            throw std::invalid_argument("mutation rates must lie in [0, 1]");
    }
    if (!(weight_step_sigma > 0.0) || !(gene_step_sigma > 0.0))
        throw std::invalid_argument("mutation step sizes must be > 0");
    if (!(intensity_multiplier >= 0.0) || !std::isfinite(intensity_multiplier))
        throw std::invalid_argument("intensity multiplier must be finite and >= 0");
}

CppnGenome::CppnGenome(int input_count, int output_count, std::vector<CppnNode> nodes,
                       std::vector<CppnConnection> connections)
    : input_count_(input_count), output_count_(output_count), nodes_(std::move(nodes)),
      connections_(std::move(connections)) {
    if (input_count < 1 || output_count < 1)
        throw std::invalid_argument("CPPN needs at least one input and one output");
    if (nodes_.size() < static_cast<std::size_t>(input_count + output_count))
        throw std::invalid_argument("CPPN node list shorter than inputs + outputs");
    compile();
}

std::size_t CppnGenome::index_of(int id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].id == id)
            return i;
    throw std::invalid_argument("no CPPN node with id " + std::to_string(id));
}

void CppnGenome::compile() {
    const std::size_t n = nodes_.size();
    std::unordered_map<int, std::size_t> index;
    index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!index.emplace(nodes_[i].id, i).second)
            throw std::invalid_argument("duplicate CPPN node id " + std::to_string(nodes_[i].id));
    }

    std::set<std::pair<int, int>> seen;
    std::vector<std::vector<Incoming>> in(n);
    std::vector<std::vector<std::size_t>> out(n);
    for (const auto& c : connections_) {
        auto s = index.find(c.source);
        auto t = index.find(c.target);
        if (s == index.end() || t == index.end())
            throw std::invalid_argument("CPPN connection references an unknown node");
        if (is_input_index(t->second))
            throw std::invalid_argument("CPPN connection targets an input node");
        if (!std::isfinite(c.weight))
            throw std::invalid_argument("CPPN connection weight is not finite");
        if (!seen.emplace(c.source, c.target).second)
            throw std::invalid_argument("duplicate CPPN connection");
        in[t->second].push_back({s->second, c.weight});
        out[s->second].push_back(t->second);
    }

    // Kahn's algorithm, smallest index first so the order is canonical.
    std::vector<std::size_t> indegree(n);
    for (std::size_t i = 0; i < n; ++i)
        indegree[i] = in[i].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0)
            ready.push(i);
    order_.clear();
    std::size_t visited = 0;
    while (!ready.empty()) {
        std::size_t i = ready.top();
        ready.pop();
        ++visited;
        if (!is_input_index(i))
            order_.push_back(i);
        for (std::size_t t : out[i])
            if (--indegree[t] == 0)
                ready.push(t);
    }
    if (visited != n)
        throw std::invalid_argument("CPPN connection graph contains a cycle");

    incoming_offset_.assign(n + 1, 0);
    incoming_.clear();
    for (std::size_t i = 0; i < n; ++i) {
        incoming_offset_[i] = incoming_.size();
        incoming_.insert(incoming_.end(), in[i].begin(), in[i].end());
    }
    incoming_offset_[n] = incoming_.size();
}

std::vector<double> CppnGenome::evaluate(std::span<const double> inputs) const {
    std::vector<double> outputs(output_count_);
    std::vector<double> scratch;
    evaluate(inputs, outputs, scratch);
    return outputs;
}

void CppnGenome::evaluate(std::span<const double> inputs, std::span<double> outputs,
                          std::vector<double>& scratch) const {
    if (inputs.size() != static_cast<std::size_t>(input_count_))
        throw std::invalid_argument("CPPN input length mismatch");
    if (outputs.size() != static_cast<std::size_t>(output_count_))
        throw std::invalid_argument("CPPN output length mismatch");
    scratch.assign(nodes_.size(), 0.0);
    for (int i = 0; i < input_count_; ++i) {
        if (!std::isfinite(inputs[i]))
            throw std::invalid_argument("CPPN input is not finite");
        scratch[i] = inputs[i];
    }
    for (std::size_t node : order_) {
        const std::size_t begin = incoming_offset_[node];
        const std::size_t end = incoming_offset_[node + 1];
        if (begin == end) {
            scratch[node] = 0.0; // unconnected nodes are silent
            continue;
        }
        double sum = 0.0;
        for (std::size_t k = begin; k < end; ++k)
            sum += incoming_[k].weight * scratch[incoming_[k].source];
        double v = activate(nodes_[node].kind, sum);
        if (is_output_index(node))
            v = std::clamp(v, -1.0, 1.0);
        scratch[node] = v;
    }
    for (int o = 0; o < output_count_; ++o)
        outputs[o] = scratch[input_count_ + o];
}

CppnGenome random_cppn(Rng& rng, int input_count, int output_count) {
    if (input_count < 1 || output_count < 1)
        throw std::invalid_argument("CPPN needs at least one input and one output");
    std::vector<CppnNode> nodes;
    for (int i = 0; i < input_count; ++i)
        nodes.push_back({i, ActivationKind::Linear});
    for (int o = 0; o < output_count; ++o)
        nodes.push_back({input_count + o, kActivationKinds[pick_index(rng, kActivationKinds.size())]});
    std::vector<CppnConnection> conns;
    for (int o = 0; o < output_count; ++o)
        for (int i = 0; i < input_count; ++i)
            conns.push_back({i, input_count + o, uniform(rng, -1.0, 1.0)});
    return CppnGenome(input_count, output_count, std::move(nodes), std::move(conns));
}

namespace {

ActivationKind random_kind(Rng& rng) {
    return kActivationKinds[pick_index(rng, kActivationKinds.size())];
}

int next_node_id(const std::vector<CppnNode>& nodes) {
    int id = 0;
    for (const auto& n : nodes)
        id = std::max(id, n.id + 1);
    return id;
}

/// True when `to` is reachable from `from` along connections.
bool reaches(const std::vector<CppnConnection>& conns, int from, int to) {
    std::vector<int> stack{from};
    std::set<int> seen{from};
    while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        if (cur == to)
            return true;
        for (const auto& c : conns)
            if (c.source == cur && seen.insert(c.target).second)
                stack.push_back(c.target);
    }
    return false;
}

} // namespace

CppnGenome mutate(const CppnGenome& genome, const MutationConfig& config, Rng& rng) {
    const int n_in = genome.input_count();
    const int n_out = genome.output_count();
    std::vector<CppnNode> nodes = genome.nodes();
    std::vector<CppnConnection> conns = genome.connections();
    const auto fixed = static_cast<std::size_t>(n_in + n_out);

    if (bernoulli(rng, config.effective_rate(config.node_type_change_rate))) {
        std::size_t idx = n_in + pick_index(rng, nodes.size() - n_in);
        ActivationKind current = nodes[idx].kind;
        std::array<ActivationKind, 3> others{};
        std::size_t k = 0;
        for (auto kind : kActivationKinds)
            if (kind != current)
                others[k++] = kind;
        nodes[idx].kind = others[pick_index(rng, others.size())];
    }

    if (bernoulli(rng, config.effective_rate(config.node_add_rate))) {
        const int id = next_node_id(nodes);
        const ActivationKind kind = random_kind(rng);
        if (!conns.empty()) {
            // Split an existing link: src -> new (w=1) -> dst (old weight).
            std::size_t c = pick_index(rng, conns.size());
            CppnConnection split = conns[c];
            conns.erase(conns.begin() + static_cast<std::ptrdiff_t>(c));
            conns.push_back({split.source, id, 1.0});
            conns.push_back({id, split.target, split.weight});
        } else {
            int src = nodes[pick_index(rng, n_in)].id;
            int dst = nodes[n_in + pick_index(rng, n_out)].id;
            double w_in = uniform(rng, -1.0, 1.0);
            double w_out = uniform(rng, -1.0, 1.0);
            conns.push_back({src, id, w_in});
            conns.push_back({id, dst, w_out});
        }
        nodes.push_back({id, kind});
    }

    if (bernoulli(rng, config.effective_rate(config.node_remove_rate)) && nodes.size() > fixed) {
        std::size_t idx = fixed + pick_index(rng, nodes.size() - fixed);
        const int id = nodes[idx].id;
        nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(idx));
        std::erase_if(conns, [id](const CppnConnection& c) { return c.source == id || c.target == id; });
    }

    if (bernoulli(rng, config.effective_rate(config.connection_add_rate))) {
        std::vector<std::pair<int, int>> candidates;
        for (std::size_t t = n_in; t < nodes.size(); ++t) {
            for (std::size_t s = 0; s < nodes.size(); ++s) {
                if (s == t)
                    continue;
                const int sid = nodes[s].id;
                const int tid = nodes[t].id;
                bool exists = std::any_of(conns.begin(), conns.end(), [&](const CppnConnection& c) {
                    return c.source == sid && c.target == tid;
                });
                if (exists || reaches(conns, tid, sid))
                    continue;
                candidates.emplace_back(sid, tid);
            }
        }
        if (!candidates.empty()) {
            auto [sid, tid] = candidates[pick_index(rng, candidates.size())];
            conns.push_back({sid, tid, uniform(rng, -1.0, 1.0)});
        }
    }

    if (bernoulli(rng, config.effective_rate(config.connection_remove_rate)) && !conns.empty()) {
        std::size_t c = pick_index(rng, conns.size());
        conns.erase(conns.begin() + static_cast<std::ptrdiff_t>(c));
    }

    const double rate = config.effective_rate(config.weight_mutation_rate);
    const double sigma = config.effective_sigma(config.weight_step_sigma);
    for (auto& c : conns)
        if (bernoulli(rng, rate))
            c.weight += gaussian(rng, sigma);

    return CppnGenome(n_in, n_out, std::move(nodes), std::move(conns));
}

} // namespace evosig

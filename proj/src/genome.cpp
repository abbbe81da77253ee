#include "evosig/genome.hpp"

#include <algorithm>
#include <stdexcept>

namespace evosig {

Genome random_genome(Encoding encoding, Rng& rng) {
    Genome g;
    g.encoding = encoding;
    if (encoding == Encoding::Direct) {
        DirectGenome d;
        for (auto& v : d.genes)
            v = uniform01(rng);
        g.body = d;
    } else {
        const CppnShape shape = cppn_shape(encoding);
        g.body = random_cppn(rng, shape.inputs, shape.outputs);
    }
    return g;
}

Genome mutate(const Genome& genome, const MutationConfig& config, Rng& rng) {
    Genome out = genome;
    if (genome.encoding == Encoding::Direct) {
        DirectGenome d = genome.direct();
        const double rate = config.effective_rate(config.weight_mutation_rate);
        const double sigma = config.effective_sigma(config.gene_step_sigma);
        for (auto& v : d.genes)
            if (bernoulli(rng, rate))
                v = std::clamp(v + gaussian(rng, sigma), 0.0, 1.0);
        out.body = d;
    } else {
        out.body = mutate(genome.cppn(), config, rng);
    }
    return out;
}

std::unique_ptr<Controller> decode(const Genome& genome) {
    switch (genome.encoding) {
    case Encoding::Direct: return decode_direct(genome.direct());
    case Encoding::Cpg: return decode_cpg(genome.cppn());
    case Encoding::CpgFeedback: return decode_cpg_fb(genome.cppn());
    case Encoding::Ann: return decode_ann(genome.cppn());
    case Encoding::Supg: return decode_supg(genome.cppn());
    }
    throw std::logic_error("unknown encoding");
}

nlohmann::json cppn_to_json(const CppnGenome& cppn) {
    nlohmann::json j;
    j["inputs"] = cppn.input_count();
    j["outputs"] = cppn.output_count();
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : cppn.nodes())
        j["nodes"].push_back({{"id", n.id}, {"kind", std::string(to_string(n.kind))}});
    j["conns"] = nlohmann::json::array();
    for (const auto& c : cppn.connections())
        j["conns"].push_back({{"src", c.source}, {"dst", c.target}, {"w", c.weight}});
    return j;
}

CppnGenome cppn_from_json(const nlohmann::json& j) {
    std::vector<CppnNode> nodes;
    for (const auto& n : j.at("nodes"))
        nodes.push_back({n.at("id").get<int>(), activation_from_string(n.at("kind").get<std::string>())});
    std::vector<CppnConnection> conns;
    for (const auto& c : j.at("conns"))
        conns.push_back({c.at("src").get<int>(), c.at("dst").get<int>(), c.at("w").get<double>()});
    return CppnGenome(j.at("inputs").get<int>(), j.at("outputs").get<int>(), std::move(nodes),
                      std::move(conns));
}

nlohmann::json genome_to_json(const Genome& genome) {
    nlohmann::json j;
    j["encoding"] = std::string(to_string(genome.encoding));
    if (genome.encoding == Encoding::Direct)
        j["genes"] = genome.direct().genes;
    else
        j["cppn"] = cppn_to_json(genome.cppn());
    return j;
}

Genome genome_from_json(const nlohmann::json& j) {
    Genome g;
    g.encoding = encoding_from_string(j.at("encoding").get<std::string>());
    if (g.encoding == Encoding::Direct) {
        const auto genes = j.at("genes").get<std::vector<double>>();
        if (genes.size() != kDirectGenes)
            throw std::invalid_argument("direct genome needs 23 genes");
        DirectGenome d;
        for (std::size_t i = 0; i < kDirectGenes; ++i) {
            if (!(genes[i] >= 0.0 && genes[i] <= 1.0))
                throw std::invalid_argument("direct genes must lie in [0, 1]");
            d.genes[i] = genes[i];
        }
        g.body = d;
    } else {
        CppnGenome c = cppn_from_json(j.at("cppn"));
        const CppnShape shape = cppn_shape(g.encoding);
        if (c.input_count() != shape.inputs || c.output_count() != shape.outputs)
            throw std::invalid_argument("CPPN shape does not match the encoding");
        g.body = std::move(c);
    }
    return g;
}

} // namespace evosig

#include <doctest.h>

#include <cmath>
#include <set>

#include "evosig/cppn.hpp"
#include "oracles.hpp"

using namespace evosig;

namespace {

bool acyclic(const CppnGenome& g) {
    try {
        CppnGenome copy(g.input_count(), g.output_count(), g.nodes(), g.connections());
        return true;
    } catch (...) {
        return false;
    }
}

CppnGenome five_node_genome() {
    // 2 inputs, 1 output, 2 hidden with a skip connection.
    std::vector<CppnNode> nodes{{0, ActivationKind::Linear},
                                {1, ActivationKind::Linear},
                                {2, ActivationKind::Sigmoid},
                                {3, ActivationKind::Sine},
                                {4, ActivationKind::Gaussian}};
    std::vector<CppnConnection> conns{{0, 3, 0.7}, {1, 3, -1.3}, {0, 4, 0.4}, {3, 4, 2.1}, {4, 2, -1.7},
                                      {3, 2, 0.9}, {1, 2, 0.25}};
    return CppnGenome(2, 1, nodes, conns);
}

} // namespace

TEST_CASE("activation definitions") {
    CHECK(activate(ActivationKind::Sine, 0.5) == doctest::Approx(1.0));
    CHECK(activate(ActivationKind::Gaussian, 0.0) == 1.0);
    CHECK(activate(ActivationKind::Sigmoid, 0.0) == 0.0);
    CHECK(activate(ActivationKind::Linear, 3.0) == 3.0);
    for (auto k : kActivationKinds)
        CHECK(activation_from_string(to_string(k)) == k);
    CHECK_THROWS(activation_from_string("relu"));
}

TEST_CASE("identity chain and gaussian output") {
    CppnGenome lin(1, 1, {{0, ActivationKind::Linear}, {1, ActivationKind::Linear}}, {{0, 1, 1.0}});
    CHECK(lin.evaluate(std::vector<double>{0.5})[0] == 0.5);
    CHECK(lin.evaluate(std::vector<double>{7.0})[0] == 1.0); // linear output clamps

    CppnGenome gau(1, 1, {{0, ActivationKind::Linear}, {1, ActivationKind::Gaussian}}, {{0, 1, 2.0}});
    CHECK(gau.evaluate(std::vector<double>{0.0})[0] == 1.0);
}

TEST_CASE("evaluation matches a recursive evaluator") {
    const CppnGenome g = five_node_genome();
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> in{uniform(rng, -1, 1), uniform(rng, -1, 1)};
        CHECK(g.evaluate(in)[0] == doctest::Approx(oracle::recursive_cppn(g, in)[0]).epsilon(1e-12));
    }
}

TEST_CASE("construction rejects invalid graphs") {
    std::vector<CppnNode> nodes{{0, ActivationKind::Linear}, {1, ActivationKind::Sine}, {2, ActivationKind::Sine}};
    CHECK_THROWS(CppnGenome(1, 1, nodes, {{1, 2, 1.0}, {2, 1, 1.0}}));       // cycle
    CHECK_THROWS(CppnGenome(1, 1, nodes, {{1, 0, 1.0}}));                    // input target
    CHECK_THROWS(CppnGenome(1, 1, nodes, {{0, 9, 1.0}}));                    // unknown node
    CHECK_THROWS(CppnGenome(1, 1, nodes, {{0, 1, 1.0}, {0, 1, 2.0}}));       // duplicate pair
    CHECK_THROWS(CppnGenome(1, 1, nodes, {{0, 1, NAN}}));                    // non-finite weight
    CHECK_THROWS(CppnGenome(1, 1, {{0, ActivationKind::Linear}, {0, ActivationKind::Sine}}, {}));
    const CppnGenome ok(1, 1, nodes, {{0, 1, 1.0}});
    CHECK_THROWS(ok.evaluate(std::vector<double>{1.0, 2.0}));
    CHECK_THROWS(ok.evaluate(std::vector<double>{INFINITY}));
}

TEST_CASE("unconnected outputs read zero") {
    CppnGenome g(2, 2, {{0, ActivationKind::Linear}, {1, ActivationKind::Linear}, {2, ActivationKind::Gaussian},
                        {3, ActivationKind::Gaussian}},
                 {{0, 2, 1.0}});
    const auto out = g.evaluate(std::vector<double>{0.0, 0.0});
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 0.0);
}

TEST_CASE("random minimal genomes") {
    Rng a(5), b(5);
    const CppnGenome g = random_cppn(a, 5, 1);
    CHECK(g.nodes().size() == 6);
    CHECK(g.connections().size() == 5);
    CHECK(g == random_cppn(b, 5, 1));
    Rng c(6);
    const CppnGenome h = random_cppn(c, 4, 2);
    CHECK(h.connections().size() == 8);
    CHECK(acyclic(h));
    for (const auto& conn : h.connections())
        CHECK(std::abs(conn.weight) <= 1.0);
}

TEST_CASE("zero-rate mutation is a no-op") {
    MutationConfig zero;
    zero.weight_mutation_rate = zero.node_add_rate = zero.node_remove_rate = zero.node_type_change_rate =
        zero.connection_add_rate = zero.connection_remove_rate = 0.0;
    Rng rng(1);
    const CppnGenome g = random_cppn(rng, 4, 1);
    CHECK(mutate(g, zero, rng) == g);
}

TEST_CASE("forced node addition") {
    MutationConfig cfg;
    cfg.weight_mutation_rate = cfg.node_remove_rate = cfg.node_type_change_rate = cfg.connection_add_rate =
        cfg.connection_remove_rate = 0.0;
    cfg.node_add_rate = 1.0;
    Rng rng(2);
    const CppnGenome g = random_cppn(rng, 3, 2);
    const CppnGenome m = mutate(g, cfg, rng);
    CHECK(m.nodes().size() == g.nodes().size() + 1);
    CHECK(m.input_count() == 3);
    CHECK(m.output_count() == 2);
    // The split link is replaced by two.
    CHECK(m.connections().size() == g.connections().size() + 1);
}

TEST_CASE("weight mutation count follows the binomial expectation") {
    MutationConfig cfg;
    cfg.node_add_rate = cfg.node_remove_rate = cfg.node_type_change_rate = cfg.connection_add_rate =
        cfg.connection_remove_rate = 0.0;
    cfg.weight_mutation_rate = 0.1;
    Rng init(3);
    const CppnGenome g = random_cppn(init, 5, 4); // 20 connections
    REQUIRE(g.connections().size() == 20);
    double total = 0.0;
    Rng rng(4);
    for (int i = 0; i < 10000; ++i) {
        const CppnGenome m = mutate(g, cfg, rng);
        for (std::size_t k = 0; k < 20; ++k)
            total += m.connections()[k].weight != g.connections()[k].weight;
    }
    CHECK(std::abs(total / 10000.0 - 2.0) < 0.2);
}

TEST_CASE("intensity scales rate and step") {
    MutationConfig cfg;
    CHECK(cfg.with_intensity(0.25).effective_rate(0.1) == doctest::Approx(0.025));
    CHECK(cfg.with_intensity(4).effective_sigma(0.5) == doctest::Approx(2.0));
    CHECK(cfg.with_intensity(40).effective_rate(0.1) == 1.0);
}

TEST_CASE("long mutation chains keep the genome valid") {
    MutationConfig cfg;
    cfg.node_add_rate = cfg.node_remove_rate = cfg.node_type_change_rate = 0.3;
    cfg.connection_add_rate = cfg.connection_remove_rate = 0.3;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Rng rng(seed);
        CppnGenome g = random_cppn(rng, 4, 2);
        for (int i = 0; i < 1000; ++i) {
            g = mutate(g, cfg, rng);
            REQUIRE(g.input_count() == 4);
            REQUIRE(g.output_count() == 2);
            REQUIRE(acyclic(g));
            std::set<int> ids;
            for (const auto& n : g.nodes())
                ids.insert(n.id);
            REQUIRE(ids.size() == g.nodes().size());
        }
        std::vector<double> in{0.1, -0.4, 0.7, 0.2};
        for (double v : g.evaluate(in)) {
            CHECK(std::isfinite(v));
            CHECK(std::abs(v) <= 1.0);
        }
    }
}

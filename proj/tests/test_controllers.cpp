#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "evosig/controllers.hpp"
#include "evosig/genome.hpp"

using namespace evosig;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

CppnGenome constant_cppn(int inputs, int outputs, double value) {
    // Every output reads `value` for any query; value 0 leaves the outputs unconnected.
    std::vector<CppnNode> nodes;
    for (int i = 0; i < inputs; ++i)
        nodes.push_back({i, ActivationKind::Linear});
    for (int o = 0; o < outputs; ++o)
        nodes.push_back({inputs + o, ActivationKind::Linear});
    std::vector<CppnConnection> conns;
    if (value != 0.0) {
        // A gaussian hidden node on a zero-weight link always reads 1.
        nodes.push_back({inputs + outputs, ActivationKind::Gaussian});
        conns.push_back({0, inputs + outputs, 0.0});
        for (int o = 0; o < outputs; ++o)
            conns.push_back({inputs + outputs, inputs + o, value});
    }
    return CppnGenome(inputs, outputs, nodes, conns);
}

CppnGenome linear_of_input(int inputs, int outputs, int which) {
    std::vector<CppnNode> nodes;
    for (int i = 0; i < inputs; ++i)
        nodes.push_back({i, ActivationKind::Linear});
    for (int o = 0; o < outputs; ++o)
        nodes.push_back({inputs + o, ActivationKind::Linear});
    std::vector<CppnConnection> conns;
    for (int o = 0; o < outputs; ++o)
        conns.push_back({which, inputs + o, 1.0});
    return CppnGenome(inputs, outputs, nodes, conns);
}

void check_json_close(const json& a, const json& b, const std::string& where = "") {
    REQUIRE(a.type() == b.type());
    if (a.is_number()) {
        CHECK_MESSAGE(std::abs(a.get<double>() - b.get<double>()) <= 1e-12 * std::max(1.0, std::abs(b.get<double>())),
                      where);
    } else if (a.is_array()) {
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            check_json_close(a[i], b[i], where + "[" + std::to_string(i) + "]");
    } else if (a.is_object()) {
        REQUIRE(a.size() == b.size());
        for (const auto& [k, v] : a.items())
            check_json_close(v, b.at(k), where + "." + k);
    } else {
        CHECK(a == b);
    }
}

} // namespace

TEST_CASE("substrate is mirror symmetric") {
    for (std::size_t k = 0; k < kActuators; ++k) {
        const auto& a = kActuatorTable[k];
        const auto& m = kActuatorTable[kMirrorActuator[k]];
        CHECK(a.x == -m.x);
        CHECK(a.y == m.y);
        CHECK(a.servo == m.servo);
        CHECK(kMirrorLeg[a.leg] == m.leg);
    }
    for (std::size_t l = 0; l < kLegs; ++l) {
        CHECK(kActuatorTable[kLegS1[l]].leg == l);
        CHECK(kActuatorTable[kLegS1[l]].servo == Servo::S1);
        CHECK(kActuatorTable[kLegS2[l]].leg == l);
        CHECK(kActuatorTable[kLegS2[l]].servo == Servo::S2);
    }
}

TEST_CASE("direct decoding endpoints") {
    DirectGenome zero{};
    const CpgPhenotype z = decode_direct_phenotype(zero);
    for (double a : z.amplitudes)
        CHECK(a == 0.0);
    for (double b : z.free_biases)
        CHECK(b == 0.0);

    DirectGenome one;
    one.genes.fill(1.0);
    const CpgPhenotype o = decode_direct_phenotype(one);
    for (std::size_t k = 0; k < kActuators; ++k)
        CHECK(o.amplitudes[k] == actuator_range(k));
    for (double b : o.free_biases) {
        CHECK(b < 2 * kPi);
        CHECK(b == doctest::Approx(2 * kPi));
    }
}

TEST_CASE("zero direct genome gives a static robot") {
    auto c = decode_direct(DirectGenome{});
    for (int k = 0; k < 50; ++k) {
        const JointCommand cmd = c->tick({}, k * kControlPeriod);
        CHECK(cmd == JointCommand{});
    }
}

TEST_CASE("direct phenotype matches the golden file") {
    const std::filesystem::path dir = EVOSIG_GOLDEN_DIR;
    DirectGenome g;
    for (std::size_t i = 0; i < kDirectGenes; ++i)
        g.genes[i] = std::fmod(0.137 * static_cast<double>(i + 1), 1.0);
    const json phen = decode_direct(g)->phenotype_json();
    if (std::getenv("EVOSIG_UPDATE_GOLDEN")) {
        std::ofstream(dir / "direct_phenotype.json") << phen.dump(2) << '\n';
    }
    std::ifstream in(dir / "direct_phenotype.json");
    REQUIRE(in.good());
    check_json_close(phen, json::parse(in));
}

TEST_CASE("cpg decoding with a constant CPPN") {
    const CpgPhenotype p = decode_cpg_phenotype(constant_cppn(4, 1, 0.0));
    for (std::size_t k = 0; k < kActuators; ++k)
        CHECK(p.amplitudes[k] == doctest::Approx(actuator_range(k) / 2));
    for (double b : p.free_biases)
        CHECK(b == doctest::Approx(kPi));
}

TEST_CASE("cpg decoding follows the scripted query sequence") {
    Rng rng(42);
    const CppnGenome cppn = random_cppn(rng, 4, 1);
    const CpgPhenotype p = decode_cpg_phenotype(cppn);
    // Amplitude queries: (x_i, y_i, 0, 0); bias queries: (x_a, y_a, x_b, y_b) per free edge.
    for (std::size_t k = 0; k < kActuators; ++k) {
        const auto& a = kActuatorTable[k];
        const double o = cppn.evaluate(std::vector<double>{a.x, a.y, 0, 0})[0];
        CHECK(p.amplitudes[k] == (o + 1) / 2 * actuator_range(k));
    }
    for (std::size_t e = 0; e < kFreeBiases; ++e) {
        const auto& s = kActuatorTable[kFreeEdges[e].a];
        const auto& d = kActuatorTable[kFreeEdges[e].b];
        CHECK(kFreeEdges[e].a < kFreeEdges[e].b);
        const double o = cppn.evaluate(std::vector<double>{s.x, s.y, d.x, d.y})[0];
        CHECK(p.free_biases[e] == (o + 1) * kPi);
    }
}

TEST_CASE("cpg decoding of x gives mirrored amplitudes") {
    const CpgPhenotype p = decode_cpg_phenotype(linear_of_input(4, 1, 0));
    for (std::size_t k = 0; k < kActuators; ++k) {
        const std::size_t m = kMirrorActuator[k];
        CHECK((p.amplitudes[k] / actuator_range(k) - 0.5) == doctest::Approx(-(p.amplitudes[m] / actuator_range(m) - 0.5)));
    }
}

TEST_CASE("x-symmetric CPPN gives equal left and right amplitudes") {
    // Output = gaussian(gaussian(1.3 * x1) + 0.4 * y1), even in x.
    std::vector<CppnNode> nodes{{0, ActivationKind::Linear}, {1, ActivationKind::Linear}, {2, ActivationKind::Linear},
                                {3, ActivationKind::Linear}, {4, ActivationKind::Gaussian}, {5, ActivationKind::Gaussian}};
    const CppnGenome cppn(4, 1, nodes, {{0, 5, 1.3}, {5, 4, 1.0}, {1, 4, 0.4}});
    const CpgPhenotype p = decode_cpg_phenotype(cppn);
    for (std::size_t k = 0; k < kActuators; ++k)
        CHECK(p.amplitudes[k] == p.amplitudes[kMirrorActuator[k]]);
}

TEST_CASE("closed-loop twin differs only by phase resets") {
    Rng rng(8);
    const CppnGenome cppn = random_cppn(rng, 4, 1);
    auto open = decode_cpg(cppn);
    auto closed = decode_cpg_fb(cppn);
    CHECK(open->phenotype_json()["amplitudes"] == closed->phenotype_json()["amplitudes"]);
    CHECK(open->phenotype_json()["free_biases"] == closed->phenotype_json()["free_biases"]);
    SensorFrame s{};
    bool differed = false;
    for (int k = 0; k < 100; ++k) {
        s.landed = {};
        if (k % 20 == 10)
            s.landed[0] = true;
        const JointCommand a = open->tick(s, k * kControlPeriod);
        const JointCommand b = closed->tick(s, k * kControlPeriod);
        if (k < 10)
            CHECK(a == b);
        differed = differed || !(a == b);
    }
    CHECK(differed);
}

TEST_CASE("ann decoding") {
    SUBCASE("zero CPPN gives zero weights and a mid-range command") {
        AnnPhenotype p = decode_ann_phenotype(constant_cppn(5, 1, 0.0));
        for (double w : p.input_hidden)
            CHECK(w == 0.0);
        AnnController c(p);
        for (int k = 0; k < 5; ++k)
            CHECK(c.tick({}, k * kControlPeriod) == JointCommand{});
    }
    SUBCASE("query count") {
        Rng rng(1);
        const AnnPhenotype p = decode_ann_phenotype(random_cppn(rng, 5, 1));
        CHECK(p.queries == kAnnInputs * kAnnHidden + kAnnHidden * kAnnOutputs);
        CHECK(p.queries == 312);
    }
    SUBCASE("x-blind CPPN gives equal weights for mirrored pairs") {
        // Output depends on y1 and y2 only.
        std::vector<CppnNode> nodes;
        for (int i = 0; i < 5; ++i)
            nodes.push_back({i, ActivationKind::Linear});
        nodes.push_back({5, ActivationKind::Sine});
        const CppnGenome cppn(5, 1, nodes, {{1, 5, 0.8}, {3, 5, -0.3}, {4, 5, 0.1}});
        const AnnPhenotype p = decode_ann_phenotype(cppn);
        const auto hid = ann_hidden_grid();
        for (std::size_t h = 0; h < kAnnHidden; ++h)
            for (std::size_t i = 0; i < kActuators; ++i)
                CHECK(p.input_hidden[h * kAnnInputs + i] ==
                      p.input_hidden[kMirrorActuator[h] * kAnnInputs + kMirrorActuator[i]]);
        for (std::size_t h = 0; h < kAnnHidden; ++h)
            CHECK(hid[h].x == -hid[kMirrorActuator[h]].x);
    }
    SUBCASE("weights scale to [-3, 3]") {
        const AnnPhenotype p = decode_ann_phenotype(constant_cppn(5, 1, 1.0));
        for (double w : p.hidden_output)
            CHECK(w == doctest::Approx(3.0));
    }
}

TEST_CASE("pseudo-position averaging with a stub network") {
    std::array<double, kActuators> prev{};
    prev[3] = 0.25;
    std::vector<double> seen_t;
    int call = 0;
    const auto avg = average_pseudo_outputs(prev, 0.3, [&](std::span<const double, kAnnInputs> in) {
        CHECK(in[3] == 0.25);
        seen_t.push_back(std::atan2(in[kActuators], in[kActuators + 1]));
        std::array<double, kAnnOutputs> out{};
        out.fill(0.1 * ++call);
        return out;
    });
    for (double v : avg)
        CHECK(v == doctest::Approx((0.1 + 0.2 + 0.3 + 0.4) / 4));
    REQUIRE(seen_t.size() == 4);
    for (std::size_t p = 0; p < 4; ++p) {
        const double expect = std::remainder(2 * kPi * (0.3 + p * 0.00375), 2 * kPi);
        CHECK(seen_t[p] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("ann controller is pure given state and time") {
    Rng rng(3);
    const CppnGenome cppn = random_cppn(rng, 5, 1);
    auto a = decode_ann(cppn);
    auto b = decode_ann(cppn);
    for (int k = 0; k < 30; ++k) {
        const JointCommand ca = a->tick({}, k * kControlPeriod);
        CHECK(ca == b->tick({}, k * kControlPeriod));
        CHECK(ca == ca.clamped());
    }
}

TEST_CASE("supg timers follow a scripted contact trace") {
    std::array<double, kLegs> offsets{};
    offsets.fill(0.0);
    offsets[1] = 0.2;
    SupgTimers timers(offsets);
    std::array<bool, kLegs> none{};
    timers.update(none, 0.0);
    CHECK(timers.triggered(0));
    CHECK_FALSE(timers.triggered(1));
    CHECK(timers.value(1, 0.1) == 0.0);

    // Ramp to 0.4, landing at 0.4 restarts, then ramp again and saturate.
    for (double t : {0.1, 0.25, 0.4}) {
        timers.update(none, t);
        CHECK(timers.value(0, t) == doctest::Approx(t));
    }
    std::array<bool, kLegs> land0{};
    land0[0] = true;
    timers.update(land0, 0.4);
    CHECK(timers.value(0, 0.4) == 0.0);
    timers.update(none, 0.9);
    CHECK(timers.value(0, 0.9) == doctest::Approx(0.5));
    timers.update(none, 2.0);
    CHECK(timers.value(0, 2.0) == 1.0);

    // Leg 1 triggers at exactly its offset, and landings before that are ignored.
    std::array<bool, kLegs> land1{};
    land1[1] = true;
    SupgTimers t2(offsets);
    t2.update(land1, 0.1);
    CHECK_FALSE(t2.triggered(1));
    t2.update(none, 0.21);
    CHECK(t2.triggered(1));
    CHECK(t2.value(1, 0.21) == doctest::Approx(0.01));
}

TEST_CASE("supg commands") {
    SUBCASE("untriggered legs are neutral") {
        // Offset output 1 -> offset 1 s for every leg; signal output constant 0.5.
        std::vector<CppnNode> nodes{{0, ActivationKind::Linear}, {1, ActivationKind::Linear},
                                    {2, ActivationKind::Linear}, {3, ActivationKind::Linear},
                                    {4, ActivationKind::Linear}, {5, ActivationKind::Gaussian}};
        const CppnGenome cppn(3, 2, nodes, {{0, 5, 0.0}, {5, 3, 0.5}, {5, 4, 1.0}});
        SupgController c(cppn);
        for (double off : c.offsets())
            CHECK(off == 1.0);
        CHECK(c.tick({}, 0.5) == JointCommand{});
        const JointCommand after = c.tick({}, 1.005);
        for (std::size_t l = 0; l < kLegs; ++l) {
            CHECK(after.s1[l] == doctest::Approx(0.5 * kS1Range));
            CHECK(after.s2[l] == doctest::Approx(0.5 * kS2Range));
        }
        CHECK(c.tick({}, 1.5) == after);
    }
    SUBCASE("offset range") {
        Rng rng(12);
        for (int i = 0; i < 20; ++i) {
            const auto off = decode_supg_offsets(random_cppn(rng, 3, 2));
            for (double o : off) {
                CHECK(o >= 0.0);
                CHECK(o <= 1.0);
            }
        }
    }
}

TEST_CASE("shape checks") {
    Rng rng(1);
    CHECK_THROWS(decode_cpg(random_cppn(rng, 5, 1)));
    CHECK_THROWS(decode_ann(random_cppn(rng, 4, 1)));
    CHECK_THROWS(decode_supg(random_cppn(rng, 3, 1)));
    CHECK_THROWS(cppn_shape(Encoding::Direct));
    for (auto e : kEncodings)
        CHECK(encoding_from_string(to_string(e)) == e);
    CHECK_THROWS(encoding_from_string("neat"));
}

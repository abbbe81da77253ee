#include "evosig/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "evosig/io.hpp"

namespace evosig {

namespace {

using nlohmann::json;

std::size_t line_at(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Walks a parsed document and reports problems at the line of the offending key.
class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& message) const {
        std::string dotted;
        for (const auto& p : path)
            dotted += (dotted.empty() ? "" : ".") + p;
        throw ConfigError(locate(path), (dotted.empty() ? "" : dotted + ": ") + message);
    }

    void check_keys(const json& obj, const std::vector<std::string>& path, const std::set<std::string>& allowed) const {
        if (!obj.is_object())
            fail(path, "expected an object");
        for (const auto& [key, value] : obj.items()) {
            if (!allowed.count(key)) {
                auto p = path;
                p.push_back(key);
                fail(p, "unknown key");
            }
        }
    }

    double number(const json& obj, const std::vector<std::string>& path, const std::string& key, double current) const {
        if (!obj.contains(key))
            return current;
        const auto& v = obj.at(key);
        auto p = path;
        p.push_back(key);
        if (!v.is_number())
            fail(p, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d))
            fail(p, "expected a finite number");
        return d;
    }

    double positive(const json& obj, const std::vector<std::string>& path, const std::string& key, double current) const {
        const double d = number(obj, path, key, current);
        if (!(d > 0.0)) {
            auto p = path;
            p.push_back(key);
            fail(p, "must be positive");
        }
        return d;
    }

    double probability(const json& obj, const std::vector<std::string>& path, const std::string& key,
                       double current) const {
        const double d = number(obj, path, key, current);
        if (!(d >= 0.0 && d <= 1.0)) {
            auto p = path;
            p.push_back(key);
            fail(p, "must lie in [0, 1]");
        }
        return d;
    }

    std::uint64_t count(const json& obj, const std::vector<std::string>& path, const std::string& key,
                        std::uint64_t current) const {
        if (!obj.contains(key))
            return current;
        const auto& v = obj.at(key);
        auto p = path;
        p.push_back(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            fail(p, "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const json& obj, const std::vector<std::string>& path, const std::string& key,
                       const std::string& current) const {
        if (!obj.contains(key))
            return current;
        const auto& v = obj.at(key);
        if (!v.is_string()) {
            auto p = path;
            p.push_back(key);
            fail(p, "expected a string");
        }
        return v.get<std::string>();
    }

private:
    std::size_t locate(const std::vector<std::string>& path) const {
        std::size_t pos = 0;
        std::size_t found = std::string::npos;
        for (const auto& key : path) {
            const std::size_t at = text_.find('"' + key + '"', pos);
            if (at == std::string::npos)
                break;
            found = at;
            pos = at + key.size() + 2;
        }
        return found == std::string::npos ? 0 : line_at(text_, found);
    }

    const std::string& text_;
};

ExperimentConfig desk_scale() {
    ExperimentConfig c;
    c.preset = "desk-scale";
    c.evolution.population_size = 32;
    c.evolution.generations = 300;
    c.signature.samples = 200;
    c.damage.generations = 500;
    return c;
}

} // namespace

std::string fnv1a_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(detail::fnv1a(data)));
    return buf;
}

std::vector<std::string> preset_names() {
    return {"desk-scale", "desk-supg", "paper-scale"};
}

ExperimentConfig preset(std::string_view name) {
    if (name == "desk-scale")
        return desk_scale();
    if (name == "desk-supg") {
        ExperimentConfig c = desk_scale();
        c.preset = "desk-supg";
        c.evolution.encoding = Encoding::Supg;
        return c;
    }
    if (name == "paper-scale") {
        ExperimentConfig c;
        c.preset = "paper-scale";
        c.evolution.population_size = 100;
        c.evolution.generations = 8000;
        c.checkpoint_interval = 500;
        c.signature.samples = 1000;
        c.damage.generations = 10000;
        return c;
    }
    throw ConfigError(0, "unknown preset '" + std::string(name) + "'");
}

json ExperimentConfig::canonical_json() const {
    const auto& m = evolution.mutation;
    json j;
    j["encoding"] = std::string(to_string(evolution.encoding));
    j["seed"] = evolution.seed;
    j["evolution"] = {{"population_size", evolution.population_size},
                      {"generations", evolution.generations},
                      {"diversity_reference", std::string(to_string(evolution.diversity_reference))},
                      {"checkpoint_interval", checkpoint_interval}};
    j["mutation"] = {{"weight_mutation_rate", m.weight_mutation_rate},
                     {"weight_step_sigma", m.weight_step_sigma},
                     {"node_add_rate", m.node_add_rate},
                     {"node_remove_rate", m.node_remove_rate},
                     {"node_type_change_rate", m.node_type_change_rate},
                     {"connection_add_rate", m.connection_add_rate},
                     {"connection_remove_rate", m.connection_remove_rate},
                     {"gene_step_sigma", m.gene_step_sigma}};
    j["robot"] = {{"body_half_length", robot.body_half_length},
                  {"body_half_width", robot.body_half_width},
                  {"coxa", robot.coxa},
                  {"femur", robot.femur},
                  {"tibia", robot.tibia},
                  {"body_height", robot.body_height},
                  {"contact_threshold", robot.contact_threshold}};
    j["simulation"] = {{"duration", simulation.duration},
                       {"control_dt", simulation.control_dt},
                       {"goal_distance", simulation.goal_distance}};
    j["signature"] = {{"samples", signature.samples},
                      {"window",
                       {{"f2_min", signature.window.x_min},
                        {"f2_max", signature.window.x_max},
                        {"f1_min", signature.window.y_min},
                        {"f1_max", signature.window.y_max}}}};
    j["damage"] = {{"scenarios", damage.scenarios}, {"generations", damage.generations}};
    return j;
}

std::string ExperimentConfig::config_hash() const {
    return fnv1a_hex(canonical_json().dump());
}

std::string ExperimentConfig::run_id() const {
    return std::string(to_string(evolution.encoding)) + "-s" + std::to_string(evolution.seed) + "-" +
           config_hash().substr(0, 8);
}

std::string ExperimentConfig::provenance() const {
    return "run_id=" + run_id() + " config_hash=" + config_hash();
}

json config_to_json(const ExperimentConfig& config) {
    json j = config.canonical_json();
    if (!config.preset.empty())
        j["preset"] = config.preset;
    j["output_dir"] = config.output_dir;
    return j;
}

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(line_at(text, e.byte > 0 ? e.byte - 1 : 0), std::string("malformed JSON: ") + e.what());
    }
    Reader r(text);
    r.check_keys(doc, {},
                 {"preset", "encoding", "seed", "evolution", "mutation", "robot", "simulation", "signature", "damage",
                  "output_dir"});

    ExperimentConfig c;
    if (doc.contains("preset")) {
        const std::string name = r.string(doc, {}, "preset", "");
        try {
            c = preset(name);
        } catch (const ConfigError& e) {
            r.fail({"preset"}, e.what());
        }
    }

    if (doc.contains("encoding")) {
        try {
            c.evolution.encoding = encoding_from_string(r.string(doc, {}, "encoding", ""));
        } catch (const std::invalid_argument& e) {
            r.fail({"encoding"}, e.what());
        }
    }
    if (!doc.contains("seed"))
        throw ConfigError(1, "seed: required (runs are never seeded from the clock)");
    c.evolution.seed = r.count(doc, {}, "seed", 0);
    c.output_dir = r.string(doc, {}, "output_dir", c.output_dir);
    if (c.output_dir.empty())
        r.fail({"output_dir"}, "must not be empty");

    if (doc.contains("evolution")) {
        const auto& e = doc["evolution"];
        const std::vector<std::string> p{"evolution"};
        r.check_keys(e, p, {"population_size", "generations", "diversity_reference", "checkpoint_interval"});
        c.evolution.population_size = r.count(e, p, "population_size", c.evolution.population_size);
        c.evolution.generations = r.count(e, p, "generations", c.evolution.generations);
        c.checkpoint_interval = r.count(e, p, "checkpoint_interval", c.checkpoint_interval);
        try {
            c.evolution.diversity_reference = diversity_reference_from_string(
                r.string(e, p, "diversity_reference", std::string(to_string(c.evolution.diversity_reference))));
        } catch (const std::invalid_argument& err) {
            r.fail({"evolution", "diversity_reference"}, err.what());
        }
        if (c.evolution.population_size < 2 || c.evolution.population_size % 2)
            r.fail({"evolution", "population_size"}, "must be even and at least 2");
    }

    if (doc.contains("mutation")) {
        const auto& m = doc["mutation"];
        const std::vector<std::string> p{"mutation"};
        auto& mc = c.evolution.mutation;
        r.check_keys(m, p,
                     {"weight_mutation_rate", "weight_step_sigma", "node_add_rate", "node_remove_rate",
                      "node_type_change_rate", "connection_add_rate", "connection_remove_rate", "gene_step_sigma"});
        mc.weight_mutation_rate = r.probability(m, p, "weight_mutation_rate", mc.weight_mutation_rate);
        mc.node_add_rate = r.probability(m, p, "node_add_rate", mc.node_add_rate);
        mc.node_remove_rate = r.probability(m, p, "node_remove_rate", mc.node_remove_rate);
        mc.node_type_change_rate = r.probability(m, p, "node_type_change_rate", mc.node_type_change_rate);
        mc.connection_add_rate = r.probability(m, p, "connection_add_rate", mc.connection_add_rate);
        mc.connection_remove_rate = r.probability(m, p, "connection_remove_rate", mc.connection_remove_rate);
        for (const char* key : {"weight_step_sigma", "gene_step_sigma"}) {
            double& field = std::string(key) == "weight_step_sigma" ? mc.weight_step_sigma : mc.gene_step_sigma;
            field = r.number(m, p, key, field);
            if (field < 0.0)
                r.fail({"mutation", key}, "must be non-negative");
        }
    }

    if (doc.contains("robot")) {
        const auto& o = doc["robot"];
        const std::vector<std::string> p{"robot"};
        auto& rb = c.robot;
        r.check_keys(o, p,
                     {"body_half_length", "body_half_width", "coxa", "femur", "tibia", "body_height",
                      "contact_threshold"});
        rb.body_half_length = r.positive(o, p, "body_half_length", rb.body_half_length);
        rb.body_half_width = r.positive(o, p, "body_half_width", rb.body_half_width);
        rb.coxa = r.positive(o, p, "coxa", rb.coxa);
        rb.femur = r.positive(o, p, "femur", rb.femur);
        rb.tibia = r.positive(o, p, "tibia", rb.tibia);
        rb.body_height = r.positive(o, p, "body_height", rb.body_height);
        rb.contact_threshold = r.number(o, p, "contact_threshold", rb.contact_threshold);
        try {
            rb.validate();
        } catch (const std::invalid_argument& e) {
            r.fail({"robot"}, e.what());
        }
    }

    if (doc.contains("simulation")) {
        const auto& s = doc["simulation"];
        const std::vector<std::string> p{"simulation"};
        r.check_keys(s, p, {"duration", "control_dt", "goal_distance"});
        c.simulation.duration = r.positive(s, p, "duration", c.simulation.duration);
        c.simulation.control_dt = r.positive(s, p, "control_dt", c.simulation.control_dt);
        c.simulation.goal_distance = r.positive(s, p, "goal_distance", c.simulation.goal_distance);
    }

    if (doc.contains("signature")) {
        const auto& s = doc["signature"];
        const std::vector<std::string> p{"signature"};
        r.check_keys(s, p, {"samples", "window"});
        c.signature.samples = r.count(s, p, "samples", c.signature.samples);
        if (c.signature.samples == 0)
            r.fail({"signature", "samples"}, "must be at least 1");
        if (s.contains("window")) {
            const auto& w = s["window"];
            const std::vector<std::string> wp{"signature", "window"};
            r.check_keys(w, wp, {"f2_min", "f2_max", "f1_min", "f1_max"});
            auto& win = c.signature.window;
            win.x_min = r.number(w, wp, "f2_min", win.x_min);
            win.x_max = r.number(w, wp, "f2_max", win.x_max);
            win.y_min = r.number(w, wp, "f1_min", win.y_min);
            win.y_max = r.number(w, wp, "f1_max", win.y_max);
            if (!(win.x_max > win.x_min) || !(win.y_max > win.y_min))
                r.fail(wp, "window bounds must be increasing");
        }
    }

    if (doc.contains("damage")) {
        const auto& d = doc["damage"];
        const std::vector<std::string> p{"damage"};
        r.check_keys(d, p, {"scenarios", "generations"});
        c.damage.generations = r.count(d, p, "generations", c.damage.generations);
        if (d.contains("scenarios")) {
            const auto& list = d["scenarios"];
            if (!list.is_array() || list.empty())
                r.fail({"damage", "scenarios"}, "expected a non-empty list of scenario names");
            c.damage.scenarios.clear();
            for (const auto& item : list) {
                if (!item.is_string())
                    r.fail({"damage", "scenarios"}, "scenario names must be strings");
                try {
                    c.damage.scenarios.push_back(DamageScenario::named(item.get<std::string>()).name);
                } catch (const std::invalid_argument& e) {
                    r.fail({"damage", "scenarios"}, e.what());
                }
            }
        }
    }

    try {
        c.evolution.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(0, e.what());
    }
    return parse_config(text);
}

} // namespace evosig

#include "evosig/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace evosig {

namespace {

double wrap_pi(double a) {
    return std::remainder(a, 2.0 * std::numbers::pi);
}

void put_double(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

} // namespace

std::array<double, 2> HexapodConfig::mount(std::size_t leg) const {
    double x = 0.0;
    if (leg == RF || leg == LF)
        x = body_half_length;
    else if (leg == RR || leg == LR)
        x = -body_half_length;
    return {x, leg_side(leg) * body_half_width};
}

void HexapodConfig::validate() const {
    for (double v : {body_half_length, body_half_width, coxa, femur, tibia, body_height})
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("hexapod lengths must be positive and finite");
    if (!(contact_threshold >= 0.0))
        throw std::invalid_argument("contact threshold must be non-negative");
    if (!(body_height < femur + tibia))
        throw std::invalid_argument("body height exceeds the leg reach");
}

Vec3 forward_kinematics(std::size_t leg, double s1, double s2, const HexapodConfig& config) {
    const auto m = config.mount(leg);
    const double r = config.coxa + config.femur * std::cos(s2);
    return {m[0] + r * std::sin(s1), m[1] + leg_side(leg) * r * std::cos(s1),
            config.femur * std::sin(s2) - config.tibia};
}

std::size_t GaitDiagram::leg_contacts(std::size_t leg) const {
    std::size_t n = 0;
    for (std::size_t t = 0; t < steps_; ++t)
        n += at(t, leg);
    return n;
}

GaitDiagram GaitDiagram::from_behavior(const BehaviorVector& bits) {
    if (bits.size() % kLegs != 0)
        throw std::invalid_argument("behavior length is not a multiple of the leg count");
    GaitDiagram g(bits.size() / kLegs);
    for (std::size_t i = 0; i < bits.size(); ++i)
        g.cells_[i] = bits.get(i);
    return g;
}

BehaviorVector behavior_vector(const GaitDiagram& gait) {
    BehaviorVector b(gait.steps() * kLegs);
    for (std::size_t t = 0; t < gait.steps(); ++t)
        for (std::size_t l = 0; l < kLegs; ++l)
            if (gait.at(t, l))
                b.set(t * kLegs + l, true);
    return b;
}

std::size_t SimulationOptions::steps() const {
    if (!(duration >= 0.0) || !(control_dt > 0.0))
        throw std::invalid_argument("invalid simulation duration or control period");
    return static_cast<std::size_t>(std::ceil(duration / control_dt - 1e-9));
}

EvalResult simulate(Controller& controller, const HexapodConfig& config, const SimulationOptions& options) {
    config.validate();
    const std::size_t steps = options.steps();

    EvalResult res;
    res.gait = GaitDiagram(steps);
    if (options.record_trajectory)
        res.trajectory.reserve(steps);

    std::array<Vec3, kLegs> prev_feet{};
    std::array<bool, kLegs> prev_contact{};
    for (std::size_t l = 0; l < kLegs; ++l) {
        prev_feet[l] = forward_kinematics(l, 0.0, 0.0, config);
        prev_contact[l] = !config.damage_mask[l] &&
                          config.body_height + prev_feet[l].z <= config.contact_threshold;
    }
    ContactEdges edges(prev_contact);
    SensorFrame sensors{prev_contact, {}};

    double x = 0.0, y = 0.0, heading = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * options.control_dt;
        const JointCommand cmd = controller.tick(sensors, t).clamped();
        bool finite = true;
        for (std::size_t l = 0; l < kLegs; ++l)
            finite = finite && std::isfinite(cmd.s1[l]) && std::isfinite(cmd.s2[l]);
        if (controller.failed() || !finite) {
            res.failed = true;
            break;
        }

        std::array<Vec3, kLegs> feet{};
        std::array<bool, kLegs> contact{};
        for (std::size_t l = 0; l < kLegs; ++l) {
            feet[l] = forward_kinematics(l, cmd.s1[l], cmd.s2[l], config);
            contact[l] = !config.damage_mask[l] && config.body_height + feet[l].z <= config.contact_threshold;
            res.gait.set(k, l, contact[l]);
        }

        double dx = 0.0, dy = 0.0, dyaw = 0.0;
        int stance = 0;
        for (std::size_t l = 0; l < kLegs; ++l) {
            if (!(contact[l] && prev_contact[l]))
                continue;
            ++stance;
            dx += feet[l].x - prev_feet[l].x;
            dy += feet[l].y - prev_feet[l].y;
            dyaw += wrap_pi(std::atan2(feet[l].y, feet[l].x) - std::atan2(prev_feet[l].y, prev_feet[l].x));
        }
        if (stance >= 2) {
            const double bx = -dx / stance;
            const double by = -dy / stance;
            const double c = std::cos(heading), s = std::sin(heading);
            x += c * bx - s * by;
            y += s * bx + c * by;
            heading -= dyaw / stance;
        }
        if (options.record_trajectory)
            res.trajectory.push_back({t, x, y, heading});

        sensors.contact = contact;
        sensors.landed = edges.update(contact);
        prev_feet = feet;
        prev_contact = contact;
    }

    if (res.failed) {
        res.forward_displacement = 0.0;
        res.goal_distance = options.goal_distance;
        res.heading_deg = 0.0;
        return res;
    }
    res.forward_displacement = x;
    res.goal_distance = std::hypot(options.goal_distance - x, y);
    res.heading_deg = std::hypot(x, y) < 1e-6 ? 0.0 : std::atan2(y, x) * 180.0 / std::numbers::pi;
    return res;
}

double max_body_speed(const HexapodConfig& config, double control_dt) {
    const double r_max = config.coxa + config.femur;
    const double r_min = config.coxa + config.femur * std::cos(kS2Range);
    return ((r_max - r_min) + 2.0 * r_max * std::sin(kS1Range)) / control_dt;
}

void write_gait_pbm(std::ostream& out, const GaitDiagram& gait, std::string_view comment) {
    out << "P1\n";
    if (!comment.empty())
        out << "# " << comment << '\n';
    out << kLegs << ' ' << gait.steps() << '\n';
    for (std::size_t t = 0; t < gait.steps(); ++t) {
        for (std::size_t l = 0; l < kLegs; ++l)
            out << (l ? " " : "") << (gait.at(t, l) ? '1' : '0');
        out << '\n';
    }
}

void write_gait_svg(std::ostream& out, const GaitDiagram& gait, std::string_view comment) {
    // Time runs left to right, one row per leg, black = contact.
    constexpr int cell_w = 2, cell_h = 12, margin = 30;
    const std::size_t width = gait.steps() * cell_w + margin + 10;
    const std::size_t height = kLegs * cell_h + 20;
    static constexpr std::array<const char*, kLegs> names{"RF", "RM", "RR", "LR", "LM", "LF"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" shape-rendering=\"crispEdges\">\n";
    if (!comment.empty())
        out << "<!-- " << comment << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t l = 0; l < kLegs; ++l) {
        const std::size_t y = 10 + l * cell_h;
        out << "<text x=\"2\" y=\"" << y + cell_h - 2 << "\" font-size=\"10\">" << names[l] << "</text>\n";
        std::size_t t = 0;
        while (t < gait.steps()) {
            if (!gait.at(t, l)) {
                ++t;
                continue;
            }
            std::size_t end = t;
            while (end < gait.steps() && gait.at(end, l))
                ++end;
            out << "<rect x=\"" << margin + t * cell_w << "\" y=\"" << y << "\" width=\"" << (end - t) * cell_w
                << "\" height=\"" << cell_h - 2 << "\" fill=\"black\"/>\n";
            t = end;
        }
    }
    out << "</svg>\n";
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> samples, std::string_view comment) {
    if (!comment.empty())
        out << "# " << comment << '\n';
    out << "t,x,y,heading\n";
    for (const auto& s : samples) {
        put_double(out, s.t);
        out << ',';
        put_double(out, s.x);
        out << ',';
        put_double(out, s.y);
        out << ',';
        put_double(out, s.heading);
        out << '\n';
    }
}

} // namespace evosig

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "evosig/controllers.hpp"
#include "evosig/diversity.hpp"
#include "evosig/layout.hpp"

namespace evosig {

struct Vec3 {
    double x;
    double y;
    double z;
};

/// Body frame: +x forward, +y left, +z up; origin at the body centre at mount height.
struct HexapodConfig {
    double body_half_length = 0.10;
    double body_half_width = 0.06;
    double coxa = 0.04;
    double femur = 0.08;
    double tibia = 0.10;
    double body_height = 0.09;
    double contact_threshold = 0.002;
    std::array<bool, kLegs> damage_mask{};

    /// Leg mount on the body outline: front legs at +L, middle at 0, rear at -L.
    std::array<double, 2> mount(std::size_t leg) const;
    /// Throws std::invalid_argument when a length is not positive or h is out of reach.
    void validate() const;
};

/// Coxa rotates by s1 about the vertical axis at the mount, femur is elevated
/// by s2, and the tibia stays vertical (s3 = -s2).
Vec3 forward_kinematics(std::size_t leg, double s1, double s2, const HexapodConfig& config);

class GaitDiagram {
public:
    GaitDiagram() = default;
    explicit GaitDiagram(std::size_t steps) : steps_(steps), cells_(steps * kLegs, 0) {}

    std::size_t steps() const { return steps_; }
    bool at(std::size_t t, std::size_t leg) const { return cells_[t * kLegs + leg] != 0; }
    void set(std::size_t t, std::size_t leg, bool contact) { cells_[t * kLegs + leg] = contact; }
    std::size_t leg_contacts(std::size_t leg) const;

    static GaitDiagram from_behavior(const BehaviorVector& bits);

    friend bool operator==(const GaitDiagram&, const GaitDiagram&) = default;

private:
    std::size_t steps_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// Row-major (time-major) flattening: bit t*6 + leg.
BehaviorVector behavior_vector(const GaitDiagram& gait);

struct TrajectorySample {
    double t;
    double x;
    double y;
    double heading; // rad
};

struct EvalResult {
    double forward_displacement = 0.0; // P, m
    double goal_distance = 0.0;        // F, m
    double heading_deg = 0.0;          // Theta
    GaitDiagram gait;
    std::vector<TrajectorySample> trajectory;
    bool failed = false;
};

struct SimulationOptions {
    double duration = 5.0;
    double control_dt = kControlPeriod;
    double goal_distance = 25.0; // goal straight ahead on the initial forward axis
    bool record_trajectory = true;

    std::size_t steps() const;
};

EvalResult simulate(Controller& controller, const HexapodConfig& config, const SimulationOptions& options = {});

/// Upper bound on the body speed implied by the maximum joint excursion per tick.
double max_body_speed(const HexapodConfig& config, double control_dt = kControlPeriod);

/// Comment lines are written in each format's comment syntax when non-empty.
void write_gait_pbm(std::ostream& out, const GaitDiagram& gait, std::string_view comment = {});
void write_gait_svg(std::ostream& out, const GaitDiagram& gait, std::string_view comment = {});
void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> samples,
                          std::string_view comment = {});

} // namespace evosig

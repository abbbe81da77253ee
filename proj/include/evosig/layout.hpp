#pragma once

// Fixed hexapod layout shared by every encoding.
//
// Legs (clockwise seen from above, starting right-front):
//   0 RF, 1 RM, 2 RR, 3 LR, 4 LM, 5 LF
//
// Actuators 0..11 are the twelve controlled servos; actuator k is driven by
// oscillator k+1 in the CPG numbering below. s1 swings the leg horizontally
// (positive = forward), s2 elevates it (positive = up); s3 = -s2 downstream.
//
//   osc  actuator  leg  servo   substrate (x, y)
//    1      0      LF    s2      (-1.0, +1)
//    2      1      LM    s2      (-1.0,  0)
//    3      2      LR    s2      (-1.0, -1)
//    4      3      LF    s1      (-0.5, +1)
//    5      4      LM    s1      (-0.5,  0)
//    6      5      LR    s1      (-0.5, -1)
//    7      6      RF    s1      (+0.5, +1)
//    8      7      RM    s1      (+0.5,  0)
//    9      8      RR    s1      (+0.5, -1)
//   10      9      RF    s2      (+1.0, +1)
//   11     10      RM    s2      (+1.0,  0)
//   12     11      RR    s2      (+1.0, -1)

#include <array>
#include <cstddef>
#include <numbers>

namespace evosig {

inline constexpr std::size_t kLegs = 6;
inline constexpr std::size_t kActuators = 12;

enum class Servo { S1, S2 };

enum Leg : std::size_t { RF = 0, RM = 1, RR = 2, LR = 3, LM = 4, LF = 5 };

inline constexpr double kS1Range = std::numbers::pi / 8.0;
inline constexpr double kS2Range = std::numbers::pi / 4.0;

struct ActuatorInfo {
    std::size_t leg;
    Servo servo;
    double x;
    double y;
};

inline constexpr std::array<ActuatorInfo, kActuators> kActuatorTable{{
    {LF, Servo::S2, -1.0, 1.0},
    {LM, Servo::S2, -1.0, 0.0},
    {LR, Servo::S2, -1.0, -1.0},
    {LF, Servo::S1, -0.5, 1.0},
    {LM, Servo::S1, -0.5, 0.0},
    {LR, Servo::S1, -0.5, -1.0},
    {RF, Servo::S1, 0.5, 1.0},
    {RM, Servo::S1, 0.5, 0.0},
    {RR, Servo::S1, 0.5, -1.0},
    {RF, Servo::S2, 1.0, 1.0},
    {RM, Servo::S2, 1.0, 0.0},
    {RR, Servo::S2, 1.0, -1.0},
}};

/// Actuator index of the s1 / s2 servo of each leg.
inline constexpr std::array<std::size_t, kLegs> kLegS1{6, 7, 8, 5, 4, 3};
inline constexpr std::array<std::size_t, kLegs> kLegS2{9, 10, 11, 2, 1, 0};

/// Contralateral actuator (mirror across the sagittal plane).
inline constexpr std::array<std::size_t, kActuators> kMirrorActuator{9, 10, 11, 6, 7, 8,
                                                                    3, 4, 5, 0, 1, 2};
inline constexpr std::array<std::size_t, kLegs> kMirrorLeg{LF, LM, LR, RR, RM, RF};

inline constexpr double servo_range(Servo s) { return s == Servo::S1 ? kS1Range : kS2Range; }
inline constexpr double actuator_range(std::size_t k) { return servo_range(kActuatorTable[k].servo); }

/// Left legs sit at +y in the body frame.
inline constexpr double leg_side(std::size_t leg) { return leg >= LR ? 1.0 : -1.0; }

} // namespace evosig

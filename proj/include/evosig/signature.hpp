#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evosig/evolution.hpp"
#include "evosig/kernels.hpp"

namespace evosig {

struct SignatureSample {
    std::size_t id = 0;
    double f1 = 0.0;        // (P' - P) / P
    double f2_raw = 0.0;
    double f2 = 0.0;        // clamped to [0, 1]
    double parent_P = 0.0;
    double mutant_P = 0.0;
    bool mutant_failed = false;

    bool lethal() const { return f1 < -1.0; }
};

struct SignatureParent {
    Genome genome;
    double P = 0.0;
    BehaviorVector behavior;
};

/// Evaluates the parent once. The returned P may be <= 0; sampling refuses such parents.
SignatureParent prepare_parent(const Genome& genome, const HexapodConfig& robot, const SimulationOptions& sim = {});

/// n independent mutants of the parent; mutant i draws from stream
/// (seed, "signature/<label>", i). Throws std::invalid_argument when P <= 0.
std::vector<SignatureSample> sample_signature(const SignatureParent& parent, std::size_t n,
                                              const MutationConfig& mutation, std::uint64_t seed,
                                              std::string_view label, const HexapodConfig& robot,
                                              const SimulationOptions& sim = {});

inline constexpr double kLethalFloor = -1.0;
inline constexpr double kStrictFloor = -0.5;
inline constexpr double kDiverseFloor = 0.5;

/// Fraction of samples with f1 > f1_floor and f2 > f2_floor.
double beneficial_proportion(std::span<const SignatureSample> samples, double f1_floor = kLethalFloor,
                             double f2_floor = kDiverseFloor);

inline constexpr Window kSignatureWindow{0.0, 1.0, -3.0, 1.0};

/// KDE over (f2 clamped, f1).
DensityGrid signature_grid(std::span<const SignatureSample> samples, const Window& window = kSignatureWindow,
                           std::size_t nx = 100, std::size_t ny = 100);

struct IntensityLevel {
    std::string name;
    double multiplier;
};

inline const std::vector<IntensityLevel>& intensity_levels() {
    static const std::vector<IntensityLevel> levels{{"low", 0.25}, {"medium", 1.0}, {"high", 4.0}};
    return levels;
}

struct IntensitySweep {
    std::vector<SignatureSample> low;
    std::vector<SignatureSample> medium;
    std::vector<SignatureSample> high;
};

IntensitySweep intensity_sweep(const SignatureParent& parent, std::size_t n, const MutationConfig& mutation,
                               std::uint64_t seed, const HexapodConfig& robot, const SimulationOptions& sim = {});

double median(std::vector<double> values);
std::vector<double> f1_values(std::span<const SignatureSample> samples);
std::vector<double> f2_values(std::span<const SignatureSample> samples);

void write_samples_csv(std::ostream& out, std::span<const SignatureSample> samples, std::string_view comment = {});
/// ny rows (f1 descending, top row = largest f1) of nx comma-separated densities.
void write_grid_csv(std::ostream& out, const DensityGrid& grid, std::string_view comment = {});
/// Heatmap plus the contour around cells holding at least `contour_fraction` of the mass.
void write_heatmap_svg(std::ostream& out, const DensityGrid& grid, std::string_view comment = {},
                       double contour_fraction = 0.00025);

} // namespace evosig

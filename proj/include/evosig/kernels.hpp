#pragma once

// Hot loops of the pipeline. Each kernel has an OpenMP version and a serial
// reference under evosig::serial; both produce bit-identical results.

#include <cstddef>
#include <span>
#include <vector>

#include "evosig/diversity.hpp"
#include "evosig/genome.hpp"
#include "evosig/simulator.hpp"

namespace evosig {

/// Decodes and simulates every genome. Results are ordered like the input.
std::vector<EvalResult> evaluate_batch(std::span<const Genome> genomes, const HexapodConfig& config,
                                       const SimulationOptions& options = {});

/// out[i] = (sum over j of hamming(b_i, b_j)) / n, self included.
std::vector<double> mean_hamming(std::span<const BehaviorVector> behaviors);

struct Window {
    double x_min;
    double x_max;
    double y_min;
    double y_max;
};

struct DensityGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    Window window{};
    double bandwidth_x = 0.0;
    double bandwidth_y = 0.0;
    std::vector<double> density; // row-major: density[iy * nx + ix]

    double cell_width() const { return (window.x_max - window.x_min) / static_cast<double>(nx); }
    double cell_height() const { return (window.y_max - window.y_min) / static_cast<double>(ny); }
    double cell_area() const { return cell_width() * cell_height(); }
    double x_center(std::size_t ix) const { return window.x_min + (static_cast<double>(ix) + 0.5) * cell_width(); }
    double y_center(std::size_t iy) const { return window.y_min + (static_cast<double>(iy) + 0.5) * cell_height(); }
    double at(std::size_t ix, std::size_t iy) const { return density[iy * nx + ix]; }
    /// Sum of density times cell area.
    double mass() const;
};

inline constexpr double kMinBandwidth = 1e-3;

/// Scott's rule sigma * m^(-1/6), floored at kMinBandwidth.
double scott_bandwidth(std::span<const double> values);

/// Product-Gaussian KDE evaluated at the cell centres of an nx-by-ny grid.
DensityGrid kde_grid(std::span<const double> xs, std::span<const double> ys, const Window& window,
                     std::size_t nx = 100, std::size_t ny = 100);

namespace serial {

std::vector<EvalResult> evaluate_batch(std::span<const Genome> genomes, const HexapodConfig& config,
                                       const SimulationOptions& options = {});
std::vector<double> mean_hamming(std::span<const BehaviorVector> behaviors);
DensityGrid kde_grid(std::span<const double> xs, std::span<const double> ys, const Window& window,
                     std::size_t nx = 100, std::size_t ny = 100);

} // namespace serial

/// Sets the OpenMP team size; 0 keeps the runtime default.
void set_worker_threads(int threads);
int worker_threads();

} // namespace evosig

#include "evosig/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

#include <omp.h>

namespace evosig {

namespace {

EvalResult evaluate_one(const Genome& genome, const HexapodConfig& config, const SimulationOptions& options) {
    auto controller = decode(genome);
    return simulate(*controller, config, options);
}

void check_lengths(std::span<const BehaviorVector> behaviors) {
    for (const auto& b : behaviors)
        if (b.size() != behaviors.front().size())
            throw std::invalid_argument("behavior vectors differ in length");
}

double hamming_sum(std::span<const BehaviorVector> behaviors, std::size_t i) {
    // Integer accumulation keeps the mean independent of summation order.
    std::size_t total = 0;
    for (const auto& other : behaviors)
        total += hamming(behaviors[i], other);
    return static_cast<double>(total) / static_cast<double>(behaviors.size());
}

struct KdeSetup {
    double hx;
    double hy;
    double norm;
};

KdeSetup kde_setup(std::span<const double> xs, std::span<const double> ys, std::size_t nx, std::size_t ny,
                   const Window& window) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("KDE needs matching, non-empty coordinate lists");
    if (nx == 0 || ny == 0 || !(window.x_max > window.x_min) || !(window.y_max > window.y_min))
        throw std::invalid_argument("invalid KDE grid");
    const double hx = scott_bandwidth(xs);
    const double hy = scott_bandwidth(ys);
    return {hx, hy, 1.0 / (2.0 * std::numbers::pi * hx * hy * static_cast<double>(xs.size()))};
}

// Per-sample kernel values along one axis: k[s * cells + c].
std::vector<double> axis_kernel(std::span<const double> v, double h, std::size_t cells, double lo, double step) {
    std::vector<double> k(v.size() * cells);
    for (std::size_t s = 0; s < v.size(); ++s)
        for (std::size_t c = 0; c < cells; ++c) {
            const double u = (lo + (static_cast<double>(c) + 0.5) * step - v[s]) / h;
            k[s * cells + c] = std::exp(-0.5 * u * u);
        }
    return k;
}

void kde_row(DensityGrid& g, std::size_t iy, const std::vector<double>& kx, const std::vector<double>& ky,
             std::size_t m, double norm) {
    double* row = &g.density[iy * g.nx];
    for (std::size_t s = 0; s < m; ++s) {
        const double wy = ky[s * g.ny + iy];
        if (wy == 0.0)
            continue;
        const double* kxs = &kx[s * g.nx];
        for (std::size_t ix = 0; ix < g.nx; ++ix)
            row[ix] += wy * kxs[ix];
    }
    for (std::size_t ix = 0; ix < g.nx; ++ix)
        row[ix] *= norm;
}

DensityGrid empty_grid(const Window& window, std::size_t nx, std::size_t ny, const KdeSetup& setup) {
    DensityGrid g;
    g.nx = nx;
    g.ny = ny;
    g.window = window;
    g.bandwidth_x = setup.hx;
    g.bandwidth_y = setup.hy;
    g.density.assign(nx * ny, 0.0);
    return g;
}

} // namespace

double DensityGrid::mass() const {
    double s = 0.0;
    for (double d : density)
        s += d;
    return s * cell_area();
}

double scott_bandwidth(std::span<const double> values) {
    const std::size_t m = values.size();
    if (m < 2)
        return kMinBandwidth;
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / static_cast<double>(m - 1));
    return std::max(sigma * std::pow(static_cast<double>(m), -1.0 / 6.0), kMinBandwidth);
}

std::vector<EvalResult> evaluate_batch(std::span<const Genome> genomes, const HexapodConfig& config,
                                       const SimulationOptions& options) {
    const auto n = static_cast<std::ptrdiff_t>(genomes.size());
    std::vector<EvalResult> out(genomes.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = evaluate_one(genomes[i], config, options);
        } catch (...) {
#pragma omp critical(evosig_eval_error)
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
    return out;
}

std::vector<double> mean_hamming(std::span<const BehaviorVector> behaviors) {
    check_lengths(behaviors);
    const auto n = static_cast<std::ptrdiff_t>(behaviors.size());
    std::vector<double> out(behaviors.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = hamming_sum(behaviors, static_cast<std::size_t>(i));
    return out;
}

DensityGrid kde_grid(std::span<const double> xs, std::span<const double> ys, const Window& window,
                     std::size_t nx, std::size_t ny) {
    const KdeSetup setup = kde_setup(xs, ys, nx, ny, window);
    DensityGrid g = empty_grid(window, nx, ny, setup);
    const auto kx = axis_kernel(xs, setup.hx, nx, window.x_min, g.cell_width());
    const auto ky = axis_kernel(ys, setup.hy, ny, window.y_min, g.cell_height());
    const auto rows = static_cast<std::ptrdiff_t>(ny);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t iy = 0; iy < rows; ++iy)
        kde_row(g, static_cast<std::size_t>(iy), kx, ky, xs.size(), setup.norm);
    return g;
}

namespace serial {

std::vector<EvalResult> evaluate_batch(std::span<const Genome> genomes, const HexapodConfig& config,
                                       const SimulationOptions& options) {
    std::vector<EvalResult> out;
    out.reserve(genomes.size());
    for (const auto& g : genomes)
        out.push_back(evaluate_one(g, config, options));
    return out;
}

std::vector<double> mean_hamming(std::span<const BehaviorVector> behaviors) {
    check_lengths(behaviors);
    std::vector<double> out(behaviors.size());
    for (std::size_t i = 0; i < behaviors.size(); ++i)
        out[i] = hamming_sum(behaviors, i);
    return out;
}

DensityGrid kde_grid(std::span<const double> xs, std::span<const double> ys, const Window& window,
                     std::size_t nx, std::size_t ny) {
    const KdeSetup setup = kde_setup(xs, ys, nx, ny, window);
    DensityGrid g = empty_grid(window, nx, ny, setup);
    const auto kx = axis_kernel(xs, setup.hx, nx, window.x_min, g.cell_width());
    const auto ky = axis_kernel(ys, setup.hy, ny, window.y_min, g.cell_height());
    for (std::size_t iy = 0; iy < ny; ++iy)
        kde_row(g, iy, kx, ky, xs.size(), setup.norm);
    return g;
}

} // namespace serial

void set_worker_threads(int threads) {
    if (threads > 0)
        omp_set_num_threads(threads);
}

int worker_threads() {
    return omp_get_max_threads();
}

} // namespace evosig

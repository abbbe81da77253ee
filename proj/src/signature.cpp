#include "evosig/signature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace evosig {

namespace {

void put_double(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

// White -> dark blue ramp.
std::string heat_colour(double u) {
    u = std::clamp(u, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 * (1.0 - u)));
    const int g = static_cast<int>(std::lround(255.0 * (1.0 - 0.8 * u)));
    const int b = static_cast<int>(std::lround(255.0 * (1.0 - 0.45 * u)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace

SignatureParent prepare_parent(const Genome& genome, const HexapodConfig& robot, const SimulationOptions& sim) {
    SimulationOptions quiet = sim;
    quiet.record_trajectory = false;
    auto controller = decode(genome);
    const EvalResult e = simulate(*controller, robot, quiet);
    return {genome, e.forward_displacement, behavior_vector(e.gait)};
}

std::vector<SignatureSample> sample_signature(const SignatureParent& parent, std::size_t n,
                                              const MutationConfig& mutation, std::uint64_t seed,
                                              std::string_view label, const HexapodConfig& robot,
                                              const SimulationOptions& sim) {
    if (!(parent.P > 0.0))
        throw std::invalid_argument("parent forward displacement is not positive; f1 is undefined");
    const std::string purpose = "signature/" + std::string(label);
    std::vector<Genome> mutants;
    mutants.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = make_stream(seed, purpose, i);
        mutants.push_back(mutate(parent.genome, mutation, rng));
    }
    SimulationOptions quiet = sim;
    quiet.record_trajectory = false;
    const auto evals = evaluate_batch(mutants, robot, quiet);

    std::vector<SignatureSample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& s = out[i];
        s.id = i;
        s.parent_P = parent.P;
        s.mutant_P = evals[i].forward_displacement;
        s.mutant_failed = evals[i].failed;
        s.f1 = (s.mutant_P - parent.P) / parent.P;
        s.f2_raw = nmi_distance(parent.behavior, behavior_vector(evals[i].gait));
        s.f2 = std::clamp(s.f2_raw, 0.0, 1.0);
    }
    return out;
}

double beneficial_proportion(std::span<const SignatureSample> samples, double f1_floor, double f2_floor) {
    if (samples.empty())
        throw std::invalid_argument("beneficial proportion of an empty sample set");
    std::size_t hits = 0;
    for (const auto& s : samples)
        hits += (s.f1 > f1_floor && s.f2 > f2_floor);
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

DensityGrid signature_grid(std::span<const SignatureSample> samples, const Window& window, std::size_t nx,
                           std::size_t ny) {
    return kde_grid(f2_values(samples), f1_values(samples), window, nx, ny);
}

IntensitySweep intensity_sweep(const SignatureParent& parent, std::size_t n, const MutationConfig& mutation,
                               std::uint64_t seed, const HexapodConfig& robot, const SimulationOptions& sim) {
    const auto& levels = intensity_levels();
    IntensitySweep sweep;
    std::vector<SignatureSample>* slots[] = {&sweep.low, &sweep.medium, &sweep.high};
    for (std::size_t k = 0; k < levels.size(); ++k)
        *slots[k] = sample_signature(parent, n, mutation.with_intensity(levels[k].multiplier), seed, levels[k].name,
                                     robot, sim);
    return sweep;
}

double median(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> f1_values(std::span<const SignatureSample> samples) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples)
        v.push_back(s.f1);
    return v;
}

std::vector<double> f2_values(std::span<const SignatureSample> samples) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples)
        v.push_back(s.f2);
    return v;
}

void write_samples_csv(std::ostream& out, std::span<const SignatureSample> samples, std::string_view comment) {
    if (!comment.empty())
        out << "# " << comment << '\n';
    out << "sample_id,f1_raw,f2_raw,f2_clamped,P_parent,P_mutant\n";
    for (const auto& s : samples) {
        out << s.id;
        for (double v : {s.f1, s.f2_raw, s.f2, s.parent_P, s.mutant_P}) {
            out << ',';
            put_double(out, v);
        }
        out << '\n';
    }
}

void write_grid_csv(std::ostream& out, const DensityGrid& grid, std::string_view comment) {
    if (!comment.empty())
        out << "# " << comment << '\n';
    out << "# f2 in [";
    put_double(out, grid.window.x_min);
    out << ',';
    put_double(out, grid.window.x_max);
    out << "] left to right; f1 in [";
    put_double(out, grid.window.y_min);
    out << ',';
    put_double(out, grid.window.y_max);
    out << "] bottom to top; bandwidths ";
    put_double(out, grid.bandwidth_x);
    out << ' ';
    put_double(out, grid.bandwidth_y);
    out << '\n';
    for (std::size_t r = 0; r < grid.ny; ++r) {
        const std::size_t iy = grid.ny - 1 - r;
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            if (ix)
                out << ',';
            put_double(out, grid.at(ix, iy));
        }
        out << '\n';
    }
}

void write_heatmap_svg(std::ostream& out, const DensityGrid& grid, std::string_view comment,
                       double contour_fraction) {
    constexpr int cell = 4, left = 40, top = 10, bottom = 30;
    const std::size_t w = grid.nx * cell, h = grid.ny * cell;
    double peak = 0.0;
    for (double d : grid.density)
        peak = std::max(peak, d);
    const double threshold = contour_fraction / grid.cell_area();

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + left + 10 << "\" height=\"" << h + top + bottom
        << "\" shape-rendering=\"crispEdges\">\n";
    if (!comment.empty())
        out << "<!-- " << comment << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Column (ix) runs along f2, row 0 is the top (largest f1).
    auto px = [&](std::size_t ix) { return left + static_cast<long>(ix) * cell; };
    auto py = [&](std::size_t row) { return top + static_cast<long>(row) * cell; };
    for (std::size_t row = 0; row < grid.ny; ++row) {
        const std::size_t iy = grid.ny - 1 - row;
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const double d = grid.at(ix, iy);
            if (d <= 0.0 || peak <= 0.0)
                continue;
            out << "<rect x=\"" << px(ix) << "\" y=\"" << py(row) << "\" width=\"" << cell << "\" height=\"" << cell
                << "\" fill=\"" << heat_colour(d / peak) << "\"/>\n";
        }
    }

    auto above = [&](long ix, long row) {
        if (ix < 0 || row < 0 || ix >= static_cast<long>(grid.nx) || row >= static_cast<long>(grid.ny))
            return false;
        return grid.at(static_cast<std::size_t>(ix), grid.ny - 1 - static_cast<std::size_t>(row)) >= threshold;
    };
    out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    for (long row = 0; row < static_cast<long>(grid.ny); ++row)
        for (long ix = 0; ix < static_cast<long>(grid.nx); ++ix) {
            if (!above(ix, row))
                continue;
            const long x0 = px(ix), y0 = py(row), x1 = x0 + cell, y1 = y0 + cell;
            if (!above(ix, row - 1))
                out << 'M' << x0 << ',' << y0 << 'H' << x1;
            if (!above(ix, row + 1))
                out << 'M' << x0 << ',' << y1 << 'H' << x1;
            if (!above(ix - 1, row))
                out << 'M' << x0 << ',' << y0 << 'V' << y1;
            if (!above(ix + 1, row))
                out << 'M' << x1 << ',' << y0 << 'V' << y1;
        }
    out << "\"/>\n";

    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"none\" stroke=\"gray\"/>\n";
    out << "<text x=\"" << left + w / 2 << "\" y=\"" << top + h + 20 << "\" font-size=\"12\" text-anchor=\"middle\">"
        << "f2 (gait diversity)</text>\n";
    out << "<text x=\"12\" y=\"" << top + h / 2 << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 12 "
        << top + h / 2 << ")\">f1 (fitness change)</text>\n";
    out << "</svg>\n";
}

} // namespace evosig

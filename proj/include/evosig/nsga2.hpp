#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace evosig {

inline constexpr std::size_t kObjectives = 3;
using Objectives = std::array<double, kObjectives>;

/// a dominates b under maximization: no worse everywhere, strictly better somewhere.
bool dominates(const Objectives& a, const Objectives& b);

/// Fronts of indices, front 0 first; indices ascend within each front.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const Objectives> points);

/// Crowding distance of each member of `front` (same order). Boundary members
/// get +inf; objectives with zero range contribute nothing.
std::vector<double> crowding_distance(std::span<const std::size_t> front, std::span<const Objectives> points);

struct RankInfo {
    std::size_t rank;
    double crowding;
};

/// Rank and crowding for every point.
std::vector<RankInfo> rank_and_crowd(std::span<const Objectives> points);

/// Indices of the `keep` survivors: whole fronts in order, then the most
/// crowded-apart members of the split front (ties broken by lower index).
std::vector<std::size_t> truncate_population(std::span<const Objectives> points, std::size_t keep);

/// Binary tournament winner on (lower rank, larger crowding, lower index).
std::size_t tournament(const std::vector<RankInfo>& info, std::size_t a, std::size_t b);

} // namespace evosig

#include "evosig/nsga2.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace evosig {

bool dominates(const Objectives& a, const Objectives& b) {
    bool better = false;
    for (std::size_t m = 0; m < kObjectives; ++m) {
        if (a[m] < b[m])
            return false;
        if (a[m] > b[m])
            better = true;
    }
    return better;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<const Objectives> points) {
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q)
                continue;
            if (dominates(points[p], points[q]))
                dominated[p].push_back(q);
            else if (dominates(points[q], points[p]))
                ++count[p];
        }
        if (count[p] == 0)
            current.push_back(p);
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : current)
            for (std::size_t q : dominated[p])
                if (--count[q] == 0)
                    next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(std::span<const std::size_t> front, std::span<const Objectives> points) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < kObjectives; ++m) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double va = points[front[a]][m], vb = points[front[b]][m];
            return va < vb || (va == vb && front[a] < front[b]);
        });
        const double lo = points[front[order.front()]][m];
        const double hi = points[front[order.back()]][m];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (!(hi > lo))
            continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            dist[order[k]] += (points[front[order[k + 1]]][m] - points[front[order[k - 1]]][m]) / (hi - lo);
    }
    return dist;
}

std::vector<RankInfo> rank_and_crowd(std::span<const Objectives> points) {
    std::vector<RankInfo> info(points.size(), {0, 0.0});
    const auto fronts = fast_nondominated_sort(points);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        const auto d = crowding_distance(fronts[r], points);
        for (std::size_t k = 0; k < fronts[r].size(); ++k)
            info[fronts[r][k]] = {r, d[k]};
    }
    return info;
}

std::vector<std::size_t> truncate_population(std::span<const Objectives> points, std::size_t keep) {
    std::vector<std::size_t> survivors;
    for (const auto& front : fast_nondominated_sort(points)) {
        if (survivors.size() + front.size() <= keep) {
            survivors.insert(survivors.end(), front.begin(), front.end());
            continue;
        }
        const auto d = crowding_distance(front, points);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
        for (std::size_t k = 0; survivors.size() < keep; ++k)
            survivors.push_back(front[order[k]]);
        break;
    }
    return survivors;
}

std::size_t tournament(const std::vector<RankInfo>& info, std::size_t a, std::size_t b) {
    if (info[a].rank != info[b].rank)
        return info[a].rank < info[b].rank ? a : b;
    if (info[a].crowding != info[b].crowding)
        return info[a].crowding > info[b].crowding ? a : b;
    return std::min(a, b);
}

} // namespace evosig

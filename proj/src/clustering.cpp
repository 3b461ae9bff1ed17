#include "frogfilter/engine.hpp"

#include "frogfilter/errors.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

namespace frogfilter {

namespace {

using Point = std::array<double, 2>;

constexpr int kKMeansRounds = 10;

double sq_dist(const Point& p, const Point& q) {
    const double dx = p[0] - q[0];
    const double dy = p[1] - q[1];
    return dx * dx + dy * dy;
}

// Nearest centroid among those accepted by `open`; ties go to the lower index.
template <typename Open>
std::pair<std::size_t, double> nearest(const Point& p, const std::vector<Point>& centroids, Open open) {
    std::size_t arg = centroids.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        if (!open(c)) {
            continue;
        }
        const double d = sq_dist(p, centroids[c]);
        if (d < best) {
            best = d;
            arg = c;
        }
    }
    return {arg, best};
}

} // namespace

std::vector<Memeplex> cluster_memeplexes(std::span<const Frog> population, std::size_t count) {
    const std::size_t n = population.size();
    if (count == 0 || n == 0 || n % count != 0) {
        throw ConfigError("population of " + std::to_string(n) + " cannot be split into " + std::to_string(count) +
                          " equal memeplexes");
    }
    std::vector<Point> points(n);
    for (std::size_t i = 0; i < n; ++i) {
        points[i] = {population[i].costs.j_pass, population[i].costs.j_stop};
    }

    // Seed centroids at evenly spaced ranks of the module ordering, fittest first.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return population[l].mod_value > population[r].mod_value; });
    std::vector<Point> centroids(count);
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t rank = count == 1 ? 0 : (c * (n - 1) + (count - 1) / 2) / (count - 1);
        centroids[c] = points[order[rank]];
    }

    auto any = [](std::size_t) { return true; };
    for (int round = 0; round < kKMeansRounds; ++round) {
        std::vector<Point> sums(count, Point{0.0, 0.0});
        std::vector<std::size_t> sizes(count, 0);
        for (const auto& p : points) {
            const auto c = nearest(p, centroids, any).first;
            sums[c][0] += p[0];
            sums[c][1] += p[1];
            ++sizes[c];
        }
        for (std::size_t c = 0; c < count; ++c) {
            if (sizes[c] > 0) {
                centroids[c] = {sums[c][0] / static_cast<double>(sizes[c]), sums[c][1] / static_cast<double>(sizes[c])};
            }
        }
    }

    // Capacity-constrained greedy assignment: repeatedly place the unassigned frog closest to
    // a centroid that still has room.
    const std::size_t capacity = n / count;
    std::vector<Memeplex> memeplexes(count);
    for (auto& mp : memeplexes) {
        mp.members.reserve(capacity);
    }
    std::vector<bool> assigned(n, false);
    auto open = [&](std::size_t c) { return memeplexes[c].members.size() < capacity; };
    for (std::size_t placed = 0; placed < n; ++placed) {
        std::size_t pick = n;
        std::size_t target = count;
        double pick_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (assigned[i]) {
                continue;
            }
            const auto [c, d] = nearest(points[i], centroids, open);
            if (pick == n || d < pick_dist) {
                pick = i;
                target = c;
                pick_dist = d;
            }
        }
        assigned[pick] = true;
        memeplexes[target].members.push_back(pick);
    }
    for (auto& mp : memeplexes) {
        std::sort(mp.members.begin(), mp.members.end());
    }
    return memeplexes;
}

} // namespace frogfilter

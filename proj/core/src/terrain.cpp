#include "hydromission/terrain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace hydromission {

CellClass TerrainGrid::class_at(double x, double y) const {
    if (!in_bounds(x, y)) {
        return CellClass::Coast;
    }
    const int cx = static_cast<int>(x / cell_size);
    const int cy = static_cast<int>(y / cell_size);
    return classes[static_cast<std::size_t>(cy) * width + cx];
}

double TerrainGrid::risk_at(double x, double y) const {
    if (!in_bounds(x, y)) {
        return 0.0;
    }
    const int cx = static_cast<int>(x / cell_size);
    const int cy = static_cast<int>(y / cell_size);
    return risk[static_cast<std::size_t>(cy) * width + cx];
}

TerrainGrid cluster_map(const GrayImage& image, int k, double cell_size, double depth_extent) {
    if (image.width <= 0 || image.height <= 0 || image.pixels.empty()) {
        throw std::invalid_argument("cluster_map: empty image");
    }
    if (k != 3) {
        throw std::invalid_argument("cluster_map: class count must be 3");
    }

    TerrainGrid grid;
    grid.width = image.width;
    grid.height = image.height;
    grid.cell_size = cell_size;
    grid.depth_extent = depth_extent;
    grid.classes.assign(image.pixels.size(), CellClass::Water);
    grid.risk.assign(image.pixels.size(), 0.0);

    // Intensity histogram drives both the centroid seeding and
    // the Lloyd iterations; 256 bins make each pass O(1) in image size.
    std::array<std::size_t, 256> hist{};
    for (std::uint8_t p : image.pixels) {
        ++hist[p];
    }
    int lo = 0;
    while (hist[lo] == 0) ++lo;
    int hi = 255;
    while (hist[hi] == 0) --hi;
    if (lo == hi) {
        grid.degenerate = true;
        return grid;  // single-intensity image: all Water
    }

    // Seeds span the occupied intensity range rather than the mass
    // quantiles: water usually dominates the histogram, and mass-based
    // seeds would start all three centroids inside its band.
    std::array<double, 3> centroid = {static_cast<double>(lo), 0.5 * (lo + hi),
                                      static_cast<double>(hi)};
    std::array<double, 3> next_centroid{};
    std::array<std::size_t, 3> count{};
    std::array<int, 256> assign{};
    for (int iter = 0; iter < 64; ++iter) {
        next_centroid.fill(0.0);
        count.fill(0);
        for (int i = 0; i < 256; ++i) {
            if (hist[i] == 0) {
                continue;
            }
            int best = 0;
            double best_d = std::abs(i - centroid[0]);
            for (int c = 1; c < 3; ++c) {
                const double d = std::abs(i - centroid[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assign[i] = best;
            next_centroid[best] += static_cast<double>(i) * static_cast<double>(hist[i]);
            count[best] += hist[i];
        }
        bool stable = true;
        for (int c = 0; c < 3; ++c) {
            if (count[c] == 0) {
                continue;  // empty cluster keeps its centroid and collapses below
            }
            const double m = next_centroid[c] / static_cast<double>(count[c]);
            if (std::abs(m - centroid[c]) > 1e-9) {
                stable = false;
            }
            centroid[c] = m;
        }
        if (stable) {
            break;
        }
    }

    // Order surviving clusters by centroid intensity: darkest -> Coast,
    // lightest -> Water, a middle one (if any) -> Uncertain.
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return centroid[a] < centroid[b]; });
    std::array<CellClass, 3> cluster_class{};
    std::vector<int> alive;
    for (int c : order) {
        if (count[c] > 0) {
            alive.push_back(c);
        }
    }
    if (alive.size() == 1) {
        grid.degenerate = true;
        cluster_class[alive[0]] = CellClass::Water;
    } else if (alive.size() == 2) {
        cluster_class[alive[0]] = CellClass::Coast;
        cluster_class[alive[1]] = CellClass::Water;
    } else {
        cluster_class[alive[0]] = CellClass::Coast;
        cluster_class[alive[1]] = CellClass::Uncertain;
        cluster_class[alive[2]] = CellClass::Water;
    }
    // map empty clusters to Water so the lookup below is total
    for (int c = 0; c < 3; ++c) {
        if (count[c] == 0) {
            cluster_class[c] = CellClass::Water;
        }
    }

    const double coast_c = centroid[order[0]];
    const double water_c = centroid[order[2]];
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const int intensity = image.pixels[i];
        const CellClass cls = cluster_class[assign[intensity]];
        grid.classes[i] = cls;
        if (cls == CellClass::Uncertain) {
            // darker uncertain cells carry more risk, scaled into (0, 0.35]
            double t = (water_c - intensity) / std::max(1.0, water_c - coast_c);
            grid.risk[i] = std::clamp(0.35 * t, 0.01, 0.35);
        }
    }
    return grid;
}

}  // namespace hydromission

#pragma once

#include <vector>

#include "hydromission/geometry.hpp"
#include "hydromission/maps.hpp"

namespace hydromission {

enum class CellClass { Coast, Uncertain, Water };

struct TerrainGrid {
    int width = 0;
    int height = 0;
    double cell_size = 10.0;     // meters per pixel
    double depth_extent = 1000.0;  // meters (z)
    std::vector<CellClass> classes;  // row-major
    std::vector<double> risk;        // 0 for Water, (0, 0.35] for Uncertain
    bool degenerate = false;         // single-intensity input collapsed to all-Water

    double extent_x() const { return width * cell_size; }
    double extent_y() const { return height * cell_size; }

    bool in_bounds(double x, double y) const {
        return x >= 0.0 && y >= 0.0 && x < extent_x() && y < extent_y();
    }
    bool in_bounds(const Vec3& p) const {
        return in_bounds(p.x, p.y) && p.z >= 0.0 && p.z <= depth_extent;
    }

    // Out-of-extent positions read as Coast (impassable).
    CellClass class_at(double x, double y) const;
    double risk_at(double x, double y) const;
};

// k-means on pixel intensity, k = 3, centroids seeded across the
// occupied intensity range.
// Classes follow mean-intensity order: darkest cluster -> Coast,
// mid -> Uncertain, lightest -> Water. Empty clusters collapse, so a
// two-intensity image yields Coast and Water only, and a single-intensity
// image yields an all-Water grid with the degenerate flag set.
TerrainGrid cluster_map(const GrayImage& image, int k, double cell_size, double depth_extent);

}  // namespace hydromission

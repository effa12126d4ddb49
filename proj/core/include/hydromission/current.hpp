#pragma once

#include <vector>

#include "hydromission/geometry.hpp"
#include "hydromission/rng.hpp"

namespace hydromission {

// One vortex of the layered current model. The horizontal field is a
// Gaussian-core swirl around the center; the vertical component is a
// Gaussian bump scaled by vertical_scale. Each depth layer owns an
// independent set of vortices.
struct VortexParams {
    Vec2 center;                // meters
    double strength = 0.0;      // circulation-like scalar
    double radius = 500.0;      // core radius, meters (> 0)
    double vertical_scale = 0.1;
    int layer = 0;
    double update_rate = 0.0;   // per-step gain on the stochastic recursion
    double sigma_center_x = 0.0;
    double sigma_center_y = 0.0;
    double sigma_radius = 0.0;
    double sigma_strength = 0.0;
};

struct CurrentSample {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    double magnitude = 0.0;
    double psi = 0.0;    // horizontal direction, atan2(v, u)
    double theta = 0.0;  // vertical direction, asin(w / |V|)
};

CurrentSample finalize_sample(double u, double v, double w);

class CurrentField {
  public:
    CurrentField() = default;
    CurrentField(std::vector<VortexParams> vortices, int layer_count, double depth_extent);

    int layer_count() const { return layer_count_; }
    int layer_of(double z) const;
    const std::vector<VortexParams>& vortices() const { return vortices_; }

    // Superposes every vortex of the depth band containing p.z.
    // Horizontal components are zero within center_epsilon of a vortex
    // center (regularization of the singular denominator).
    CurrentSample sample(const Vec3& p) const;

    // Advances every vortex one update step: center/radius/strength gain
    // update_rate-scaled Gaussian increments; radius clamps at radius_floor.
    void evolve(Rng& rng);

    double center_epsilon = 1.0;  // meters
    double radius_floor = 10.0;   // meters

  private:
    std::vector<VortexParams> vortices_;
    int layer_count_ = 1;
    double depth_extent_ = 1000.0;
};

}  // namespace hydromission

#include "hydromission/current.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hydromission {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CurrentSample finalize_sample(double u, double v, double w) {
    CurrentSample s;
    s.u = u;
    s.v = v;
    s.w = w;
    s.magnitude = std::sqrt(u * u + v * v + w * w);
    if (s.magnitude > 0.0) {
        s.psi = std::atan2(v, u);
        s.theta = std::asin(std::clamp(w / s.magnitude, -1.0, 1.0));
    }
    return s;
}

CurrentField::CurrentField(std::vector<VortexParams> vortices, int layer_count, double depth_extent)
    : vortices_(std::move(vortices)), layer_count_(layer_count), depth_extent_(depth_extent) {
    if (layer_count_ < 1) {
        throw std::invalid_argument("CurrentField: layer_count must be >= 1");
    }
    for (const VortexParams& v : vortices_) {
        if (v.radius <= 0.0) {
            throw std::invalid_argument("CurrentField: vortex radius must be > 0");
        }
        if (v.layer < 0 || v.layer >= layer_count_) {
            throw std::invalid_argument("CurrentField: vortex layer out of range");
        }
    }
}

int CurrentField::layer_of(double z) const {
    const double band = depth_extent_ / layer_count_;
    int layer = static_cast<int>(z / band);
    return std::clamp(layer, 0, layer_count_ - 1);
}

CurrentSample CurrentField::sample(const Vec3& p) const {
    const int layer = layer_of(p.z);
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    for (const VortexParams& vx : vortices_) {
        if (vx.layer != layer) {
            continue;
        }
        const double dx = p.x - vx.center.x;
        const double dy = p.y - vx.center.y;
        const double r2 = dx * dx + dy * dy;
        if (r2 > center_epsilon * center_epsilon) {
            // Gaussian-core swirl: tangential speed strength/(2*pi*r) * (1 - exp(-r^2/l^2))
            const double swirl =
                vx.strength / (kTwoPi * r2) * (1.0 - std::exp(-r2 / (vx.radius * vx.radius)));
            u += -swirl * dy;
            v += swirl * dx;
        }
        // Vertical bump: Gaussian density with diagonal covariance diag(l, l)
        w += vx.vertical_scale * vx.strength * std::exp(-r2 / (2.0 * vx.radius)) /
             (kTwoPi * vx.radius);
    }
    return finalize_sample(u, v, w);
}

void CurrentField::evolve(Rng& rng) {
    for (VortexParams& vx : vortices_) {
        vx.center.x += vx.update_rate * rng.normal(0.0, vx.sigma_center_x);
        vx.center.y += vx.update_rate * rng.normal(0.0, vx.sigma_center_y);
        vx.radius = std::max(radius_floor, vx.radius + vx.update_rate * rng.normal(0.0, vx.sigma_radius));
        vx.strength += vx.update_rate * rng.normal(0.0, vx.sigma_strength);
    }
}

}  // namespace hydromission

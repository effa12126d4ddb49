#pragma once

#include <vector>

#include "hydromission/current.hpp"
#include "hydromission/geometry.hpp"
#include "hydromission/rng.hpp"
#include "hydromission/terrain.hpp"

namespace hydromission {

enum class ObstacleKind { Static, Afloat, SelfMotivated };

struct Obstacle {
    ObstacleKind kind = ObstacleKind::Static;
    Vec3 position;
    double radius = 1.0;        // meters (> 0)
    double uncertainty = 0.0;   // sensing/growth ratio (>= 0)
    Vec3 intrinsic_velocity;    // m/s, zero unless SelfMotivated
    double age = 0.0;           // seconds since creation
    bool out_of_bounds = false; // ignored by collision checks once set

    // Collision boundary inflated linearly with elapsed time.
    double effective_radius(double growth_rate) const {
        return radius + growth_rate * uncertainty * age;
    }
};

// Static obstacles hold position; Afloat drift with the current;
// SelfMotivated add their intrinsic velocity on top. All ages advance.
void step_obstacles(std::vector<Obstacle>& obstacles, const CurrentField& field,
                    const TerrainGrid& terrain, double dt);

// Returns obstacles within sensor_range of vehicle_pos with positions
// perturbed per-axis by zero-mean Gaussian noise of std uncertainty.
std::vector<Obstacle> sense_obstacles(const std::vector<Obstacle>& obstacles,
                                      const Vec3& vehicle_pos, double sensor_range, Rng& rng);

}  // namespace hydromission

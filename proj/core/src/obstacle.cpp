#include "hydromission/obstacle.hpp"

#include <stdexcept>

namespace hydromission {

void step_obstacles(std::vector<Obstacle>& obstacles, const CurrentField& field,
                    const TerrainGrid& terrain, double dt) {
    if (dt <= 0.0) {
        throw std::invalid_argument("step_obstacles: dt must be > 0");
    }
    for (Obstacle& ob : obstacles) {
        ob.age += dt;
        if (ob.kind != ObstacleKind::Static) {
            const CurrentSample c = field.sample(ob.position);
            Vec3 vel{c.u, c.v, c.w};
            if (ob.kind == ObstacleKind::SelfMotivated) {
                vel = vel + ob.intrinsic_velocity;
            }
            ob.position = ob.position + vel * dt;
        }
        if (!terrain.in_bounds(ob.position)) {
            ob.out_of_bounds = true;
        }
    }
}

std::vector<Obstacle> sense_obstacles(const std::vector<Obstacle>& obstacles,
                                      const Vec3& vehicle_pos, double sensor_range, Rng& rng) {
    if (sensor_range <= 0.0) {
        throw std::invalid_argument("sense_obstacles: sensor_range must be > 0");
    }
    std::vector<Obstacle> observed;
    for (const Obstacle& ob : obstacles) {
        if (distance(ob.position, vehicle_pos) > sensor_range) {
            continue;
        }
        Obstacle seen = ob;
        seen.position.x += rng.normal(0.0, ob.uncertainty);
        seen.position.y += rng.normal(0.0, ob.uncertainty);
        seen.position.z += rng.normal(0.0, ob.uncertainty);
        observed.push_back(seen);
    }
    return observed;
}

}  // namespace hydromission

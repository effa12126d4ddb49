#pragma once

#include <memory>
#include <vector>

#include "hydromission/current.hpp"
#include "hydromission/obstacle.hpp"
#include "hydromission/rng.hpp"
#include "hydromission/terrain.hpp"

namespace hydromission {

// Immutable view of the world at one instant. Planner evaluations
// against one snapshot all see identical data.
struct WorldSnapshot {
    double time = 0.0;
    const TerrainGrid* terrain = nullptr;
    CurrentField field;
    std::vector<Obstacle> obstacles;
    double obstacle_growth_rate = 0.01;  // effective-radius growth per second per unit uncertainty
};

// Owns the evolving environment. Mutation happens only between planner
// invocations; snapshots are safe to share.
class World {
  public:
    World(TerrainGrid terrain, CurrentField field, std::vector<Obstacle> obstacles,
          std::uint64_t seed, double obstacle_growth_rate = 0.01)
        : terrain_(std::make_shared<TerrainGrid>(std::move(terrain))),
          field_(std::move(field)),
          obstacles_(std::move(obstacles)),
          rng_(seed),
          growth_rate_(obstacle_growth_rate) {}

    const TerrainGrid& terrain() const { return *terrain_; }
    const CurrentField& field() const { return field_; }
    double time() const { return time_; }

    // One T-Series step: field evolution followed by obstacle advection.
    void advance(double dt) {
        field_.evolve(rng_);
        step_obstacles(obstacles_, field_, *terrain_, dt);
        time_ += dt;
    }

    WorldSnapshot snapshot() const {
        return WorldSnapshot{time_, terrain_.get(), field_, obstacles_, growth_rate_};
    }

  private:
    std::shared_ptr<TerrainGrid> terrain_;
    CurrentField field_;
    std::vector<Obstacle> obstacles_;
    Rng rng_;
    double growth_rate_;
    double time_ = 0.0;
};

}  // namespace hydromission

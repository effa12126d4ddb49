#pragma once

#include <cstdint>
#include <vector>

#include "hydromission/bbo.hpp"
#include "hydromission/geometry.hpp"
#include "hydromission/spline.hpp"
#include "hydromission/world.hpp"

namespace hydromission {

struct VehicleModel {
    double water_speed = 2.0;  // |v|, m/s, constant thrust assumption
    double surge_max = 4.0;    // u_max
    double sway_max = 2.5;     // v_max
    double turn_max = 0.35;    // max heading change per sample step, rad
};

struct SplineConfig {
    int control_points = 6;  // n, first/last pinned to start/goal
    int order = 3;           // K, quadratic
    int samples_per_span = 20;

    int sample_count() const { return samples_per_span * (control_points - order + 1) + 1; }
};

struct PathWeights {
    double surge = 50.0;
    double sway = 50.0;
    double heading = 50.0;
    double collision = 1e4;  // per offending sample
};

struct PathState {
    Vec3 position;
    double psi = 0.0;
    double theta = 0.0;
    Vec3 velocity;  // composed ground velocity (u, v, w)
};

struct CostBreakdown {
    double length = 0.0;        // L_phi
    double nominal_time = 0.0;  // T_phi = L_phi / |v|
    double ground_time = 0.0;   // T_phi^g, tangent-projected composed velocity
    double surge_violation = 0.0;
    double sway_violation = 0.0;
    double heading_violation = 0.0;
    int coast_hits = 0;
    int obstacle_hits = 0;
    double uncertain_risk = 0.0;
    double total = 0.0;

    double violation_sum() const { return total - nominal_time; }
    bool collision_free() const { return coast_hits == 0 && obstacle_hits == 0; }
};

struct PathCandidate {
    std::vector<Vec3> control_points;
    std::vector<PathState> samples;
    CostBreakdown cost;
};

struct PathProblem {
    Vec3 start;
    Vec3 goal;
    const WorldSnapshot* world = nullptr;
    VehicleModel vehicle;
    SplineConfig spline;
    PathWeights weights;
    Box3 bounds;  // search box for free control points
};

// Heading/pitch of each segment; zero-length segments carry the
// previous orientation forward.
void segment_orientations(const std::vector<Vec3>& positions, std::vector<double>& psi,
                          std::vector<double>& theta);

// Ground velocity: water-referenced velocity along (psi, theta) plus
// the current decomposed the same way.
Vec3 compose_velocity(double water_speed, double psi, double theta, const CurrentSample& current);

// Axis-aligned search box inflated around the start-goal segment and
// clipped to the terrain extent.
Box3 make_bounds(const Vec3& start, const Vec3& goal, const TerrainGrid& terrain,
                 double inflation = 0.25);

// Samples the spline through the full control polygon and fills the
// complete cost breakdown against the problem's world snapshot.
PathCandidate evaluate_candidate(const std::vector<Vec3>& control_points,
                                 const PathProblem& problem);

struct PathPlanResult {
    PathCandidate best;
    BboResult history;
};

PathPlanResult plan_path(const PathProblem& problem, const BboConfig& config, std::uint64_t seed);

// Re-plans from the vehicle's position toward the same goal, seeding a
// fraction of the population from the untraversed remainder of the
// previous best path. Falls back to plan_path when the previous path is
// already traversed.
PathPlanResult replan_path(const PathCandidate& previous, const Vec3& vehicle_pos,
                           const PathProblem& problem, const BboConfig& config, std::uint64_t seed,
                           double warm_fraction = 0.3);

}  // namespace hydromission

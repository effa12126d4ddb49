#include "hydromission/pathplan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hydromission {

namespace {

double wrap_angle(double a) {
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

}  // namespace

void segment_orientations(const std::vector<Vec3>& positions, std::vector<double>& psi,
                          std::vector<double>& theta) {
    if (positions.size() < 2) {
        throw std::invalid_argument("segment_orientations: need at least 2 samples");
    }
    const std::size_t segments = positions.size() - 1;
    psi.assign(segments, 0.0);
    theta.assign(segments, 0.0);
    for (std::size_t i = 0; i < segments; ++i) {
        const Vec3 d = positions[i + 1] - positions[i];
        const double horizontal = std::sqrt(d.x * d.x + d.y * d.y);
        if (horizontal == 0.0 && d.z == 0.0) {
            if (i > 0) {
                psi[i] = psi[i - 1];
                theta[i] = theta[i - 1];
            }
            continue;
        }
        psi[i] = std::atan2(d.y, d.x);
        theta[i] = std::atan2(-d.z, horizontal);
    }
    return;
}

Vec3 compose_velocity(double water_speed, double psi, double theta, const CurrentSample& current) {
    return Vec3{
        water_speed * std::cos(theta) * std::cos(psi) +
            current.magnitude * std::cos(current.theta) * std::cos(current.psi),
        water_speed * std::cos(theta) * std::sin(psi) +
            current.magnitude * std::cos(current.theta) * std::sin(current.psi),
        water_speed * std::sin(theta) + current.magnitude * std::sin(current.theta),
    };
}

Box3 make_bounds(const Vec3& start, const Vec3& goal, const TerrainGrid& terrain,
                 double inflation) {
    const double pad = inflation * std::max(distance(start, goal), 100.0);
    Box3 box;
    box.lo = Vec3{std::min(start.x, goal.x) - pad, std::min(start.y, goal.y) - pad,
                  std::min(start.z, goal.z) - pad};
    box.hi = Vec3{std::max(start.x, goal.x) + pad, std::max(start.y, goal.y) + pad,
                  std::max(start.z, goal.z) + pad};
    box.lo.x = std::max(box.lo.x, 0.0);
    box.lo.y = std::max(box.lo.y, 0.0);
    box.lo.z = std::max(box.lo.z, 0.0);
    box.hi.x = std::min(box.hi.x, terrain.extent_x() - 1e-6);
    box.hi.y = std::min(box.hi.y, terrain.extent_y() - 1e-6);
    box.hi.z = std::min(box.hi.z, terrain.depth_extent);
    return box;
}

PathCandidate evaluate_candidate(const std::vector<Vec3>& control_points,
                                 const PathProblem& problem) {
    const WorldSnapshot& world = *problem.world;
    const TerrainGrid& terrain = *world.terrain;
    const double speed = problem.vehicle.water_speed;

    PathCandidate cand;
    cand.control_points = control_points;
    const std::vector<Vec3> positions =
        evaluate_spline(control_points, problem.spline.order, problem.spline.sample_count());

    std::vector<double> psi;
    std::vector<double> theta;
    segment_orientations(positions, psi, theta);

    CostBreakdown& cb = cand.cost;
    cb.length = polyline_length(positions);
    cb.nominal_time = cb.length / speed;

    cand.samples.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const std::size_t seg = std::min(i, psi.size() - 1);
        PathState& st = cand.samples[i];
        st.position = positions[i];
        st.psi = psi[seg];
        st.theta = theta[seg];

        CurrentSample current;
        bool inside = terrain.in_bounds(st.position);
        if (inside) {
            current = world.field.sample(st.position);
        }
        st.velocity = compose_velocity(speed, st.psi, st.theta, current);

        cb.surge_violation += std::max(0.0, st.velocity.x - problem.vehicle.surge_max);
        cb.sway_violation += std::max(0.0, std::abs(st.velocity.y) - problem.vehicle.sway_max);
        if (i > 0) {
            const double turn = std::abs(wrap_angle(st.psi - cand.samples[i - 1].psi));
            cb.heading_violation += std::max(0.0, turn - problem.vehicle.turn_max);
        }

        if (!inside || terrain.class_at(st.position.x, st.position.y) == CellClass::Coast) {
            ++cb.coast_hits;
        } else if (terrain.class_at(st.position.x, st.position.y) == CellClass::Uncertain) {
            cb.uncertain_risk += terrain.risk_at(st.position.x, st.position.y);
        }
        for (const Obstacle& ob : world.obstacles) {
            if (ob.out_of_bounds) {
                continue;
            }
            if (distance(st.position, ob.position) <= ob.effective_radius(world.obstacle_growth_rate)) {
                ++cb.obstacle_hits;
                break;  // union over the obstacle set: one hit per sample
            }
        }
    }

    // realized travel time: tangent projection of the composed velocity,
    // floored to avoid stalls against adverse current. Velocities carry an
    // up-positive vertical component while positions use down-positive
    // depth, so the tangent's z flips sign for the projection.
    const double floor_speed = 0.1 * speed;
    for (std::size_t i = 1; i < positions.size(); ++i) {
        const Vec3 d = positions[i] - positions[i - 1];
        const double ds = d.norm();
        if (ds == 0.0) {
            continue;
        }
        const Vec3 tangent{d.x / ds, d.y / ds, -d.z / ds};
        const double along = std::max(floor_speed, cand.samples[i - 1].velocity.dot(tangent));
        cb.ground_time += ds / along;
    }

    cb.total = cb.nominal_time + problem.weights.surge * cb.surge_violation +
               problem.weights.sway * cb.sway_violation +
               problem.weights.heading * cb.heading_violation +
               problem.weights.collision *
                   (cb.coast_hits + cb.obstacle_hits + cb.uncertain_risk);
    return cand;
}

namespace {

class PathEncoding : public Encoding {
  public:
    PathEncoding(const PathProblem& problem) : problem_(problem) {
        free_points_ = problem.spline.control_points - 2;
        if (free_points_ < 1) {
            throw std::invalid_argument("plan_path: need at least 3 control points");
        }
    }

    std::vector<double> random_solution(Rng& rng) override {
        std::vector<double> siv(static_cast<std::size_t>(free_points_) * 3);
        for (int p = 0; p < free_points_; ++p) {
            for (int axis = 0; axis < 3; ++axis) {
                const double lo = axis_lo(axis);
                const double hi = axis_hi(axis);
                siv[static_cast<std::size_t>(p) * 3 + axis] = rng.uniform(lo, hi);
            }
        }
        return siv;
    }

    Evaluation evaluate(const std::vector<double>& siv) override {
        const PathCandidate cand = evaluate_candidate(to_control_points(siv), problem_);
        return {cand.cost.total, cand.cost.violation_sum()};
    }

    void mutate(std::vector<double>& siv, double rate, Rng& rng) override {
        for (std::size_t i = 0; i < siv.size(); ++i) {
            if (rng.uniform(0.0, 1.0) < rate) {
                const int axis = static_cast<int>(i % 3);
                siv[i] += rng.normal(0.0, 0.1 * (axis_hi(axis) - axis_lo(axis)));
            }
        }
    }

    bool repair(std::vector<double>& siv) override {
        for (std::size_t i = 0; i < siv.size(); ++i) {
            const int axis = static_cast<int>(i % 3);
            siv[i] = std::clamp(siv[i], axis_lo(axis), axis_hi(axis));
        }
        return true;
    }

    std::vector<Vec3> to_control_points(const std::vector<double>& siv) const {
        std::vector<Vec3> cp;
        cp.reserve(static_cast<std::size_t>(free_points_) + 2);
        cp.push_back(problem_.start);
        for (int p = 0; p < free_points_; ++p) {
            cp.push_back(Vec3{siv[static_cast<std::size_t>(p) * 3],
                              siv[static_cast<std::size_t>(p) * 3 + 1],
                              siv[static_cast<std::size_t>(p) * 3 + 2]});
        }
        cp.push_back(problem_.goal);
        return cp;
    }

  private:
    double axis_lo(int axis) const {
        return axis == 0 ? problem_.bounds.lo.x : axis == 1 ? problem_.bounds.lo.y : problem_.bounds.lo.z;
    }
    double axis_hi(int axis) const {
        return axis == 0 ? problem_.bounds.hi.x : axis == 1 ? problem_.bounds.hi.y : problem_.bounds.hi.z;
    }

    PathProblem problem_;
    int free_points_ = 0;
};

PathProblem prepared_problem(const PathProblem& raw) {
    if (raw.world == nullptr || raw.world->terrain == nullptr) {
        throw std::invalid_argument("plan_path: problem has no world snapshot");
    }
    const TerrainGrid& terrain = *raw.world->terrain;
    if (distance(raw.start, raw.goal) < 1e-9) {
        throw std::invalid_argument("plan_path: start equals goal");
    }
    if (terrain.class_at(raw.start.x, raw.start.y) == CellClass::Coast) {
        throw std::invalid_argument("plan_path: start lies in a Coast cell");
    }
    if (terrain.class_at(raw.goal.x, raw.goal.y) == CellClass::Coast) {
        throw std::invalid_argument("plan_path: goal lies in a Coast cell");
    }
    PathProblem problem = raw;
    const bool no_bounds = problem.bounds.lo.x == 0.0 && problem.bounds.hi.x == 0.0 &&
                           problem.bounds.lo.y == 0.0 && problem.bounds.hi.y == 0.0;
    if (no_bounds) {
        problem.bounds = make_bounds(problem.start, problem.goal, terrain);
    }
    return problem;
}

}  // namespace

PathPlanResult plan_path(const PathProblem& raw, const BboConfig& config, std::uint64_t seed) {
    const PathProblem problem = prepared_problem(raw);
    PathEncoding encoding(problem);
    PathPlanResult result;
    result.history = run_bbo(encoding, config, seed);
    result.best = evaluate_candidate(encoding.to_control_points(result.history.best.siv), problem);
    return result;
}

PathPlanResult replan_path(const PathCandidate& previous, const Vec3& vehicle_pos,
                           const PathProblem& raw, const BboConfig& config, std::uint64_t seed,
                           double warm_fraction) {
    PathProblem problem = raw;
    problem.start = vehicle_pos;
    problem.bounds = Box3{};  // rebuilt around the new start

    if (previous.samples.empty()) {
        return plan_path(problem, config, seed);
    }

    // locate the vehicle on the previous path
    std::size_t nearest = 0;
    double best_d = distance(previous.samples[0].position, vehicle_pos);
    for (std::size_t i = 1; i < previous.samples.size(); ++i) {
        const double d = distance(previous.samples[i].position, vehicle_pos);
        if (d < best_d) {
            best_d = d;
            nearest = i;
        }
    }
    if (nearest + 1 >= previous.samples.size()) {
        return plan_path(problem, config, seed);  // previous path fully traversed
    }

    const PathProblem prepared = prepared_problem(problem);
    PathEncoding encoding(prepared);

    // Re-fit the remaining portion: sample it uniformly to recover a
    // control polygon for the shortened problem.
    const int n = prepared.spline.control_points;
    const std::size_t remaining = previous.samples.size() - nearest;
    std::vector<double> warm_siv;
    for (int p = 1; p + 1 < n; ++p) {
        const double frac = static_cast<double>(p) / static_cast<double>(n - 1);
        const std::size_t k = nearest + static_cast<std::size_t>(frac * static_cast<double>(remaining - 1));
        const Vec3& pos = previous.samples[k].position;
        warm_siv.push_back(pos.x);
        warm_siv.push_back(pos.y);
        warm_siv.push_back(pos.z);
    }
    encoding.repair(warm_siv);

    const int warm_count =
        std::max(1, static_cast<int>(std::lround(warm_fraction * config.population)));
    Rng jitter_rng(derive_seed(seed, 0x3a3));
    std::vector<std::vector<double>> initial;
    initial.push_back(warm_siv);
    for (int i = 1; i < warm_count; ++i) {
        std::vector<double> jittered = warm_siv;
        for (std::size_t k = 0; k < jittered.size(); ++k) {
            const int axis = static_cast<int>(k % 3);
            const double span = prepared.bounds.span(axis);
            jittered[k] += jitter_rng.normal(0.0, 0.05 * span);
        }
        encoding.repair(jittered);
        initial.push_back(std::move(jittered));
    }

    PathPlanResult result;
    result.history = run_bbo(encoding, config, seed, initial);
    result.best = evaluate_candidate(encoding.to_control_points(result.history.best.siv), prepared);
    return result;
}

}  // namespace hydromission

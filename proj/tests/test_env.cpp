#include <cmath>
#include <numbers>

#include "doctest.h"

#include "hydromission/current.hpp"
#include "hydromission/maps.hpp"
#include "hydromission/obstacle.hpp"
#include "hydromission/terrain.hpp"
#include "hydromission/world.hpp"

using namespace hydromission;

namespace {

GrayImage uniform_image(int w, int h, std::uint8_t value) {
    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.assign(static_cast<std::size_t>(w) * h, value);
    return img;
}

// Independent evaluation of the single-vortex field used as an oracle:
// tangential speed strength/(2*pi*r) * (1 - exp(-(r/radius)^2)) turned
// 90 degrees counterclockwise from the radial direction.
Vec2 oracle_horizontal(const VortexParams& v, double x, double y) {
    const double dx = x - v.center.x;
    const double dy = y - v.center.y;
    const double r = std::hypot(dx, dy);
    const double tangential =
        v.strength / (2.0 * std::numbers::pi * r) * (1.0 - std::exp(-(r * r) / (v.radius * v.radius)));
    return {tangential * (-dy / r), tangential * (dx / r)};
}

}  // namespace

TEST_CASE("all-white image clusters to all Water") {
    const TerrainGrid g = cluster_map(uniform_image(10, 10, 255), 3, 10.0, 1000.0);
    CHECK(g.degenerate);
    int water = 0;
    for (const CellClass c : g.classes) water += c == CellClass::Water ? 1 : 0;
    CHECK(water == 100);
}

TEST_CASE("two-intensity image yields Coast and Water halves, no Uncertain") {
    GrayImage img = uniform_image(10, 10, 255);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 5; ++x) img.at(x, y) = 0;
    const TerrainGrid g = cluster_map(img, 3, 10.0, 1000.0);
    int coast = 0, uncertain = 0, water = 0;
    for (const CellClass c : g.classes) {
        coast += c == CellClass::Coast ? 1 : 0;
        uncertain += c == CellClass::Uncertain ? 1 : 0;
        water += c == CellClass::Water ? 1 : 0;
    }
    CHECK(coast == 50);
    CHECK(uncertain == 0);
    CHECK(water == 50);
    CHECK(g.class_at(5.0, 5.0) == CellClass::Coast);
    CHECK(g.class_at(95.0, 5.0) == CellClass::Water);
}

TEST_CASE("cluster_map rejects k != 3") {
    CHECK_THROWS(cluster_map(uniform_image(4, 4, 100), 2, 10.0, 1000.0));
    CHECK_THROWS(cluster_map(uniform_image(4, 4, 100), 4, 10.0, 1000.0));
}

TEST_CASE("archipelago Coast fraction tracks the generating mask") {
    const SyntheticMap map = make_archipelago_map(1000, 1000, 12, 7);
    const TerrainGrid g = cluster_map(map.image, 3, 10.0, 1000.0);
    int coast = 0;
    for (const CellClass c : g.classes) coast += c == CellClass::Coast ? 1 : 0;
    const double coast_fraction = static_cast<double>(coast) / (1000.0 * 1000.0);
    CHECK(std::abs(coast_fraction - map.land_fraction) <= 0.02);
}

TEST_CASE("terrain risk bounds per class") {
    const SyntheticMap map = make_archipelago_map(300, 300, 6, 3);
    const TerrainGrid g = cluster_map(map.image, 3, 10.0, 1000.0);
    bool saw_uncertain = false;
    for (std::size_t i = 0; i < g.classes.size(); ++i) {
        if (g.classes[i] == CellClass::Water) CHECK(g.risk[i] == 0.0);
        if (g.classes[i] == CellClass::Uncertain) {
            saw_uncertain = true;
            CHECK(g.risk[i] > 0.0);
            CHECK(g.risk[i] <= 0.35);
        }
    }
    CHECK(saw_uncertain);
}

TEST_CASE("out-of-extent reads as impassable Coast") {
    const TerrainGrid g = cluster_map(uniform_image(10, 10, 255), 3, 10.0, 1000.0);
    CHECK(g.class_at(-1.0, 5.0) == CellClass::Coast);
    CHECK(g.class_at(5.0, 100.0) == CellClass::Coast);
    CHECK_FALSE(g.in_bounds(100.0, 5.0));
    CHECK(g.in_bounds(99.9, 5.0));
}

TEST_CASE("vortex center is regularized to zero horizontal current") {
    VortexParams v;
    v.center = {500.0, 500.0};
    v.strength = 1000.0;
    v.radius = 200.0;
    const CurrentField field({v}, 1, 1000.0);
    const CurrentSample c = field.sample({500.0, 500.0, 10.0});
    CHECK(c.u == 0.0);
    CHECK(c.v == 0.0);
}

TEST_CASE("zero-strength vortex produces no current") {
    VortexParams v;
    v.center = {100.0, 100.0};
    v.strength = 0.0;
    v.radius = 50.0;
    const CurrentField field({v}, 1, 1000.0);
    const CurrentSample c = field.sample({400.0, 250.0, 10.0});
    CHECK(c.u == 0.0);
    CHECK(c.v == 0.0);
    CHECK(c.w == 0.0);
    CHECK(c.magnitude == 0.0);
    CHECK(c.psi == 0.0);
    CHECK(c.theta == 0.0);
}

TEST_CASE("vortex circulation is antisymmetric about the center and matches the closed form") {
    VortexParams v;
    v.center = {1000.0, 800.0};
    v.strength = 2500.0;
    v.radius = 300.0;
    v.vertical_scale = 0.0;
    const CurrentField field({v}, 1, 1000.0);

    const double offsets[4][2] = {{150.0, 0.0}, {-150.0, 0.0}, {0.0, 220.0}, {0.0, -220.0}};
    for (const auto& off : offsets) {
        const double x = v.center.x + off[0];
        const double y = v.center.y + off[1];
        const CurrentSample c = field.sample({x, y, 5.0});
        const Vec2 expect = oracle_horizontal(v, x, y);
        CHECK(c.u == doctest::Approx(expect.x).epsilon(1e-12));
        CHECK(c.v == doctest::Approx(expect.y).epsilon(1e-12));
    }
    // mirrored points carry opposite horizontal components
    const CurrentSample a = field.sample({v.center.x + 150.0, v.center.y, 5.0});
    const CurrentSample b = field.sample({v.center.x - 150.0, v.center.y, 5.0});
    CHECK(a.u == doctest::Approx(-b.u).epsilon(1e-12));
    CHECK(a.v == doctest::Approx(-b.v).epsilon(1e-12));
}

TEST_CASE("superposition of vortices equals the sum of individual fields") {
    VortexParams a;
    a.center = {300.0, 400.0};
    a.strength = 1500.0;
    a.radius = 250.0;
    a.vertical_scale = 0.1;
    VortexParams b = a;
    b.center = {900.0, 200.0};
    b.strength = -800.0;
    b.radius = 180.0;

    const CurrentField both({a, b}, 1, 1000.0);
    const CurrentField only_a({a}, 1, 1000.0);
    const CurrentField only_b({b}, 1, 1000.0);
    const Vec3 probes[] = {{100.0, 100.0, 0.0}, {500.0, 500.0, 900.0}, {850.0, 350.0, 400.0}};
    for (const Vec3& p : probes) {
        const CurrentSample s = both.sample(p);
        const CurrentSample sa = only_a.sample(p);
        const CurrentSample sb = only_b.sample(p);
        CHECK(s.u == doctest::Approx(sa.u + sb.u).epsilon(1e-12));
        CHECK(s.v == doctest::Approx(sa.v + sb.v).epsilon(1e-12));
        CHECK(s.w == doctest::Approx(sa.w + sb.w).epsilon(1e-12));
    }
}

TEST_CASE("same depth band receives identical horizontal current") {
    VortexParams v;
    v.center = {500.0, 500.0};
    v.strength = 1200.0;
    v.radius = 300.0;
    v.layer = 1;
    const CurrentField field({v}, 4, 1000.0);
    const CurrentSample s1 = field.sample({700.0, 600.0, 260.0});
    const CurrentSample s2 = field.sample({700.0, 600.0, 490.0});
    CHECK(s1.u == s2.u);
    CHECK(s1.v == s2.v);
    const CurrentSample other_band = field.sample({700.0, 600.0, 510.0});
    CHECK(other_band.u == 0.0);
}

TEST_CASE("finalize_sample direction identities") {
    const CurrentSample c = finalize_sample(1.0, 1.0, std::sqrt(2.0));
    CHECK(c.magnitude == doctest::Approx(2.0));
    CHECK(c.psi == doctest::Approx(std::numbers::pi / 4.0));
    CHECK(c.theta == doctest::Approx(std::asin(std::sqrt(2.0) / 2.0)));
}

TEST_CASE("zero update rate leaves vortex parameters unchanged") {
    VortexParams v;
    v.center = {100.0, 200.0};
    v.strength = 900.0;
    v.radius = 120.0;
    v.update_rate = 0.0;
    v.sigma_center_x = v.sigma_center_y = v.sigma_radius = v.sigma_strength = 10.0;
    CurrentField field({v}, 1, 1000.0);
    Rng rng(5);
    field.evolve(rng);
    CHECK(field.vortices()[0].center.x == 100.0);
    CHECK(field.vortices()[0].center.y == 200.0);
    CHECK(field.vortices()[0].strength == 900.0);
    CHECK(field.vortices()[0].radius == 120.0);
}

TEST_CASE("zero sigmas make the update a fixed point even at unit rate") {
    VortexParams v;
    v.center = {100.0, 200.0};
    v.strength = 900.0;
    v.radius = 120.0;
    v.update_rate = 1.0;
    CurrentField field({v}, 1, 1000.0);
    Rng rng(5);
    field.evolve(rng);
    CHECK(field.vortices()[0].center.x == 100.0);
    CHECK(field.vortices()[0].strength == 900.0);
    CHECK(field.vortices()[0].radius == 120.0);
}

TEST_CASE("radius increments match the configured noise scale") {
    VortexParams v;
    v.radius = 1e7;  // far above the clamp floor
    v.update_rate = 0.5;
    v.sigma_radius = 4.0;
    CurrentField field({v}, 1, 1000.0);
    Rng rng(99);
    const int steps = 2000;
    double prev = v.radius;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < steps; ++i) {
        field.evolve(rng);
        const double inc = field.vortices()[0].radius - prev;
        prev = field.vortices()[0].radius;
        sum += inc;
        sum_sq += inc * inc;
    }
    const double mean = sum / steps;
    const double var = sum_sq / steps - mean * mean;
    const double expected = (0.5 * 4.0) * (0.5 * 4.0);
    CHECK(std::abs(var - expected) <= 0.1 * expected);
}

TEST_CASE("radius clamps at the positive floor") {
    VortexParams v;
    v.radius = 11.0;
    v.update_rate = 1.0;
    v.sigma_radius = 100.0;
    CurrentField field({v}, 1, 1000.0);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        field.evolve(rng);
        CHECK(field.vortices()[0].radius >= field.radius_floor);
    }
}

TEST_CASE("static obstacle never moves, afloat holds in still water") {
    const TerrainGrid g = cluster_map(uniform_image(100, 100, 255), 3, 10.0, 1000.0);
    const CurrentField still({}, 1, 1000.0);
    std::vector<Obstacle> obs(2);
    obs[0].kind = ObstacleKind::Static;
    obs[0].position = {500.0, 500.0, 50.0};
    obs[1].kind = ObstacleKind::Afloat;
    obs[1].position = {400.0, 300.0, 20.0};
    step_obstacles(obs, still, g, 25.0);
    CHECK(obs[0].position.x == 500.0);
    CHECK(obs[1].position.x == 400.0);
    CHECK(obs[1].position.y == 300.0);
    CHECK(obs[0].age == 25.0);
}

TEST_CASE("self-motivated obstacle integrates its intrinsic velocity") {
    const TerrainGrid g = cluster_map(uniform_image(100, 100, 255), 3, 10.0, 1000.0);
    const CurrentField still({}, 1, 1000.0);
    std::vector<Obstacle> obs(1);
    obs[0].kind = ObstacleKind::SelfMotivated;
    obs[0].position = {100.0, 100.0, 10.0};
    obs[0].intrinsic_velocity = {1.0, 0.0, 0.0};
    step_obstacles(obs, still, g, 10.0);
    CHECK(obs[0].position.x == doctest::Approx(110.0));
    CHECK(obs[0].position.y == doctest::Approx(100.0));
    CHECK_FALSE(obs[0].out_of_bounds);
}

TEST_CASE("obstacle leaving the extent is retained but flagged") {
    const TerrainGrid g = cluster_map(uniform_image(10, 10, 255), 3, 10.0, 1000.0);
    const CurrentField still({}, 1, 1000.0);
    std::vector<Obstacle> obs(1);
    obs[0].kind = ObstacleKind::SelfMotivated;
    obs[0].position = {95.0, 50.0, 10.0};
    obs[0].intrinsic_velocity = {1.0, 0.0, 0.0};
    step_obstacles(obs, still, g, 10.0);
    REQUIRE(obs.size() == 1);
    CHECK(obs[0].out_of_bounds);
}

TEST_CASE("step_obstacles requires positive dt") {
    const TerrainGrid g = cluster_map(uniform_image(10, 10, 255), 3, 10.0, 1000.0);
    const CurrentField still({}, 1, 1000.0);
    std::vector<Obstacle> obs(1);
    CHECK_THROWS(step_obstacles(obs, still, g, 0.0));
}

TEST_CASE("effective radius grows linearly with age and uncertainty") {
    Obstacle ob;
    ob.radius = 100.0;
    ob.uncertainty = 5.0;
    ob.age = 200.0;
    CHECK(ob.effective_radius(0.01) == doctest::Approx(100.0 + 0.01 * 5.0 * 200.0));
}

TEST_CASE("sensing an empty set yields an empty observation") {
    Rng rng(1);
    CHECK(sense_obstacles({}, {0.0, 0.0, 0.0}, 100.0, rng).empty());
}

TEST_CASE("noiseless sensing returns exact positions and drops far obstacles") {
    std::vector<Obstacle> obs(2);
    obs[0].position = {10.0, 0.0, 0.0};
    obs[0].uncertainty = 0.0;
    obs[1].position = {500.0, 0.0, 0.0};
    Rng rng(1);
    const auto seen = sense_obstacles(obs, {0.0, 0.0, 0.0}, 100.0, rng);
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].position.x == 10.0);
}

TEST_CASE("sensing noise std tracks the uncertainty ratio") {
    std::vector<Obstacle> obs(1);
    obs[0].position = {0.0, 0.0, 0.0};
    obs[0].uncertainty = 5.0;
    Rng rng(42);
    const int n = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto seen = sense_obstacles(obs, {1.0, 0.0, 0.0}, 100.0, rng);
        sum += seen[0].position.x;
        sum_sq += seen[0].position.x * seen[0].position.x;
    }
    const double mean = sum / n;
    const double std_dev = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::abs(std_dev - 5.0) <= 0.5);
}

TEST_CASE("worlds advanced from the same seed sample identically") {
    VortexParams v;
    v.center = {300.0, 300.0};
    v.strength = 1000.0;
    v.radius = 200.0;
    v.update_rate = 1.0;
    v.sigma_center_x = v.sigma_center_y = 5.0;
    v.sigma_radius = 2.0;
    v.sigma_strength = 20.0;
    const TerrainGrid g = cluster_map(uniform_image(100, 100, 255), 3, 10.0, 1000.0);
    std::vector<Obstacle> obs(1);
    obs[0].kind = ObstacleKind::Afloat;
    obs[0].position = {350.0, 340.0, 30.0};

    World w1(g, CurrentField({v}, 1, 1000.0), obs, 77);
    World w2(g, CurrentField({v}, 1, 1000.0), obs, 77);
    for (int i = 0; i < 5; ++i) {
        w1.advance(100.0);
        w2.advance(100.0);
    }
    const WorldSnapshot s1 = w1.snapshot();
    const WorldSnapshot s2 = w2.snapshot();
    const Vec3 probes[] = {{100.0, 100.0, 10.0}, {600.0, 420.0, 800.0}};
    for (const Vec3& p : probes) {
        CHECK(s1.field.sample(p).u == s2.field.sample(p).u);
        CHECK(s1.field.sample(p).v == s2.field.sample(p).v);
    }
    CHECK(s1.obstacles[0].position.x == s2.obstacles[0].position.x);
    CHECK(s1.obstacles[0].position.y == s2.obstacles[0].position.y);
}

TEST_CASE("pgm round trip preserves pixels") {
    const SyntheticMap map = make_archipelago_map(64, 48, 4, 9);
    const std::string path = "test_roundtrip.pgm";
    save_pgm(map.image, path);
    const GrayImage back = load_pgm(path);
    REQUIRE(back.width == 64);
    REQUIRE(back.height == 48);
    CHECK(back.pixels == map.image.pixels);
    std::remove(path.c_str());
}

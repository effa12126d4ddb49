#pragma once

#include <cmath>

namespace hydromission {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

struct Box3 {
    Vec3 lo;
    Vec3 hi;

    double clamp_axis(double v, int axis) const {
        const double l = axis == 0 ? lo.x : axis == 1 ? lo.y : lo.z;
        const double h = axis == 0 ? hi.x : axis == 1 ? hi.y : hi.z;
        return v < l ? l : (v > h ? h : v);
    }
    double span(int axis) const {
        return axis == 0 ? hi.x - lo.x : axis == 1 ? hi.y - lo.y : hi.z - lo.z;
    }
};

}  // namespace hydromission

#include "hydromission/spline.hpp"

#include <stdexcept>

namespace hydromission {

namespace {

std::vector<double> clamped_knots(int n, int order) {
    // n + order knots: `order` zeros, interior equally spaced, `order` ones
    std::vector<double> knots(static_cast<std::size_t>(n + order));
    const int interior = n - order;  // number of interior knots
    for (int i = 0; i < n + order; ++i) {
        if (i < order) {
            knots[static_cast<std::size_t>(i)] = 0.0;
        } else if (i >= n) {
            knots[static_cast<std::size_t>(i)] = 1.0;
        } else {
            knots[static_cast<std::size_t>(i)] =
                static_cast<double>(i - order + 1) / static_cast<double>(interior + 1);
        }
    }
    return knots;
}

}  // namespace

std::vector<double> bspline_basis(int n, int order, double t) {
    const std::vector<double> knots = clamped_knots(n, order);
    // Cox-de Boor recursion, built up by degree; 0/0 terms read as 0.
    std::vector<double> basis(static_cast<std::size_t>(n + order - 1), 0.0);
    if (t >= 1.0) {
        std::vector<double> out(static_cast<std::size_t>(n), 0.0);
        out.back() = 1.0;
        return out;
    }
    for (int i = 0; i < n + order - 1; ++i) {
        if (t >= knots[static_cast<std::size_t>(i)] && t < knots[static_cast<std::size_t>(i + 1)]) {
            basis[static_cast<std::size_t>(i)] = 1.0;
        }
    }
    for (int k = 2; k <= order; ++k) {
        for (int i = 0; i + k < n + order; ++i) {
            const double left_den = knots[static_cast<std::size_t>(i + k - 1)] - knots[static_cast<std::size_t>(i)];
            const double right_den = knots[static_cast<std::size_t>(i + k)] - knots[static_cast<std::size_t>(i + 1)];
            double value = 0.0;
            if (left_den > 0.0) {
                value += (t - knots[static_cast<std::size_t>(i)]) / left_den * basis[static_cast<std::size_t>(i)];
            }
            if (right_den > 0.0) {
                value += (knots[static_cast<std::size_t>(i + k)] - t) / right_den * basis[static_cast<std::size_t>(i + 1)];
            }
            basis[static_cast<std::size_t>(i)] = value;
        }
    }
    basis.resize(static_cast<std::size_t>(n));
    return basis;
}

std::vector<Vec3> evaluate_spline(const std::vector<Vec3>& control_points, int order, int samples) {
    const int n = static_cast<int>(control_points.size());
    if (order < 2) {
        throw std::invalid_argument("evaluate_spline: order must be >= 2");
    }
    if (n < order) {
        throw std::invalid_argument("evaluate_spline: need at least `order` control points");
    }
    if (samples < 2) {
        throw std::invalid_argument("evaluate_spline: need at least 2 samples");
    }
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        const double t = static_cast<double>(s) / static_cast<double>(samples - 1);
        const std::vector<double> basis = bspline_basis(n, order, t);
        Vec3 p;
        for (int i = 0; i < n; ++i) {
            p = p + control_points[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(i)];
        }
        out.push_back(p);
    }
    return out;
}

double polyline_length(const std::vector<Vec3>& points) {
    double length = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        length += distance(points[i - 1], points[i]);
    }
    return length;
}

}  // namespace hydromission

#pragma once

#include <vector>

#include "hydromission/geometry.hpp"

namespace hydromission {

// Basis values N_{i,order}(t) for a clamped uniform knot vector over n
// control points, t in [0, 1].
std::vector<double> bspline_basis(int n, int order, double t);

// Samples the clamped uniform B-spline through the control points at
// `samples` equally spaced parameter values. Interpolates the first and
// last control points; every sample is a convex combination of the
// control points. Throws if n < order or order < 2.
std::vector<Vec3> evaluate_spline(const std::vector<Vec3>& control_points, int order, int samples);

double polyline_length(const std::vector<Vec3>& points);

}  // namespace hydromission

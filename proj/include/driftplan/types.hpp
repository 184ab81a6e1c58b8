#pragma once

#include <complex>

#include <Eigen/Dense>

namespace driftplan {

using Scalar = double;
using Complex = std::complex<double>;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vec2 = Eigen::Vector2d;
using CVec2 = Eigen::Vector2cd;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Canonical wrap of a coordinate into [-pi, pi).
inline double wrap_coord(double v) {
    double w = std::fmod(v + M_PI, kTwoPi);
    if (w < 0) w += kTwoPi;
    return w - M_PI;
}

inline Vec2 wrap_position(const Vec2& x) {
    return {wrap_coord(x[0]), wrap_coord(x[1])};
}

/// Minimal-image difference a-b on the periodic domain, each component in [-pi, pi).
inline Vec2 torus_diff(const Vec2& a, const Vec2& b) {
    return {wrap_coord(a[0] - b[0]), wrap_coord(a[1] - b[1])};
}

/// Geodesic distance on the flat torus [-pi,pi)^2.
inline double torus_distance(const Vec2& a, const Vec2& b) {
    return torus_diff(a, b).norm();
}

}  // namespace driftplan

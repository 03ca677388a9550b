#ifndef COGS_FITTING_HPP
#define COGS_FITTING_HPP

#include <array>
#include <vector>

#include "cogs/geom.hpp"

namespace cogs {

using Point2 = std::array<double, 2>;

struct CircleFit {
    Point2 center{0, 0};
    double radius = 0.0;
};

/// Kasa linearization: least-squares solve of u^2+v^2 = a*u + b*v + c,
/// center (a/2, b/2), radius sqrt(c + |center|^2).
CircleFit fit_circle_2d(const std::vector<Point2>& points);

struct LineFit {
    Vec3 point;      // centroid
    Vec3 direction;  // unit, first principal axis, oriented first->last
    double length = 0.0;
};

/// Total-least-squares line through the centroid.
LineFit fit_line(const std::vector<Vec3>& points);

struct SineFit {
    double amplitude = 0.0;
    double period = 0.0;
    double phase = 0.0;   // radians, v = A*sin(2*pi*u/T + phase) + offset
    double offset = 0.0;
    double residual = 0.0;  // final sum of squared residuals
};

/// Coarse period grid search with a linear solve per candidate, then damped
/// Gauss-Newton refinement (monotone descent; step < 1e-10 or 100 iters).
SineFit fit_sine(const std::vector<Point2>& points);

/// Uniform arc-length resampling to n points, endpoints included.
std::vector<Vec3> resample_polyline(const std::vector<Vec3>& points, size_t n);

/// Classic DTW with Euclidean point cost over 64-sample arc-length
/// resampled copies. similarity = 100 * max(0, 1 - (cost/steps)/diag(b)).
/// Asymmetric in (a, b): the normalization uses b's bounding-box diagonal.
double dtw_similarity(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                      size_t samples = 64);

/// Orthonormal in-plane frame of the best-fit plane through the points.
struct PlaneFrame {
    Vec3 origin;  // centroid
    Vec3 u_axis;  // first principal direction
    Vec3 v_axis;  // second principal direction
    Vec3 normal;
};

PlaneFrame fit_plane(const std::vector<Vec3>& points);
std::vector<Point2> project_to_plane(const std::vector<Vec3>& points, const PlaneFrame& frame);
Vec3 unproject(const PlaneFrame& frame, const Point2& p);

/// Eigen-decomposition of a symmetric 3x3 matrix (Jacobi sweeps).
/// Eigenvalues descending; columns of `vectors` are unit eigenvectors.
struct Eigen3 {
    std::array<double, 3> values{};
    std::array<Vec3, 3> vectors{};
};
Eigen3 symmetric_eigen3(const std::array<std::array<double, 3>, 3>& m);

}  // namespace cogs

#endif

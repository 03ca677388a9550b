#ifndef COGS_GEOM_HPP
#define COGS_GEOM_HPP

#include <algorithm>
#include <array>
#include <cmath>

#include "cogs/errors.hpp"

namespace cogs {

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Normalizes v; throws DegenerateRay when the norm is below eps.
inline Vec3 normalized(const Vec3& v, double eps = 1e-12) {
    double n = norm(v);
    if (n < eps) throw DegenerateRay("cannot normalize near-zero vector");
    return v / n;
}

inline bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Unit quaternion. Stored (x, y, z, w); w is the scalar part.
struct Quat {
    double x = 0.0, y = 0.0, z = 0.0, w = 1.0;

    Quat() = default;
    Quat(double x_, double y_, double z_, double w_) : x(x_), y(y_), z(z_), w(w_) {}

    static Quat identity() { return {}; }

    static Quat from_axis_angle(const Vec3& axis, double radians) {
        Vec3 a = cogs::normalized(axis);  // the member normalized() hides the free fn
        double h = radians * 0.5;
        double s = std::sin(h);
        return {a.x * s, a.y * s, a.z * s, std::cos(h)};
    }

    Quat conjugate() const { return {-x, -y, -z, w}; }

    double norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }

    Quat normalized() const {
        double n = norm();
        if (n < 1e-12) throw DegenerateInput("zero quaternion");
        return {x / n, y / n, z / n, w / n};
    }

    /// Hamilton product: (*this) composed after o when rotating vectors.
    Quat operator*(const Quat& o) const {
        return {w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w,
                w * o.w - x * o.x - y * o.y - z * o.z};
    }

    Vec3 rotate(const Vec3& v) const {
        // q v q*
        Vec3 u{x, y, z};
        Vec3 t = cross(u, v) * 2.0;
        return v + t * w + cross(u, t);
    }

    double angle_rad() const {
        double c = std::clamp(std::abs(w), 0.0, 1.0);
        return 2.0 * std::acos(c);
    }
};

inline double quat_dot(const Quat& a, const Quat& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z + a.w * b.w;
}

/// Geodesic angle between two rotations, in degrees. Uses the atan2 form
/// so angles near zero keep full precision (acos floors around 1e-8 rad).
inline double rotation_angle_deg(const Quat& a, const Quat& b) {
    Quat d = a.conjugate() * b;
    double s = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
    return rad_to_deg(2.0 * std::atan2(s, std::abs(d.w)));
}

/// Minimal-arc rotation taking unit vector `from` onto unit vector `to`.
/// Antiparallel inputs rotate 180 degrees about an arbitrary perpendicular axis.
inline Quat rotation_between(const Vec3& from, const Vec3& to) {
    Vec3 f = normalized(from);
    Vec3 t = normalized(to);
    double c = dot(f, t);
    if (c < -1.0 + 1e-12) {
        Vec3 axis = cross(f, Vec3{1, 0, 0});
        if (norm(axis) < 1e-6) axis = cross(f, Vec3{0, 1, 0});
        return Quat::from_axis_angle(axis, kPi);
    }
    Vec3 a = cross(f, t);
    Quat q{a.x, a.y, a.z, 1.0 + c};
    return q.normalized();
}

inline Quat slerp(const Quat& a, Quat b, double t) {
    double d = quat_dot(a, b);
    if (d < 0.0) { b = {-b.x, -b.y, -b.z, -b.w}; d = -d; }
    if (d > 1.0 - 1e-12) {
        Quat r{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t,
               a.z + (b.z - a.z) * t, a.w + (b.w - a.w) * t};
        return r.normalized();
    }
    double th = std::acos(std::clamp(d, -1.0, 1.0));
    double sa = std::sin((1.0 - t) * th) / std::sin(th);
    double sb = std::sin(t * th) / std::sin(th);
    return Quat{a.x * sa + b.x * sb, a.y * sa + b.y * sb,
                a.z * sa + b.z * sb, a.w * sa + b.w * sb}.normalized();
}

/// Euler convention: R = Rz(z) * Ry(y) * Rx(x), angles in degrees
/// (extrinsic rotations about the fixed world x, then y, then z axis).
Quat quat_from_euler_deg(const Vec3& euler_deg);
Vec3 quat_to_euler_deg(const Quat& q);

}  // namespace cogs

#endif

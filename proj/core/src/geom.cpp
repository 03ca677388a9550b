#include "cogs/geom.hpp"

namespace cogs {

Quat quat_from_euler_deg(const Vec3& euler_deg) {
    Quat qx = Quat::from_axis_angle({1, 0, 0}, deg_to_rad(euler_deg.x));
    Quat qy = Quat::from_axis_angle({0, 1, 0}, deg_to_rad(euler_deg.y));
    Quat qz = Quat::from_axis_angle({0, 0, 1}, deg_to_rad(euler_deg.z));
    return (qz * qy * qx).normalized();
}

Vec3 quat_to_euler_deg(const Quat& qin) {
    Quat q = qin.normalized();
    // Rotation matrix entries for R = Rz * Ry * Rx.
    double m00 = 1 - 2 * (q.y * q.y + q.z * q.z);
    double m10 = 2 * (q.x * q.y + q.w * q.z);
    double m20 = 2 * (q.x * q.z - q.w * q.y);
    double m21 = 2 * (q.y * q.z + q.w * q.x);
    double m22 = 1 - 2 * (q.x * q.x + q.y * q.y);

    double sy = std::clamp(-m20, -1.0, 1.0);
    double y = std::asin(sy);
    double x, z;
    if (std::abs(sy) < 1.0 - 1e-12) {
        x = std::atan2(m21, m22);
        z = std::atan2(m10, m00);
    } else {
        // Gimbal lock: fold all remaining rotation into x.
        double m01 = 2 * (q.x * q.y - q.w * q.z);
        double m02 = 2 * (q.x * q.z + q.w * q.y);
        x = std::atan2(sy * m01, sy * m02);
        z = 0.0;
    }
    return {rad_to_deg(x), rad_to_deg(y), rad_to_deg(z)};
}

}  // namespace cogs

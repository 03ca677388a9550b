#ifndef COGS_SCENE_HPP
#define COGS_SCENE_HPP

#include <optional>
#include <string>
#include <vector>

#include "cogs/geom.hpp"

namespace cogs {

using Rgb = std::array<double, 3>;

/// Waypoint animation attached by move_path. Runtime-only, never serialized.
struct PathAttachment {
    std::vector<Vec3> waypoints;
    double speed_mps = 0.5;
    double arc_pos = 0.0;   // current arc-length position
    int dir = 1;            // +1 toward end, -1 back toward start
};

struct SceneObject {
    std::string name;
    Vec3 position;            // meters, box center
    Quat rotation;            // serialized as Euler degrees
    Vec3 scale{1, 1, 1};      // meters, full per-axis extents
    std::optional<Rgb> color; // [0,1] each
    bool manipulatable = true;

    std::optional<PathAttachment> path;        // runtime-only
    std::optional<std::vector<Vec3>> polyline; // runtime-only, from draw_path

    /// World direction of the object's local +z axis.
    Vec3 forward() const { return rotation.rotate({0, 0, 1}); }
};

/// The mutable world state. A value type: queries are pure, mutation only
/// happens through the function executor, which returns a new Scene.
struct Scene {
    std::vector<SceneObject> objects;

    const SceneObject* find(const std::string& name) const;
    SceneObject* find(const std::string& name);
    bool empty() const { return objects.empty(); }
};

/// Case-insensitive ASCII comparison used for all object-name matching.
bool name_equals(const std::string& a, const std::string& b);

Scene load_scene(const std::string& json_text);

/// Fixed key order, every number rounded half-away-from-zero to exactly
/// three decimal places. This document is the scene block fed to the
/// intent backend.
std::string serialize_scene(const Scene& scene);

/// Formats one number the way serialize_scene does ("0.039", "-1.250").
std::string format_3dp(double v);

struct Ray {
    Vec3 origin;
    Vec3 direction;       // unit
    double length = 10.0; // meters
};

Ray make_ray(const Vec3& origin, const Vec3& toward, double length = 10.0);

struct RayHit {
    std::string name;
    Vec3 point;
    double distance = 0.0;
};

/// OBB hits sorted by distance ascending; hits beyond ray.length and names
/// in `ignore` (case-insensitive) are excluded. A ray starting inside a box
/// reports the exit point.
std::vector<RayHit> ray_intersect(const Scene& scene, const Ray& ray,
                                  const std::vector<std::string>& ignore = {});

/// Selection cone: apex at `vertex`, radius grows linearly from zero at the
/// vertex to base_radius at base_center (the fitted circle plane) and keeps
/// growing out to `height` along the axis.
struct Cone {
    Vec3 vertex;
    Vec3 axis;          // unit
    Vec3 base_center;   // on the fitted circle plane
    double base_radius = 0.01;
    double height = 10.0;
};

bool cone_contains(const Cone& cone, const Vec3& point);

/// Conservative OBB-vs-cone test: an object is selected when any of its 8
/// corners or its center lies in the cone, or the cone axis segment passes
/// through the box. Returns names in scene order.
std::vector<std::string> cone_intersect(const Scene& scene, const Cone& cone);

}  // namespace cogs

#endif
